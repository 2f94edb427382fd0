#pragma once

#include <functional>
#include <vector>

namespace wwrcva {

// Adaptive Simpson on [a, b]. Stops when the local error estimate is below
// the (absolute + relative) tolerance budget for the subinterval.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-12, double rel_tol = 1e-10,
                        int max_depth = 48);

struct GaussLaguerreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Nodes/weights for int_0^inf e^{-x} f(x) dx with n points (cached).
const GaussLaguerreRule& gauss_laguerre(int n);

// Evaluates the half-line integral with node counts 16, 32, ..., 256 and
// returns once two successive ladder results agree within tol.
double gauss_laguerre_escalated(const std::function<double(double)>& f, double tol);

}  // namespace wwrcva
