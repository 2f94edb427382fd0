#pragma once

#include <vector>

#include "wwrcva/types.hpp"

namespace wwrcva {

enum class ExposureKind { gaussian_forward, drifted_bridge };

// gaussian_forward: V_t = v0 + sigma W_t, so V_t ~ N(v0, sigma^2 t).
// drifted_bridge:   V_t = (T-t) (gamma t + sigma int_0^t (T-s)^{-1} dW_s),
//                   pinned to 0 at maturity, V_t ~ N(gamma t (T-t),
//                   sigma^2 t (T-t) / T).
struct ExposureSpec {
    ExposureKind kind = ExposureKind::gaussian_forward;
    double sigma = 0.0;
    double gamma = 0.0;     // bridge drift slope, ignored for the forward
    double v0 = 0.0;        // forward start value, must be 0 for the bridge
    double maturity = 0.0;  // bridge pin time, ignored for the forward

    void validate() const;
};

// Path on the uniform grid {0, delta, ..., n delta} driven by the given
// Brownian increments. The bridge uses the exact conditional step: the
// (T-s)^{-1}-weighted integral over a step has variance
// dt / ((T-t_k)(T-t_{k+1})), which the increment is rescaled to match, so
// every grid marginal is exact in law.
void exposure_path(const ExposureSpec& spec, double delta, const std::vector<double>& dw,
                   std::vector<double>& v_out);

// E[max(V_u, 0)] in closed form from the Gaussian marginal.
double expected_positive(const ExposureSpec& spec, double u);

ExposureKind exposure_kind_from_name(const std::string& name);
std::string exposure_kind_name(ExposureKind k);

}  // namespace wwrcva
