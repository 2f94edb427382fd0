#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wwrcva/types.hpp"

namespace wwrcva {

// Piecewise-constant market hazard curve h(t), right-continuous, flat
// extrapolation beyond the last breakpoint.
class MarketCurve {
public:
    MarketCurve(std::vector<double> times, std::vector<double> hazards);
    static MarketCurve flat(double hazard);
    static MarketCurve from_file(const std::string& path);  // two columns: time hazard

    double hazard(double t) const;
    double integrated_hazard(double t) const;  // exact, breakpoint aware
    double survival(double t) const { return std::exp(-integrated_hazard(t)); }

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& hazards() const { return hazards_; }

private:
    std::vector<double> times_;    // ascending, times_[0] == 0
    std::vector<double> hazards_;
    std::vector<double> cum_;      // integrated hazard at each breakpoint
};

// Deterministic shift psi tabulated on a uniform grid, linear in between.
// integral() integrates the interpolant, which is the one convention used
// everywhere (calibration round trip and path simulation alike).
//
// The nonnegative flag tolerates dips down to -tol. The default 1e-5/year is
// economically nil over a few years but wide enough that finite-difference
// endpoint values of a shift whose true minimum is ~0 do not flip the flag
// with the tabulation step.
class ShiftCurve {
public:
    ShiftCurve() = default;
    ShiftCurve(Model model, double step, std::vector<double> values, double tol = 1e-5);

    double value(double t) const;
    double integral(double t) const;
    double min_value() const { return min_value_; }
    bool nonnegative() const { return nonnegative_; }
    Model model() const { return model_; }
    double step() const { return step_; }
    double horizon() const { return step_ * (static_cast<double>(values_.size()) - 1.0); }
    const std::vector<double>& values() const { return values_; }

    void write_csv(const std::string& path) const;
    static ShiftCurve read_csv(const std::string& path, Model model, double tol = 1e-5);

private:
    Model model_ = Model::cir;
    double step_ = 0.0;
    std::vector<double> values_;
    std::vector<double> cumulative_;
    double min_value_ = 0.0;
    bool nonnegative_ = true;
};

struct BondFactors {
    double A = 1.0;  // level factor, exp(lnA)
    double B = 0.0;  // state loading
    double lnA = 0.0;
};

// Affine factors of E[exp(-int_t^T X_s ds) | X_t = x] = A exp(-B x).
// Only the gap T - t matters for a time-homogeneous X.
BondFactors cir_bond_factors(const CirParams& p, double t, double T);

// E[exp(-int_0^T X_s ds)] started from state x.
double cir_survival(const CirParams& p, double T, double x);

// Same with compound Poisson jumps on X; the level factor picks up
// exp(-omega int_0^T B(s,T)/(alpha + B(s,T)) ds), evaluated adaptively.
double jcir_survival(const CirParams& p, const JumpParams& jumps, double T, double x,
                     double tol = 1e-9);

// Laplace exponent of the clock theta_t = t + compound Poisson:
// phi(u) = u (u + alpha + omega) / (u + alpha); u <= phi(u) <= u + omega.
double levy_exponent(const JumpParams& clock, double u);

// Survival of the clock-changed model via the Poisson-Gamma mixture
// E[A(0,theta_T) exp(-B(0,theta_T) x)], series truncated once the Poisson
// tail drops below tol.
double subordinated_survival(const CirParams& p, const JumpParams& clock, double T,
                             double x, double tol = 1e-10);

// Killing rate of the clock-changed generator:
// k(x) = x + int_0^inf (1 - A(0,s) e^{-B(0,s) x}) omega alpha e^{-alpha s} ds.
double adjusted_killing_rate(const CirParams& p, const JumpParams& clock, double x,
                             double tol = 1e-10);

// Dense lookup table for the killing rate, for use inside path loops where a
// quadrature per state evaluation would dominate the runtime.
class KillingRateTable {
public:
    KillingRateTable() = default;
    KillingRateTable(const CirParams& p, const JumpParams& clock, double x_max = 4.0,
                     int points = 8193, double tol = 1e-10);

    double operator()(double x) const;
    bool empty() const { return table_.empty(); }

private:
    double x_max_ = 0.0;
    double dx_ = 0.0;
    double tol_ = 0.0;
    CirParams p_;
    JumpParams clock_;
    std::vector<double> table_;  // k(x) - x on the uniform x grid
};

struct ModelParams {
    Model model = Model::cir;
    CirParams cir;
    JumpParams jumps;  // intensity jumps (jcir) or clock jumps (tccir)

    void validate() const;
};

// Survival of the unshifted model started from cir.x0.
double model_survival(const ModelParams& mp, double T, double tol = 1e-10);

// Tabulates psi(t) = -d/dt ln( P_market(0,t) / P_model(0,t) ) on a uniform
// grid of the given step covering [0, horizon]: central differences of the
// log ratio inside, one-sided at the two ends. Negative values are recorded
// on the curve's nonnegativity flag, not raised here.
ShiftCurve calibrate_shift(const ModelParams& mp, const MarketCurve& market,
                           double horizon, double step, double tol = 1e-10);

// exp(-int_0^t psi) * P_model(0,t): must reproduce the market curve.
double shifted_survival(const ModelParams& mp, const ShiftCurve& shift, double t,
                        double tol = 1e-10);

}  // namespace wwrcva
