#pragma once

#include <string>
#include <vector>

#include "wwrcva/curves.hpp"
#include "wwrcva/exposure.hpp"
#include "wwrcva/types.hpp"

namespace wwrcva {

enum class Estimator { plain_mc, adaptive_cv, independent_closed_form };

std::string estimator_name(Estimator e);
Estimator estimator_from_name(const std::string& name);

struct CvaEstimate {
    Model model = Model::cir;
    double rho = 0.0;
    Estimator estimator = Estimator::plain_mc;
    double value = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long m = 0;
    double runtime_seconds = 0.0;
};

struct EngineSetup {
    ModelParams model;
    MarketCurve market = MarketCurve::flat(0.0);
    ExposureSpec exposure;
    SimConfig sim;
    PricingConfig pricing;
    double psi_step = 0.0;  // shift tabulation step; 0 means sim.delta / 2
};

struct PathWorkspace;

// One calibrated model priced against one market/exposure setup. Construction
// calibrates the shift (and tabulates the adjusted killing rate for the
// clock-changed model); the pricing calls are const and thread-safe.
//
// Per-scenario payoff on the base grid t_k = k delta:
//   Y = -(1-R) sum_k V^+(t_k) e^{-r t_k} (S(t_k) - S(t_{k-1}))
// The control variate Z is the same sum with the survival path regenerated
// from W-perp in place of W^lambda (identical jumps and clock), so Z is
// independent of the exposure and E[Z] is the independent CVA on the grid.
class CvaEngine {
public:
    explicit CvaEngine(EngineSetup setup);
    ~CvaEngine();
    CvaEngine(const CvaEngine&) = delete;
    CvaEngine& operator=(const CvaEngine&) = delete;
    CvaEngine(CvaEngine&&) = default;

    const EngineSetup& setup() const { return setup_; }
    const ShiftCurve& shift() const { return shift_; }
    const KillingRateTable& killing_table() const { return ktable_; }

    CvaEstimate plain_mc(double rho, long m, unsigned threads = 1) const;
    CvaEstimate adaptive_cv(double rho, long m, unsigned threads = 1) const;

    // CVA under independence: (1-R) int_0^T E[V_u^+] e^{-ru} h(u) P^M(0,u) du
    // by adaptive quadrature split at hazard breakpoints, with square-root
    // substitutions at the endpoints where E[V_u^+] has a sqrt kink.
    CvaEstimate independent(double quad_tol = 1e-10) const;

    // Same quantity discretized exactly like the estimator sum; this is the
    // control's mean, used to center the adaptive estimator.
    double independent_on_grid() const { return indep_grid_; }

    // Writes scenario,t,x,s,v rows for the first `count` scenarios.
    void dump_paths(double rho, long count, const std::string& path) const;

private:
    struct Draw {
        double y = 0.0;
        double z = 0.0;
    };
    Draw scenario(double rho, long idx, bool want_control, PathWorkspace& ws) const;
    double payoff(const std::vector<double>& v, const std::vector<double>& s) const;
    void require_priceable() const;

    EngineSetup setup_;
    ShiftCurve shift_;
    KillingRateTable ktable_;         // populated only for the clock-changed model
    std::vector<double> base_nodes_;  // 0, delta, ..., T
    std::vector<double> df_;          // discount factor at each base node
    std::vector<double> evpos_;       // E[V^+(t_k)]
    std::vector<double> shift_at_;    // shift value at each base node
    double indep_grid_ = 0.0;
    double loss_ = 1.0;               // 1 - recovery
};

// Estimate table over a correlation grid, one row per (engine, rho,
// estimator). All rows share the seed policy of each engine's SimConfig, so
// the same scenario draws back every rho point (the correlation only enters
// the mixing of the two drivers).
std::vector<CvaEstimate> rho_sweep(const std::vector<const CvaEngine*>& engines,
                                   const std::vector<double>& rhos,
                                   const std::vector<Estimator>& estimators, long m,
                                   unsigned threads);

void write_estimates_csv(const std::string& path, const std::vector<CvaEstimate>& rows,
                         bool with_timings);

}  // namespace wwrcva
