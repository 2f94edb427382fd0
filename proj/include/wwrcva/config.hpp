#pragma once

#include <string>
#include <vector>

#include "wwrcva/cva.hpp"

namespace wwrcva {

// One experiment description: which models to run, their parameters, the
// market/exposure setup, and how to estimate. Parsed from a sectioned
// key=value file; see configs/ for worked examples of every section.
struct RunConfig {
    std::vector<Model> models{Model::cir, Model::jcir, Model::tccir};
    std::vector<Estimator> estimators{Estimator::plain_mc};
    CirParams cir{0.02, 0.161, 0.08, 0.03};
    JumpParams jcir_jumps{0.07, 12.5};   // omega, alpha (alpha = 1 / mean jump)
    JumpParams clock_jumps{0.6, 1.953125};
    double market_hazard = 0.05;         // flat hazard unless a file is given
    std::string hazard_file;
    ExposureSpec exposure{ExposureKind::gaussian_forward, 0.08, 0.0, 0.0, 0.0};
    SimConfig sim;
    PricingConfig pricing;
    double psi_step = 0.0;               // 0 means sim.delta / 2
    std::vector<double> rho_grid{-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9};

    MarketCurve make_market() const;
    ModelParams make_model(Model which) const;
    EngineSetup make_setup(Model which) const;
};

// Parses the file and validates every parameter domain before returning.
// Unknown sections or keys are errors, not silences.
RunConfig load_config(const std::string& path);

}  // namespace wwrcva
