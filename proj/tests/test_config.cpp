#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "wwrcva/config.hpp"

using namespace wwrcva;

namespace {

const char* kPath = "test_cfg.cfg";

void write_cfg(const std::string& body) {
    std::ofstream out(kPath);
    out << body;
}

struct CfgGuard {
    ~CfgGuard() { std::remove(kPath); }
};

}  // namespace

TEST_CASE("defaults survive an empty file") {
    CfgGuard g;
    write_cfg("# nothing but comments\n\n; and more\n");
    RunConfig cfg = load_config(kPath);
    CHECK(cfg.models.size() == 3);
    CHECK(cfg.estimators.size() == 1);
    CHECK(cfg.cir.kappa == 0.02);
    CHECK(cfg.cir.beta == 0.161);
    CHECK(cfg.jcir_jumps.alpha == 12.5);
    CHECK(cfg.clock_jumps.alpha == 1.953125);
    CHECK(cfg.market_hazard == 0.05);
    CHECK(cfg.sim.T == 3.0);
    CHECK(cfg.sim.delta == 0.01);
    CHECK(cfg.rho_grid.size() == 7);
}

TEST_CASE("full file parses") {
    CfgGuard g;
    write_cfg(
        "[run]\n"
        "models = cir, tccir\n"
        "estimators = plain_mc, adaptive_cv\n"
        "[cir]\n"
        "kappa = 0.072\nbeta = 0.05\neta = 0.045\nx0 = 0.04\n"
        "[jcir]\n"
        "omega = 0.07\nmean_jump = 0.05\n"
        "[clock]\n"
        "omega = 0.4\nmean_jump = 0.49   # inverse of alpha\n"
        "[market]\n"
        "hazard = 0.03\n"
        "[exposure]\n"
        "kind = bridge\nsigma = 0.08\ngamma = 0.001\n"
        "[sim]\n"
        "t = 3\ndelta = 0.01\nm = 5000\nrho = 0.25\nseed = 99\npsi_step = 0.0025\n"
        "[pricing]\n"
        "recovery = 0.4\nrate = 0.01\n"
        "[sweep]\n"
        "rhos = -0.9, 0, 0.9\n");
    RunConfig cfg = load_config(kPath);
    REQUIRE(cfg.models.size() == 2);
    CHECK(cfg.models[0] == Model::cir);
    CHECK(cfg.models[1] == Model::tccir);
    REQUIRE(cfg.estimators.size() == 2);
    CHECK(cfg.estimators[1] == Estimator::adaptive_cv);
    CHECK(cfg.cir.kappa == 0.072);
    CHECK(cfg.jcir_jumps.alpha == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(cfg.clock_jumps.alpha == doctest::Approx(1.0 / 0.49).epsilon(1e-15));
    CHECK(cfg.market_hazard == 0.03);
    CHECK(cfg.exposure.kind == ExposureKind::drifted_bridge);
    CHECK(cfg.exposure.gamma == 0.001);
    CHECK(cfg.sim.m == 5000);
    CHECK(cfg.sim.rho == 0.25);
    CHECK(cfg.sim.seed == 99);
    CHECK(cfg.psi_step == 0.0025);
    CHECK(cfg.pricing.recovery == 0.4);
    REQUIRE(cfg.rho_grid.size() == 3);
    CHECK(cfg.rho_grid[0] == -0.9);
    CHECK(cfg.rho_grid[2] == 0.9);

    // the bridge maturity defaults to the pricing horizon in the setup
    EngineSetup setup = cfg.make_setup(Model::tccir);
    CHECK(setup.exposure.maturity == 3.0);
    CHECK(setup.model.jumps.alpha == doctest::Approx(1.0 / 0.49).epsilon(1e-15));
    EngineSetup scir = cfg.make_setup(Model::cir);
    CHECK(scir.model.jumps.omega == 0.0);
}

TEST_CASE("mean jump and alpha are interchangeable but exclusive") {
    CfgGuard g;
    write_cfg("[jcir]\nalpha = 12.5\n");
    CHECK(load_config(kPath).jcir_jumps.alpha == 12.5);
    write_cfg("[jcir]\nmean_jump = 0.08\n");
    CHECK(load_config(kPath).jcir_jumps.alpha == doctest::Approx(12.5).epsilon(1e-15));
    write_cfg("[jcir]\nalpha = 12.5\nmean_jump = 0.08\n");
    CHECK_THROWS_AS(load_config(kPath), std::invalid_argument);
    write_cfg("[clock]\nalpha = 2\nmean_jump = 0.5\n");
    CHECK_THROWS_AS(load_config(kPath), std::invalid_argument);
}

TEST_CASE("unknown keys and malformed lines are rejected") {
    CfgGuard g;
    write_cfg("[sim]\nwhatever = 3\n");
    CHECK_THROWS_WITH_AS(load_config(kPath),
                         doctest::Contains("unknown key 'sim.whatever'"),
                         std::invalid_argument);
    write_cfg("[sim\nt = 3\n");
    CHECK_THROWS_AS(load_config(kPath), std::invalid_argument);
    write_cfg("t: 3\n");
    CHECK_THROWS_AS(load_config(kPath), std::invalid_argument);
    write_cfg("[sim]\nt = 3x\n");
    CHECK_THROWS_AS(load_config(kPath), std::invalid_argument);
    CHECK_THROWS_AS(load_config("no_such_file.cfg"), std::runtime_error);
}

TEST_CASE("domain validation happens at load time") {
    CfgGuard g;
    write_cfg("[cir]\nkappa = -0.1\n");
    CHECK_THROWS_AS(load_config(kPath), std::invalid_argument);
    write_cfg("[sim]\nrho = 1.5\n");
    CHECK_THROWS_AS(load_config(kPath), std::invalid_argument);
    write_cfg("[sim]\ndelta = 0.013\n");  // horizon not a multiple
    CHECK_THROWS_AS(load_config(kPath), std::invalid_argument);
    write_cfg("[run]\nmodels =\n");
    CHECK_THROWS_AS(load_config(kPath), std::invalid_argument);
    write_cfg("[exposure]\nsigma = -1\n");
    CHECK_THROWS_AS(load_config(kPath), std::invalid_argument);
    // a bridge with no explicit maturity is fine: it defaults to sim.t
    write_cfg("[exposure]\nkind = bridge\ngamma = 0.001\n");
    CHECK_NOTHROW(load_config(kPath));
}

TEST_CASE("market curve file hook") {
    CfgGuard g;
    const char* hz = "cfg_hazards.txt";
    {
        std::ofstream out(hz);
        out << "0 0.02\n1 0.04\n";
    }
    write_cfg(std::string("[market]\nhazard_file = ") + hz + "\n");
    RunConfig cfg = load_config(kPath);
    MarketCurve mc = cfg.make_market();
    CHECK(mc.hazard(0.5) == 0.02);
    CHECK(mc.hazard(1.5) == 0.04);
    std::remove(hz);
}
