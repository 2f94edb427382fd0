#include "wwrcva/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <stdexcept>

namespace wwrcva {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    size_t used = 0;
    double x;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
    }
    if (used != v.size())
        throw std::invalid_argument("config: trailing junk for " + key + ": '" + v + "'");
    return x;
}

long parse_long(const std::string& key, const std::string& v) {
    size_t used = 0;
    long x;
    try {
        x = std::stol(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
    }
    if (used != v.size())
        throw std::invalid_argument("config: trailing junk for " + key + ": '" + v + "'");
    return x;
}

}  // namespace

MarketCurve RunConfig::make_market() const {
    if (!hazard_file.empty()) return MarketCurve::from_file(hazard_file);
    return MarketCurve::flat(market_hazard);
}

ModelParams RunConfig::make_model(Model which) const {
    ModelParams mp;
    mp.model = which;
    mp.cir = cir;
    switch (which) {
        case Model::cir: mp.jumps = JumpParams{0.0, 1.0}; break;
        case Model::jcir: mp.jumps = jcir_jumps; break;
        case Model::tccir: mp.jumps = clock_jumps; break;
    }
    return mp;
}

EngineSetup RunConfig::make_setup(Model which) const {
    EngineSetup setup;
    setup.model = make_model(which);
    setup.market = make_market();
    setup.exposure = exposure;
    if (setup.exposure.kind == ExposureKind::drifted_bridge && setup.exposure.maturity == 0.0) {
        setup.exposure.maturity = sim.T;
    }
    setup.sim = sim;
    setup.pricing = pricing;
    setup.psi_step = psi_step;
    return setup;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);

    RunConfig cfg;
    double jcir_mean = 0.0, clock_mean = 0.0;
    bool jcir_alpha_set = false, clock_alpha_set = false;

    std::string line, section;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: bad section header at line " +
                                            std::to_string(lineno));
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key=value at line " +
                                        std::to_string(lineno));
        std::string key = lower(trim(line.substr(0, eq)));
        std::string value = trim(line.substr(eq + 1));
        std::string full = section + "." + key;

        if (full == "run.models") {
            cfg.models.clear();
            for (const auto& name : split_list(value)) cfg.models.push_back(model_from_name(name));
        } else if (full == "run.estimators") {
            cfg.estimators.clear();
            for (const auto& name : split_list(value))
                cfg.estimators.push_back(estimator_from_name(name));
        } else if (full == "cir.kappa") {
            cfg.cir.kappa = parse_double(full, value);
        } else if (full == "cir.beta") {
            cfg.cir.beta = parse_double(full, value);
        } else if (full == "cir.eta") {
            cfg.cir.eta = parse_double(full, value);
        } else if (full == "cir.x0") {
            cfg.cir.x0 = parse_double(full, value);
        } else if (full == "jcir.omega") {
            cfg.jcir_jumps.omega = parse_double(full, value);
        } else if (full == "jcir.alpha") {
            cfg.jcir_jumps.alpha = parse_double(full, value);
            jcir_alpha_set = true;
        } else if (full == "jcir.mean_jump") {
            jcir_mean = parse_double(full, value);
        } else if (full == "clock.omega") {
            cfg.clock_jumps.omega = parse_double(full, value);
        } else if (full == "clock.alpha") {
            cfg.clock_jumps.alpha = parse_double(full, value);
            clock_alpha_set = true;
        } else if (full == "clock.mean_jump") {
            clock_mean = parse_double(full, value);
        } else if (full == "market.hazard") {
            cfg.market_hazard = parse_double(full, value);
        } else if (full == "market.hazard_file") {
            cfg.hazard_file = value;
        } else if (full == "exposure.kind") {
            cfg.exposure.kind = exposure_kind_from_name(lower(value));
        } else if (full == "exposure.sigma") {
            cfg.exposure.sigma = parse_double(full, value);
        } else if (full == "exposure.gamma") {
            cfg.exposure.gamma = parse_double(full, value);
        } else if (full == "exposure.v0") {
            cfg.exposure.v0 = parse_double(full, value);
        } else if (full == "exposure.maturity") {
            cfg.exposure.maturity = parse_double(full, value);
        } else if (full == "sim.t") {
            cfg.sim.T = parse_double(full, value);
        } else if (full == "sim.delta") {
            cfg.sim.delta = parse_double(full, value);
        } else if (full == "sim.m") {
            cfg.sim.m = parse_long(full, value);
        } else if (full == "sim.rho") {
            cfg.sim.rho = parse_double(full, value);
        } else if (full == "sim.seed") {
            cfg.sim.seed = static_cast<std::uint64_t>(parse_long(full, value));
        } else if (full == "sim.psi_step") {
            cfg.psi_step = parse_double(full, value);
        } else if (full == "pricing.recovery") {
            cfg.pricing.recovery = parse_double(full, value);
        } else if (full == "pricing.rate") {
            cfg.pricing.rate = parse_double(full, value);
        } else if (full == "sweep.rhos") {
            cfg.rho_grid.clear();
            for (const auto& r : split_list(value)) cfg.rho_grid.push_back(parse_double(full, r));
        } else {
            throw std::invalid_argument("config: unknown key '" + full + "' at line " +
                                        std::to_string(lineno));
        }
    }

    if (jcir_mean != 0.0) {
        if (jcir_alpha_set)
            throw std::invalid_argument("config: give jcir.alpha or jcir.mean_jump, not both");
        cfg.jcir_jumps.alpha = 1.0 / jcir_mean;
    }
    if (clock_mean != 0.0) {
        if (clock_alpha_set)
            throw std::invalid_argument("config: give clock.alpha or clock.mean_jump, not both");
        cfg.clock_jumps.alpha = 1.0 / clock_mean;
    }

    cfg.cir.validate();
    cfg.jcir_jumps.validate();
    cfg.clock_jumps.validate();
    cfg.sim.validate();
    ExposureSpec ex_check = cfg.exposure;
    if (ex_check.kind == ExposureKind::drifted_bridge && ex_check.maturity == 0.0) {
        ex_check.maturity = cfg.sim.T;  // defaulted to the horizon in make_setup
    }
    ex_check.validate();
    if (cfg.models.empty()) throw std::invalid_argument("config: no models selected");
    if (cfg.estimators.empty()) throw std::invalid_argument("config: no estimators selected");
    if (cfg.hazard_file.empty() && cfg.market_hazard < 0.0)
        throw std::invalid_argument("config: negative flat hazard");
    return cfg;
}

}  // namespace wwrcva
