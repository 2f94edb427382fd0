#include "wwrcva/cva.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "wwrcva/parallel.hpp"
#include "wwrcva/paths.hpp"
#include "wwrcva/quad.hpp"

namespace wwrcva {

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
    const long m = static_cast<long>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    double mean = sum / static_cast<double>(m);
    double ss = 0.0;
    for (double x : xs) {
        double d = x - mean;
        ss += d * d;
    }
    double var = m > 1 ? ss / static_cast<double>(m - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(m))};
}

CvaEstimate finish(Model model, double rho, Estimator est, MeanSe ms, long m, double secs) {
    CvaEstimate out;
    out.model = model;
    out.rho = rho;
    out.estimator = est;
    out.value = ms.mean;
    out.std_error = ms.se;
    out.ci_lo = ms.mean - 1.96 * ms.se;
    out.ci_hi = ms.mean + 1.96 * ms.se;
    out.m = m;
    out.runtime_seconds = secs;
    return out;
}

}  // namespace

std::string estimator_name(Estimator e) {
    switch (e) {
        case Estimator::plain_mc: return "plain_mc";
        case Estimator::adaptive_cv: return "adaptive_cv";
        case Estimator::independent_closed_form: return "independent_closed_form";
    }
    throw std::logic_error("estimator_name: bad enum");
}

Estimator estimator_from_name(const std::string& name) {
    if (name == "plain_mc" || name == "plain" || name == "mc") return Estimator::plain_mc;
    if (name == "adaptive_cv" || name == "cv") return Estimator::adaptive_cv;
    if (name == "independent_closed_form" || name == "independent" || name == "closed_form")
        return Estimator::independent_closed_form;
    throw std::invalid_argument("unknown estimator: " + name);
}

struct PathWorkspace {
    std::vector<double> dwv, dwo, dwl;
    std::vector<double> x, xq;
    std::vector<double> lam, lamq;
    std::vector<double> s, sq;
    std::vector<double> v;
    std::vector<double> dwsync;
    std::vector<double> xbase;
};

CvaEngine::CvaEngine(EngineSetup setup) : setup_(std::move(setup)) {
    setup_.model.validate();
    setup_.exposure.validate();
    setup_.sim.validate();
    if (setup_.pricing.recovery < 0.0 || setup_.pricing.recovery >= 1.0) {
        throw std::invalid_argument("CvaEngine: recovery must be in [0, 1)");
    }
    loss_ = 1.0 - setup_.pricing.recovery;

    double step = setup_.psi_step > 0.0 ? setup_.psi_step : 0.5 * setup_.sim.delta;
    setup_.psi_step = step;
    shift_ = calibrate_shift(setup_.model, setup_.market, setup_.sim.T, step);
    if (setup_.model.model == Model::tccir) {
        ktable_ = KillingRateTable(setup_.model.cir, setup_.model.jumps);
    }

    const long n = setup_.sim.steps();
    const double delta = setup_.sim.delta;
    base_nodes_.resize(static_cast<size_t>(n) + 1);
    df_.resize(base_nodes_.size());
    evpos_.resize(base_nodes_.size());
    shift_at_.resize(base_nodes_.size());
    for (long k = 0; k <= n; ++k) {
        double t = delta * static_cast<double>(k);
        base_nodes_[static_cast<size_t>(k)] = t;
        df_[static_cast<size_t>(k)] = std::exp(-setup_.pricing.rate * t);
        evpos_[static_cast<size_t>(k)] = expected_positive(setup_.exposure, t);
        shift_at_[static_cast<size_t>(k)] = shift_.value(t);
    }

    // control mean: independent CVA with the estimator's own time grid
    double prev = 1.0;
    double acc = 0.0;
    for (long k = 1; k <= n; ++k) {
        double cur = shifted_survival(setup_.model, shift_, base_nodes_[static_cast<size_t>(k)]);
        acc += evpos_[static_cast<size_t>(k)] * df_[static_cast<size_t>(k)] * (prev - cur);
        prev = cur;
    }
    indep_grid_ = loss_ * acc;
}

CvaEngine::~CvaEngine() = default;

void CvaEngine::require_priceable() const {
    if (!shift_.nonnegative()) {
        throw CalibrationError("CvaEngine: calibrated shift for " +
                               model_name(setup_.model.model) + " dips to " +
                               std::to_string(shift_.min_value()) +
                               "; the intensity would go negative, refusing to price");
    }
}

double CvaEngine::payoff(const std::vector<double>& v, const std::vector<double>& s) const {
    const size_t n = base_nodes_.size() - 1;
    double acc = 0.0;
    for (size_t k = 1; k <= n; ++k) {
        acc += positive_part(v[k]) * df_[k] * (s[k] - s[k - 1]);
    }
    return -loss_ * acc;
}

CvaEngine::Draw CvaEngine::scenario(double rho, long idx, bool want_control,
                                    PathWorkspace& ws) const {
    const SimConfig& sim = setup_.sim;
    const double delta = sim.delta;
    const size_t n = base_nodes_.size() - 1;
    const auto sid = static_cast<std::uint32_t>(idx);
    RandomStream rv(sim.seed, sid, StreamTag::exposure_driver);
    RandomStream ro(sim.seed, sid, StreamTag::ortho_driver);

    if (setup_.model.model != Model::tccir) {
        ws.dwv.resize(n);
        ws.dwo.resize(n);
        const double sq = std::sqrt(delta);
        for (size_t i = 0; i < n; ++i) ws.dwv[i] = rv.normal() * sq;
        for (size_t i = 0; i < n; ++i) ws.dwo[i] = ro.normal() * sq;
        correlate_drivers(ws.dwv, ws.dwo, rho, ws.dwl);

        ClockPath jumps;
        if (setup_.model.model == Model::jcir) {
            RandomStream ja(sim.seed, sid, StreamTag::jump_arrival);
            RandomStream js(sim.seed, sid, StreamTag::jump_size);
            jumps = sample_clock(setup_.model.jumps, sim.T, ja, js);
        }
        simulate_jcir_euler(setup_.model.cir, base_nodes_, ws.dwl, jumps.jump_times,
                            jumps.jump_sizes, ws.x);
        ws.lam.resize(n + 1);
        for (size_t k = 0; k <= n; ++k) ws.lam[k] = positive_part(ws.x[k]) + shift_at_[k];
        survival_path(ws.lam, delta, "cva scenario", ws.s);
        exposure_path(setup_.exposure, delta, ws.dwv, ws.v);
        ws.xbase = ws.x;

        Draw out;
        out.y = payoff(ws.v, ws.s);
        if (want_control) {
            simulate_jcir_euler(setup_.model.cir, base_nodes_, ws.dwo, jumps.jump_times,
                                jumps.jump_sizes, ws.xq);
            ws.lamq.resize(n + 1);
            for (size_t k = 0; k <= n; ++k)
                ws.lamq[k] = positive_part(ws.xq[k]) + shift_at_[k];
            survival_path(ws.lamq, delta, "cva control", ws.sq);
            out.z = payoff(ws.v, ws.sq);
        }
        return out;
    }

    RandomStream ca(sim.seed, sid, StreamTag::clock_arrival);
    RandomStream cs(sim.seed, sid, StreamTag::clock_size);
    ClockPath clock = sample_clock(setup_.model.jumps, sim.T, ca, cs);
    RefinedGrid grid = build_refined_grid(clock, delta);
    const size_t nf = grid.intervals();

    ws.dwv.resize(nf);
    ws.dwo.resize(nf);
    for (size_t i = 0; i < nf; ++i) {
        double dt = grid.nodes[i + 1] - grid.nodes[i];
        double sq = std::sqrt(dt);
        ws.dwv[i] = rv.normal() * sq;
        ws.dwo[i] = ro.normal() * sq;
    }
    correlate_drivers(ws.dwv, ws.dwo, rho, ws.dwl);

    simulate_cir_euler(setup_.model.cir, grid.nodes, ws.dwl, ws.x);
    ws.lam.resize(n + 1);
    ws.xbase.resize(n + 1);
    for (size_t k = 0; k <= n; ++k) {
        double xk = ws.x[grid.base_index[k]];
        ws.xbase[k] = xk;
        ws.lam[k] = ktable_(positive_part(xk)) + shift_at_[k];
    }
    survival_path(ws.lam, delta, "cva scenario", ws.s);
    synchronized_increments(grid, ws.dwv, ws.dwsync);
    exposure_path(setup_.exposure, delta, ws.dwsync, ws.v);

    Draw out;
    out.y = payoff(ws.v, ws.s);
    if (want_control) {
        simulate_cir_euler(setup_.model.cir, grid.nodes, ws.dwo, ws.xq);
        ws.lamq.resize(n + 1);
        for (size_t k = 0; k <= n; ++k) {
            ws.lamq[k] = ktable_(positive_part(ws.xq[grid.base_index[k]])) + shift_at_[k];
        }
        survival_path(ws.lamq, delta, "cva control", ws.sq);
        out.z = payoff(ws.v, ws.sq);
    }
    return out;
}

CvaEstimate CvaEngine::plain_mc(double rho, long m, unsigned threads) const {
    require_priceable();
    if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("plain_mc: |rho| must be <= 1");
    if (m < 1) throw std::invalid_argument("plain_mc: m must be >= 1");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> ys(static_cast<size_t>(m));
    run_parallel(m, threads, [&](long i) {
        thread_local PathWorkspace ws;
        ys[static_cast<size_t>(i)] = scenario(rho, i, false, ws).y;
    });
    return finish(setup_.model.model, rho, Estimator::plain_mc, mean_and_se(ys), m,
                  elapsed_seconds(t0));
}

CvaEstimate CvaEngine::adaptive_cv(double rho, long m, unsigned threads) const {
    require_priceable();
    if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("adaptive_cv: |rho| must be <= 1");
    if (m < 1) throw std::invalid_argument("adaptive_cv: m must be >= 1");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> ys(static_cast<size_t>(m));
    std::vector<double> zs(static_cast<size_t>(m));
    run_parallel(m, threads, [&](long i) {
        thread_local PathWorkspace ws;
        Draw d = scenario(rho, i, true, ws);
        ys[static_cast<size_t>(i)] = d.y;
        zs[static_cast<size_t>(i)] = d.z;
    });

    // sequential pass: mu_{k-1} uses only scenarios before k, so each term
    // stays unbiased; the realized terms also provide the error estimate
    const double center = indep_grid_;
    double mu = 0.0;
    double c_run = 0.0;
    double v_run = 0.0;
    double sum = 0.0;
    double sumsq = 0.0;
    for (size_t k = 0; k < ys.size(); ++k) {
        double xi = zs[k] - center;
        double e = ys[k] - mu * xi;
        sum += e;
        sumsq += e * e;
        c_run += ys[k] * xi;
        v_run += xi * xi;
        mu = v_run > 0.0 ? std::clamp(c_run / v_run, -100.0, 100.0) : 0.0;
    }
    const double md = static_cast<double>(m);
    double mean = sum / md;
    double var = m > 1 ? (sumsq - sum * sum / md) / (md - 1.0) : 0.0;
    MeanSe ms{mean, std::sqrt(std::max(var, 0.0) / md)};
    return finish(setup_.model.model, rho, Estimator::adaptive_cv, ms, m, elapsed_seconds(t0));
}

CvaEstimate CvaEngine::independent(double quad_tol) const {
    auto t0 = std::chrono::steady_clock::now();
    const double T = setup_.sim.T;
    const MarketCurve& mk = setup_.market;
    const ExposureSpec& ex = setup_.exposure;
    const double r = setup_.pricing.rate;
    auto f = [&](double u) {
        return expected_positive(ex, u) * std::exp(-r * u) * mk.hazard(u) * mk.survival(u);
    };

    std::vector<double> pts{0.0, T};
    for (double b : mk.times()) {
        if (b > 0.0 && b < T) pts.push_back(b);
    }
    if (ex.kind == ExposureKind::drifted_bridge) pts.push_back(0.5 * T);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const double abs_tol = 1e-4 * quad_tol;
    double value = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = pts[i];
        double b = pts[i + 1];
        if (a == 0.0) {
            // u = y^2 irons out the sqrt(u) kink of E[V^+] at the origin
            value += adaptive_simpson([&](double y) { return f(y * y) * 2.0 * y; }, 0.0,
                                      std::sqrt(b), abs_tol, quad_tol);
        } else if (ex.kind == ExposureKind::drifted_bridge && b == T) {
            // same treatment for the bridge pin at maturity
            value += adaptive_simpson([&](double y) { return f(T - y * y) * 2.0 * y; }, 0.0,
                                      std::sqrt(T - a), abs_tol, quad_tol);
        } else {
            value += adaptive_simpson(f, a, b, abs_tol, quad_tol);
        }
    }
    value *= loss_;

    CvaEstimate out;
    out.model = setup_.model.model;
    out.rho = 0.0;
    out.estimator = Estimator::independent_closed_form;
    out.value = value;
    out.std_error = quad_tol * (1.0 + std::abs(value));
    out.ci_lo = value - 1.96 * out.std_error;
    out.ci_hi = value + 1.96 * out.std_error;
    out.m = 0;
    out.runtime_seconds = elapsed_seconds(t0);
    return out;
}

void CvaEngine::dump_paths(double rho, long count, const std::string& path) const {
    require_priceable();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_paths: cannot open " + path);
    out << "scenario,t,x,s,v\n";
    PathWorkspace ws;
    char line[160];
    for (long i = 0; i < count; ++i) {
        scenario(rho, i, false, ws);
        for (size_t k = 0; k < base_nodes_.size(); ++k) {
            std::snprintf(line, sizeof(line), "%ld,%.12g,%.12g,%.12g,%.12g\n", i,
                          base_nodes_[k], ws.xbase[k], ws.s[k], ws.v[k]);
            out << line;
        }
    }
}

std::vector<CvaEstimate> rho_sweep(const std::vector<const CvaEngine*>& engines,
                                   const std::vector<double>& rhos,
                                   const std::vector<Estimator>& estimators, long m,
                                   unsigned threads) {
    std::vector<CvaEstimate> rows;
    for (const CvaEngine* eng : engines) {
        for (Estimator est : estimators) {
            if (est == Estimator::independent_closed_form) {
                rows.push_back(eng->independent());
            }
        }
        for (double rho : rhos) {
            for (Estimator est : estimators) {
                if (est == Estimator::plain_mc) {
                    rows.push_back(eng->plain_mc(rho, m, threads));
                } else if (est == Estimator::adaptive_cv) {
                    rows.push_back(eng->adaptive_cv(rho, m, threads));
                }
            }
        }
    }
    return rows;
}

void write_estimates_csv(const std::string& path, const std::vector<CvaEstimate>& rows,
                         bool with_timings) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_estimates_csv: cannot open " + path);
    out << "model,rho,estimator,cva,std_error,ci_lo,ci_hi,m,runtime_seconds\n";
    char line[256];
    for (const CvaEstimate& e : rows) {
        std::snprintf(line, sizeof(line), "%s,%.12g,%s,%.12g,%.12g,%.12g,%.12g,%ld,%.12g\n",
                      model_name(e.model).c_str(), e.rho, estimator_name(e.estimator).c_str(),
                      e.value, e.std_error, e.ci_lo, e.ci_hi, e.m,
                      with_timings ? e.runtime_seconds : 0.0);
        out << line;
    }
}

}  // namespace wwrcva
