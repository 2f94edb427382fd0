#include "wwrcva/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "wwrcva/parallel.hpp"
#include "wwrcva/paths.hpp"
#include "wwrcva/rng.hpp"

namespace wwrcva {

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
    const double m = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    double mean = sum / m;
    double ss = 0.0;
    for (double x : xs) {
        double d = x - mean;
        ss += d * d;
    }
    double var = xs.size() > 1 ? ss / (m - 1.0) : 0.0;
    return {mean, std::sqrt(var / m)};
}

OracleReport sigma_report(std::string name, double target, MeanSe ms, double tol,
                          std::string detail) {
    OracleReport r;
    r.name = std::move(name);
    r.target = target;
    r.oracle = ms.mean;
    r.std_error = ms.se;
    if (ms.se > 0.0) {
        r.sigmas = std::abs(target - ms.mean) / ms.se;
    } else {
        r.sigmas = target == ms.mean ? 0.0 : std::numeric_limits<double>::infinity();
    }
    r.tol_sigmas = tol;
    r.pass = r.sigmas <= tol;
    r.detail = std::move(detail);
    return r;
}

long grid_steps(double T, double delta) {
    long n = std::lround(T / delta);
    if (n < 1 || std::abs(static_cast<double>(n) * delta - T) > 1e-9 * std::max(1.0, T)) {
        throw std::invalid_argument("validation: T must be a multiple of delta");
    }
    return n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t which) {
    return seed + 0x9E3779B97F4A7C15ull * (which + 1);
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double sa = 0.0, sb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
    }
    double ma = sa / n, mb = sb / n;
    double cab = 0.0, caa = 0.0, cbb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        cab += da * db;
        caa += da * da;
        cbb += db * db;
    }
    return cab / std::sqrt(caa * cbb);
}

}  // namespace

OracleReport mc_survival_check(const ModelParams& mp, double T, long m, double delta,
                               std::uint64_t seed, unsigned threads) {
    mp.validate();
    const long n = grid_steps(T, delta);
    const double target = model_survival(mp, T);
    std::vector<double> vals(static_cast<size_t>(m));

    if (mp.model == Model::tccir) {
        KillingRateTable kt(mp.cir, mp.jumps);
        run_parallel(m, threads, [&](long i) {
            thread_local std::vector<double> dw, x, lam, s;
            const auto sid = static_cast<std::uint32_t>(i);
            RandomStream ca(seed, sid, StreamTag::clock_arrival);
            RandomStream cs(seed, sid, StreamTag::clock_size);
            RandomStream rw(seed, sid, StreamTag::aux);
            ClockPath clock = sample_clock(mp.jumps, T, ca, cs);
            RefinedGrid grid = build_refined_grid(clock, delta);
            dw.resize(grid.intervals());
            for (size_t j = 0; j < dw.size(); ++j) {
                dw[j] = rw.normal() * std::sqrt(grid.nodes[j + 1] - grid.nodes[j]);
            }
            simulate_cir_euler(mp.cir, grid.nodes, dw, x);
            lam.resize(static_cast<size_t>(n) + 1);
            for (long k = 0; k <= n; ++k) {
                lam[static_cast<size_t>(k)] =
                    kt(positive_part(x[grid.base_index[static_cast<size_t>(k)]]));
            }
            survival_path(lam, delta, "survival oracle", s);
            vals[static_cast<size_t>(i)] = s.back();
        });
    } else {
        std::vector<double> nodes(static_cast<size_t>(n) + 1);
        for (long k = 0; k <= n; ++k) nodes[static_cast<size_t>(k)] = delta * static_cast<double>(k);
        const bool with_jumps = mp.model == Model::jcir;
        run_parallel(m, threads, [&](long i) {
            thread_local std::vector<double> dw, x, lam, s;
            const auto sid = static_cast<std::uint32_t>(i);
            RandomStream rw(seed, sid, StreamTag::aux);
            dw.resize(static_cast<size_t>(n));
            const double sq = std::sqrt(delta);
            for (auto& d : dw) d = rw.normal() * sq;
            ClockPath jumps;
            if (with_jumps) {
                RandomStream ja(seed, sid, StreamTag::jump_arrival);
                RandomStream js(seed, sid, StreamTag::jump_size);
                jumps = sample_clock(mp.jumps, T, ja, js);
            }
            simulate_jcir_euler(mp.cir, nodes, dw, jumps.jump_times, jumps.jump_sizes, x);
            lam.resize(x.size());
            for (size_t k = 0; k < x.size(); ++k) lam[k] = positive_part(x[k]);
            survival_path(lam, delta, "survival oracle", s);
            vals[static_cast<size_t>(i)] = s.back();
        });
    }

    char buf[128];
    std::snprintf(buf, sizeof(buf), "m=%ld delta=%g", m, delta);
    return sigma_report("survival_mc_" + model_name(mp.model), target, mean_and_se(vals), 3.0,
                        buf);
}

OracleReport bochner_theta_check(const ModelParams& mp, double T, long m,
                                 std::uint64_t seed, unsigned threads) {
    if (mp.model != Model::tccir) {
        throw std::invalid_argument("bochner_theta_check: clock-changed model only");
    }
    mp.validate();
    const double target = subordinated_survival(mp.cir, mp.jumps, T, mp.cir.x0);
    std::vector<double> vals(static_cast<size_t>(m));
    run_parallel(m, threads, [&](long i) {
        const auto sid = static_cast<std::uint32_t>(i);
        RandomStream ca(seed, sid, StreamTag::clock_arrival);
        RandomStream cs(seed, sid, StreamTag::clock_size);
        ClockPath clock = sample_clock(mp.jumps, T, ca, cs);
        BondFactors f = cir_bond_factors(mp.cir, 0.0, clock.total());
        vals[static_cast<size_t>(i)] = std::exp(f.lnA - f.B * mp.cir.x0);
    });
    char buf[64];
    std::snprintf(buf, sizeof(buf), "m=%ld", m);
    return sigma_report("survival_theta_sampling", target, mean_and_se(vals), 3.0, buf);
}

std::vector<OracleReport> sync_driver_law_checks(const JumpParams& clock, double T, double delta,
                                        long m, std::uint64_t seed, unsigned threads) {
    const long n = grid_steps(T, delta);
    struct Partial {
        double w = 0.0;
        double sab = 0.0, sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0;
    };
    std::vector<Partial> parts(static_cast<size_t>(m));
    run_parallel(m, threads, [&](long i) {
        thread_local std::vector<double> dw, dwsync;
        const auto sid = static_cast<std::uint32_t>(i);
        RandomStream ca(seed, sid, StreamTag::clock_arrival);
        RandomStream cs(seed, sid, StreamTag::clock_size);
        RandomStream rv(seed, sid, StreamTag::exposure_driver);
        ClockPath cp = sample_clock(clock, T, ca, cs);
        RefinedGrid grid = build_refined_grid(cp, delta);
        dw.resize(grid.intervals());
        for (size_t j = 0; j < dw.size(); ++j) {
            dw[j] = rv.normal() * std::sqrt(grid.nodes[j + 1] - grid.nodes[j]);
        }
        synchronized_increments(grid, dw, dwsync);
        Partial p;
        for (double d : dwsync) p.w += d;
        for (size_t j = 0; j + 1 < dwsync.size(); ++j) {
            double a = dwsync[j], b = dwsync[j + 1];
            p.sab += a * b;
            p.sa += a;
            p.sb += b;
            p.saa += a * a;
            p.sbb += b * b;
        }
        parts[static_cast<size_t>(i)] = p;
    });

    double wsum = 0.0;
    for (const Partial& p : parts) wsum += p.w;
    const double md = static_cast<double>(m);
    double wmean = wsum / md;
    double wss = 0.0;
    for (const Partial& p : parts) {
        double d = p.w - wmean;
        wss += d * d;
    }
    double ratio = wss / (md - 1.0) / T;

    OracleReport var_rep;
    var_rep.name = "sync_driver_variance";
    var_rep.target = 1.0;
    var_rep.oracle = ratio;
    var_rep.std_error = std::sqrt(2.0 / (md - 1.0));
    var_rep.sigmas = std::abs(ratio - 1.0) / 0.01;
    var_rep.tol_sigmas = 1.0;
    var_rep.pass = ratio >= 0.99 && ratio <= 1.01;
    var_rep.detail = "normalized to the [0.99;1.01] acceptance window";

    double sab = 0.0, sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0;
    for (const Partial& p : parts) {
        sab += p.sab;
        sa += p.sa;
        sb += p.sb;
        saa += p.saa;
        sbb += p.sbb;
    }
    const double pairs = md * static_cast<double>(n - 1);
    double r = (sab - sa * sb / pairs) /
               std::sqrt((saa - sa * sa / pairs) * (sbb - sb * sb / pairs));
    const double bound = 3.0 / std::sqrt(md);

    OracleReport ac_rep;
    ac_rep.name = "sync_driver_autocorr";
    ac_rep.target = 0.0;
    ac_rep.oracle = r;
    ac_rep.std_error = 1.0 / std::sqrt(pairs);
    ac_rep.sigmas = std::abs(r) / bound;
    ac_rep.tol_sigmas = 1.0;
    ac_rep.pass = std::abs(r) < bound;
    ac_rep.detail = "normalized to the 3/sqrt(m) bound; pooled lag-1 pairs";

    return {var_rep, ac_rep};
}

double ks_statistic(std::vector<double>& a, std::vector<double>& b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

std::vector<OracleReport> ks_exposure_checks(const JumpParams& clock,
                                             const ExposureSpec& exposure, double T,
                                             double delta, const std::vector<double>& times,
                                             long m, std::uint64_t seed, unsigned threads) {
    exposure.validate();
    const long n = grid_steps(T, delta);
    std::vector<size_t> idx;
    for (double t : times) {
        long k = std::lround(t / delta);
        if (k < 1 || k > n || std::abs(static_cast<double>(k) * delta - t) > 1e-9) {
            throw std::invalid_argument("ks_exposure_checks: time off the base grid");
        }
        idx.push_back(static_cast<size_t>(k));
    }

    std::vector<std::vector<double>> synced(times.size(),
                                            std::vector<double>(static_cast<size_t>(m)));
    std::vector<std::vector<double>> direct(times.size(),
                                            std::vector<double>(static_cast<size_t>(m)));
    run_parallel(m, threads, [&](long i) {
        thread_local std::vector<double> dw, dwsync, v, dwb, vb;
        const auto sid = static_cast<std::uint32_t>(i);
        RandomStream ca(seed, sid, StreamTag::clock_arrival);
        RandomStream cs(seed, sid, StreamTag::clock_size);
        RandomStream rv(seed, sid, StreamTag::exposure_driver);
        RandomStream rb(seed, sid, StreamTag::ortho_driver);
        ClockPath cp = sample_clock(clock, T, ca, cs);
        RefinedGrid grid = build_refined_grid(cp, delta);
        dw.resize(grid.intervals());
        for (size_t j = 0; j < dw.size(); ++j) {
            dw[j] = rv.normal() * std::sqrt(grid.nodes[j + 1] - grid.nodes[j]);
        }
        synchronized_increments(grid, dw, dwsync);
        exposure_path(exposure, delta, dwsync, v);

        dwb.resize(static_cast<size_t>(n));
        const double sq = std::sqrt(delta);
        for (auto& d : dwb) d = rb.normal() * sq;
        exposure_path(exposure, delta, dwb, vb);

        for (size_t q = 0; q < idx.size(); ++q) {
            synced[q][static_cast<size_t>(i)] = v[idx[q]];
            direct[q][static_cast<size_t>(i)] = vb[idx[q]];
        }
    });

    // two-sample KS critical value at the 1% level
    const double md = static_cast<double>(m);
    const double crit = 1.6277 * std::sqrt(2.0 / md);
    std::vector<OracleReport> out;
    for (size_t q = 0; q < times.size(); ++q) {
        double d = ks_statistic(synced[q], direct[q]);
        OracleReport r;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "ks_exposure_t%g", times[q]);
        r.name = buf;
        r.target = crit;
        r.oracle = d;
        r.std_error = 0.0;
        r.sigmas = d / crit;
        r.tol_sigmas = 1.0;
        r.pass = d < crit;
        std::snprintf(buf, sizeof(buf), "normalized to the 1%% critical value; m=%ld", m);
        r.detail = buf;
        out.push_back(std::move(r));
    }
    return out;
}

ForwardLookingReport forward_looking_demo(double sigma, double rho, double s, double t,
                                          double theta_s, double g, long m,
                                          std::uint64_t seed) {
    if (!(theta_s >= s) || !(t >= theta_s)) {
        throw std::invalid_argument("forward_looking_demo: need s <= theta_s <= t");
    }
    if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("forward_looking_demo: |rho| > 1");
    const double gap = theta_s - s;
    const double tail = t - theta_s;
    const double v_s = 1.0;
    const double target = v_s * std::exp(sigma * rho * g - 0.5 * sigma * sigma * rho * rho * gap);

    RandomStream rs(seed, 0, StreamTag::aux);
    std::vector<double> vals(static_cast<size_t>(m));
    const double r2 = rho * rho;
    for (long i = 0; i < m; ++i) {
        double dw_gap;
        if (rho != 0.0) {
            // orthogonal gap component given the observed intensity increment
            double x = g * (1.0 - r2) + std::sqrt(r2 * (1.0 - r2) * gap) * rs.normal();
            dw_gap = (g - x) / rho;
        } else {
            dw_gap = rs.normal() * std::sqrt(gap);
        }
        double dw_tail = rs.normal() * std::sqrt(tail);
        vals[static_cast<size_t>(i)] =
            v_s * std::exp(-0.5 * sigma * sigma * (t - s) + sigma * (dw_gap + dw_tail));
    }
    MeanSe ms = mean_and_se(vals);

    ForwardLookingReport rep;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "forward_closed_form_rho%g", rho);
    std::string name = buf;
    std::snprintf(buf, sizeof(buf), "gap=%g g=%g m=%ld", gap, g, m);
    rep.closed_form = sigma_report(name, target, ms, 3.0, buf);
    rep.mc_mean = ms.mean;
    rep.mc_se = ms.se;
    rep.martingale_z = ms.se > 0.0 ? std::abs(ms.mean - v_s) / ms.se : 0.0;
    return rep;
}

SyncBenefitReport sync_benefit_check(const CirParams& p, const JumpParams& clock,
                                     double rho, double sigma, double t, double delta,
                                     long m, std::uint64_t seed, unsigned threads) {
    const long n = grid_steps(t, delta);
    KillingRateTable kt(p, clock);
    std::vector<double> lam(static_cast<size_t>(m));
    std::vector<double> v_sync(static_cast<size_t>(m));
    std::vector<double> v_unsync(static_cast<size_t>(m));
    run_parallel(m, threads, [&](long i) {
        thread_local std::vector<double> dwv, dwo, dwl, x, dwsync;
        const auto sid = static_cast<std::uint32_t>(i);
        RandomStream ca(seed, sid, StreamTag::clock_arrival);
        RandomStream cs(seed, sid, StreamTag::clock_size);
        RandomStream rv(seed, sid, StreamTag::exposure_driver);
        RandomStream ro(seed, sid, StreamTag::ortho_driver);
        ClockPath cp = sample_clock(clock, t, ca, cs);
        RefinedGrid grid = build_refined_grid(cp, delta, {t});
        dwv.resize(grid.intervals());
        dwo.resize(grid.intervals());
        for (size_t j = 0; j < dwv.size(); ++j) {
            double sq = std::sqrt(grid.nodes[j + 1] - grid.nodes[j]);
            dwv[j] = rv.normal() * sq;
            dwo[j] = ro.normal() * sq;
        }
        correlate_drivers(dwv, dwo, rho, dwl);
        simulate_cir_euler(p, grid.nodes, dwl, x);
        lam[static_cast<size_t>(i)] =
            kt(positive_part(x[grid.base_index[static_cast<size_t>(n)]]));

        synchronized_increments(grid, dwv, dwsync);
        double w = 0.0;
        for (double d : dwsync) w += d;
        v_sync[static_cast<size_t>(i)] = sigma * w;

        // the exposure read off the clock axis at coordinate t, i.e. the
        // driver value ignoring how far the clock has run ahead
        size_t node_t = grid.find_node(t);
        double wu = 0.0;
        for (size_t j = 0; j < node_t; ++j) wu += dwv[j];
        v_unsync[static_cast<size_t>(i)] = sigma * wu;
    });

    SyncBenefitReport rep;
    rep.corr_sync = correlation(lam, v_sync);
    rep.corr_unsync = correlation(lam, v_unsync);
    rep.se = std::sqrt(2.0 / (static_cast<double>(m) - 3.0));
    rep.pass = rep.corr_sync >= rep.corr_unsync - 2.0 * rep.se;
    return rep;
}

std::vector<OracleReport> run_validation_suite(const ModelParams& cir_mp,
                                               const ModelParams& jcir_mp,
                                               const ModelParams& tc_mp,
                                               const ExposureSpec& exposure, double T,
                                               double delta, bool full, std::uint64_t seed,
                                               unsigned threads) {
    const long m_surv = full ? 100000 : 20000;
    const double d_surv = full ? 1e-3 : 2e-3;
    const long m_theta = full ? 1000000 : 200000;
    const long m_law = full ? 1000000 : 100000;
    const long m_ks = full ? 100000 : 20000;
    const long m_fwd = full ? 1000000 : 200000;
    const long m_sync = full ? 100000 : 20000;

    std::vector<OracleReport> out;
    out.push_back(mc_survival_check(cir_mp, T, m_surv, d_surv, derive_seed(seed, 1), threads));
    out.push_back(mc_survival_check(jcir_mp, T, m_surv, d_surv, derive_seed(seed, 2), threads));
    out.push_back(mc_survival_check(tc_mp, T, m_surv, d_surv, derive_seed(seed, 3), threads));
    out.push_back(bochner_theta_check(tc_mp, T, m_theta, derive_seed(seed, 4), threads));

    auto lem = sync_driver_law_checks(tc_mp.jumps, T, delta, m_law, derive_seed(seed, 5), threads);
    out.insert(out.end(), lem.begin(), lem.end());

    auto ks = ks_exposure_checks(tc_mp.jumps, exposure, T, delta, {1.0, 2.0, 3.0}, m_ks,
                                 derive_seed(seed, 6), threads);
    out.insert(out.end(), ks.begin(), ks.end());

    ForwardLookingReport f1 =
        forward_looking_demo(0.08, 0.5, 1.0, 2.0, 1.3, 0.37, m_fwd, derive_seed(seed, 7));
    out.push_back(f1.closed_form);

    ForwardLookingReport f2 =
        forward_looking_demo(0.08, 0.9, 1.0, 2.0, 1.3, 0.37, m_fwd, derive_seed(seed, 8));
    OracleReport rej;
    rej.name = "forward_martingale_reject";
    rej.target = 2.576;
    rej.oracle = f2.martingale_z;
    rej.std_error = 0.0;
    rej.sigmas = f2.martingale_z / 2.576;
    rej.tol_sigmas = 1.0;
    rej.pass = f2.martingale_z > 2.576;
    rej.detail = "conditional mean must leave v_s at the 1% level when rho=0.9";
    out.push_back(rej);

    ForwardLookingReport f3 =
        forward_looking_demo(0.08, 0.0, 1.0, 2.0, 1.3, 0.37, m_fwd, derive_seed(seed, 9));
    OracleReport nor;
    nor.name = "forward_martingale_noreject";
    nor.target = 2.576;
    nor.oracle = f3.martingale_z;
    nor.std_error = 0.0;
    nor.sigmas = f3.martingale_z / 2.576;
    nor.tol_sigmas = 1.0;
    nor.pass = f3.martingale_z <= 2.576;
    nor.detail = "conditional mean must stay at v_s when rho=0";
    out.push_back(nor);

    SyncBenefitReport sb = sync_benefit_check(tc_mp.cir, tc_mp.jumps, 0.9, exposure.sigma,
                                              T, delta, m_sync, derive_seed(seed, 10), threads);
    OracleReport sbr;
    sbr.name = "sync_benefit";
    sbr.target = sb.corr_unsync;
    sbr.oracle = sb.corr_sync;
    sbr.std_error = sb.se;
    sbr.sigmas = (sb.corr_unsync - sb.corr_sync) / sb.se;
    sbr.tol_sigmas = 2.0;
    sbr.pass = sb.pass;
    sbr.detail = "synchronized correlation must not fall below the direct one";
    out.push_back(sbr);

    return out;
}

void write_reports_csv(const std::string& path, const std::vector<OracleReport>& reports) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_reports_csv: cannot open " + path);
    out << "name,target,oracle,std_error,sigmas,tol_sigmas,pass,detail\n";
    char line[512];
    for (const OracleReport& r : reports) {
        std::snprintf(line, sizeof(line), "%s,%.12g,%.12g,%.12g,%.6g,%.6g,%d,%s\n",
                      r.name.c_str(), r.target, r.oracle, r.std_error, r.sigmas,
                      r.tol_sigmas, r.pass ? 1 : 0, r.detail.c_str());
        out << line;
    }
}

void print_reports(const std::vector<OracleReport>& reports) {
    std::printf("%-28s %14s %14s %12s %8s  %s\n", "check", "target", "measured", "std_error",
                "sigmas", "verdict");
    for (const OracleReport& r : reports) {
        std::printf("%-28s %14.8g %14.8g %12.4g %8.3f  %s\n", r.name.c_str(), r.target,
                    r.oracle, r.std_error, r.sigmas, r.pass ? "pass" : "FAIL");
    }
}

}  // namespace wwrcva
