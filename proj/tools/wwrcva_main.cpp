#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wwrcva/config.hpp"
#include "wwrcva/cva.hpp"
#include "wwrcva/validation.hpp"

namespace {

using namespace wwrcva;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool seed_given = false;
};

void add_common(CLI::App* sub, CommonOpts& opts, bool* seed_flagged) {
    sub->add_option("--config", opts.config_path, "experiment description file")
        ->envname("WWRCVA_CONFIG");
    sub->add_option("--out", opts.out_dir, "output directory")->envname("WWRCVA_OUT");
    auto* seed_opt =
        sub->add_option("--seed", opts.seed, "override the config seed")->envname("WWRCVA_SEED");
    sub->add_option("--threads", opts.threads, "worker threads")->envname("WWRCVA_THREADS");
    sub->callback([seed_opt, seed_flagged]() { *seed_flagged = seed_opt->count() > 0; });
}

RunConfig load_or_default(const CommonOpts& opts) {
    RunConfig cfg;
    if (!opts.config_path.empty()) cfg = load_config(opts.config_path);
    if (opts.seed_given) cfg.sim.seed = opts.seed;
    return cfg;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

int cmd_calibrate(const CommonOpts& opts, bool require_nonneg) {
    RunConfig cfg = load_or_default(opts);
    MarketCurve market = cfg.make_market();
    double step = cfg.psi_step > 0.0 ? cfg.psi_step : 0.5 * cfg.sim.delta;
    std::filesystem::create_directories(opts.out_dir);
    bool all_nonneg = true;
    for (Model m : cfg.models) {
        ModelParams mp = cfg.make_model(m);
        ShiftCurve shift = calibrate_shift(mp, market, cfg.sim.T, step);
        std::string file = join_path(opts.out_dir, "shift_" + model_name(m) + ".csv");
        shift.write_csv(file);
        std::printf("%-6s min_psi=%.6e nonnegative=%s -> %s\n", model_name(m).c_str(),
                    shift.min_value(), shift.nonnegative() ? "yes" : "NO", file.c_str());
        all_nonneg = all_nonneg && shift.nonnegative();
    }
    if (require_nonneg && !all_nonneg) {
        std::fprintf(stderr, "calibrate: negative shift detected\n");
        return 1;
    }
    return 0;
}

int run_estimates(const CommonOpts& opts, const std::vector<double>& rhos, bool timings,
                  long dump_paths, bool profile, const std::string& csv_name) {
    RunConfig cfg = load_or_default(opts);
    std::filesystem::create_directories(opts.out_dir);

    std::vector<std::unique_ptr<CvaEngine>> engines;
    std::vector<const CvaEngine*> views;
    for (Model m : cfg.models) {
        engines.push_back(std::make_unique<CvaEngine>(cfg.make_setup(m)));
        views.push_back(engines.back().get());
    }

    auto rows = rho_sweep(views, rhos, cfg.estimators, cfg.sim.m, opts.threads);
    std::string file = join_path(opts.out_dir, csv_name);
    write_estimates_csv(file, rows, timings);
    std::printf("wrote %s (%zu rows)\n", file.c_str(), rows.size());

    if (dump_paths > 0) {
        for (size_t i = 0; i < engines.size(); ++i) {
            std::string pfile = join_path(
                opts.out_dir, "paths_" + model_name(cfg.models[i]) + ".csv");
            engines[i]->dump_paths(rhos.front(), dump_paths, pfile);
            std::printf("wrote %s\n", pfile.c_str());
        }
    }
    if (profile) {
        const ExposureSpec ex = engines.front()->setup().exposure;
        std::string efile = join_path(opts.out_dir, "exposure_profile.csv");
        std::ofstream out(efile);
        out << "u,expected_positive\n";
        char line[96];
        long n = cfg.sim.steps();
        for (long k = 0; k <= n; ++k) {
            double u = cfg.sim.delta * static_cast<double>(k);
            std::snprintf(line, sizeof(line), "%.12g,%.12g\n", u, expected_positive(ex, u));
            out << line;
        }
        std::printf("wrote %s\n", efile.c_str());
    }
    return 0;
}

int cmd_validate(const CommonOpts& opts, bool full) {
    RunConfig cfg = load_or_default(opts);
    std::filesystem::create_directories(opts.out_dir);
    ExposureSpec ex = cfg.exposure;
    if (ex.kind == ExposureKind::drifted_bridge && ex.maturity == 0.0) ex.maturity = cfg.sim.T;
    auto reports = run_validation_suite(cfg.make_model(Model::cir), cfg.make_model(Model::jcir),
                                        cfg.make_model(Model::tccir), ex, cfg.sim.T,
                                        cfg.sim.delta, full, cfg.sim.seed, opts.threads);
    print_reports(reports);
    std::string file = join_path(opts.out_dir, "validation.csv");
    write_reports_csv(file, reports);
    std::printf("wrote %s\n", file.c_str());
    for (const auto& r : reports) {
        if (!r.pass) return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo CVA engine with wrong-way risk and clock-changed intensities"};
    app.require_subcommand(1);

    CommonOpts cal_opts, cva_opts, sweep_opts, val_opts;
    bool cal_seed = false, cva_seed = false, sweep_seed = false, val_seed = false;
    bool require_nonneg = false, cva_timings = false, sweep_timings = false;
    bool full = false, profile = false;
    long dump_paths = 0;

    CLI::App* cal = app.add_subcommand("calibrate", "tabulate the shift for each model");
    add_common(cal, cal_opts, &cal_seed);
    cal->add_flag("--require-nonneg", require_nonneg,
                  "exit nonzero when the shift goes negative");

    CLI::App* cva = app.add_subcommand("cva", "estimate CVA at the config correlation");
    add_common(cva, cva_opts, &cva_seed);
    cva->add_flag("--timings", cva_timings, "record wall times in the CSV");
    cva->add_option("--dump-paths", dump_paths, "also write the first N scenario paths");
    cva->add_flag("--profile", profile, "also write the expected positive exposure profile");

    CLI::App* sweep = app.add_subcommand("sweep", "estimate CVA across the correlation grid");
    add_common(sweep, sweep_opts, &sweep_seed);
    sweep->add_flag("--timings", sweep_timings, "record wall times in the CSV");

    CLI::App* val = app.add_subcommand("validate", "run the oracle suite");
    add_common(val, val_opts, &val_seed);
    val->add_flag("--full", full, "desk-scale sample counts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cal->parsed()) {
            cal_opts.seed_given = cal_seed;
            return cmd_calibrate(cal_opts, require_nonneg);
        }
        if (cva->parsed()) {
            cva_opts.seed_given = cva_seed;
            RunConfig cfg = load_or_default(cva_opts);
            return run_estimates(cva_opts, {cfg.sim.rho}, cva_timings, dump_paths, profile,
                                 "results.csv");
        }
        if (sweep->parsed()) {
            sweep_opts.seed_given = sweep_seed;
            RunConfig cfg = load_or_default(sweep_opts);
            return run_estimates(sweep_opts, cfg.rho_grid, sweep_timings, 0, false,
                                 "sweep.csv");
        }
        if (val->parsed()) {
            val_opts.seed_given = val_seed;
            return cmd_validate(val_opts, full);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
