// camg: experiment driver for the contact saddle-point multigrid solver.
//
//   camg solve          --config run.cfg --out results/ [--export-system]
//   camg rotation-sweep --config run.cfg --out results/
//   camg refine-sweep   --config run.cfg --out results/

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "camg/experiments.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitFailure = 3;

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw camg::Error("cannot write " + path.string());
    out << text;
}

int run_solve(const camg::ExperimentConfig& cfg, const std::filesystem::path& out, bool export_system) {
    const camg::ContactModel model = camg::build_contact_model(cfg.mesh);
    if (export_system) camg::export_system(out, model.system);
    const camg::SolveOutcome o = camg::solve_contact(model, cfg);
    camg::write_residual_csv(out / "report.csv", o.report);
    write_text(out / "setup.txt", o.setup_report);
    std::printf("unknowns %lld (u %lld, lambda %lld)\n", static_cast<long long>(model.system.op.size()),
                static_cast<long long>(model.system.op.n_u()), static_cast<long long>(model.system.op.n_lam()));
    std::printf("levels %lld, operator complexity %.4f\n", static_cast<long long>(o.levels), o.complexity);
    std::printf("iterations %lld, converged %s, relative residual %.3e\n", static_cast<long long>(o.report.iterations),
                o.report.converged ? "yes" : "no", o.report.final_true_residual);
    std::printf("setup %.3f s, solve %.3f s\n", o.report.setup_seconds, o.report.solve_seconds);
    return o.report.converged ? 0 : kExitNotConverged;
}

int run_rotation(const camg::ExperimentConfig& cfg, const std::filesystem::path& out) {
    const auto rows = camg::rotation_sweep(cfg);
    camg::write_rotation_csv(out / "rotation.csv", rows);
    bool ok = true;
    std::printf("%-12s %-10s %s\n", "angle", "iterations", "converged");
    for (const auto& r : rows) {
        std::printf("%-12.6f %-10lld %s\n", r.angle, static_cast<long long>(r.iterations), r.converged ? "yes" : "no");
        ok = ok && r.converged;
    }
    return ok ? 0 : kExitNotConverged;
}

int run_refine(const camg::ExperimentConfig& cfg, const std::filesystem::path& out) {
    const auto rows = camg::refine_sweep(cfg);
    camg::write_refine_csv(out / "refine.csv", rows);
    camg::write_refine_timings_csv(out / "refine_timings.csv", rows);
    bool ok = true;
    std::printf("%-9s %-9s %-7s %-11s %-11s %-9s %s\n", "elements", "unknowns", "levels", "iterations", "complexity",
                "setup_s", "solve_s");
    for (const auto& r : rows) {
        std::printf("%-9lld %-9lld %-7lld %-11lld %-11.4f %-9.3f %.3f\n", static_cast<long long>(r.elements),
                    static_cast<long long>(r.n_u + r.n_lam), static_cast<long long>(r.levels),
                    static_cast<long long>(r.iterations), r.complexity, r.setup_seconds, r.solve_seconds);
        ok = ok && r.converged;
    }
    return ok ? 0 : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aggregation multigrid for mortar contact saddle-point systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "camg-out";
    bool export_system = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value configuration file")->required();
        cmd->add_option("--out", out_dir, "output directory");
    };
    CLI::App* solve = app.add_subcommand("solve", "assemble, set up the hierarchy and solve once");
    add_common(solve);
    solve->add_flag("--export-system", export_system, "write K.mtx, B1.mtx, B2.mtx, Cz.mtx and rhs vectors");
    CLI::App* rotation = app.add_subcommand("rotation-sweep", "iteration counts over rotation angles");
    add_common(rotation);
    CLI::App* refine = app.add_subcommand("refine-sweep", "iteration counts and complexity under mesh refinement");
    add_common(refine);

    CLI11_PARSE(app, argc, argv);

    camg::ExperimentConfig cfg;
    try {
        cfg = camg::experiment_config_from(camg::KeyValueConfig::load(config_path));
    } catch (const camg::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const camg::UnsupportedConfigurationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    }

    try {
        const std::filesystem::path out(out_dir);
        std::filesystem::create_directories(out);
        if (solve->parsed()) return run_solve(cfg, out, export_system);
        if (rotation->parsed()) return run_rotation(cfg, out);
        return run_refine(cfg, out);
    } catch (const camg::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
}
