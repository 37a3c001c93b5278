#include "camg/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace camg {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_csv(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace

ExperimentConfig experiment_config_from(const KeyValueConfig& cfg) {
    ExperimentConfig e;
    e.mesh = mesh_spec_from_config(cfg);
    e.hierarchy = hierarchy_config_from(cfg);
    e.gmres.rel_tol = cfg.get_double("gmres.rel_tol", e.gmres.rel_tol);
    e.gmres.max_iters = cfg.get_int("gmres.max_iters", e.gmres.max_iters);
    e.gmres.restart = cfg.get_int("gmres.restart", e.gmres.restart);
    try {
        e.gmres.validate();
    } catch (const ConfigError& err) {
        throw ConfigError(cfg.where("gmres.rel_tol") + ": " + err.what());
    }
    const std::string pre = cfg.get_string("preconditioner", "fully_coupled");
    if (pre == "fully_coupled")
        e.preconditioner = PreconditionerKind::fully_coupled;
    else if (pre == "nested")
        e.preconditioner = PreconditionerKind::nested;
    else if (pre == "none")
        e.preconditioner = PreconditionerKind::none;
    else
        throw ConfigError(cfg.where("preconditioner") + ": preconditioner must be fully_coupled, nested or none");

    e.nested_inner.max_levels = cfg.get_int("nested.max_levels", e.hierarchy.max_levels);
    e.nested_inner.max_coarse_size = cfg.get_int("nested.max_coarse_size", e.hierarchy.max_coarse_size);
    e.nested_inner.min_agg_size = cfg.get_int("nested.min_agg_size", e.hierarchy.min_agg_size);
    e.nested_inner.smooth_transfers = cfg.get_bool("nested.smooth", e.hierarchy.smooth_displacement_transfers);
    e.nested_inner.omega = cfg.get_double("nested.omega", e.hierarchy.omega);
    e.nested_inner.eps_drop = e.hierarchy.eps_drop;
    e.nested_inner.smoother.sweeps = cfg.get_int("nested.smoother.sweeps", e.nested_inner.smoother.sweeps);
    e.nested_inner.smoother.damping = cfg.get_double("nested.smoother.damping", e.nested_inner.smoother.damping);
    try {
        e.nested_inner.smoother.validate();
    } catch (const ConfigError& err) {
        throw ConfigError(cfg.where("nested.smoother.sweeps") + ": " + err.what());
    }

    const double pi = std::numbers::pi;
    e.angles = cfg.get_double_list("rotation.angles", {0.0, pi / 8, pi / 4, 3 * pi / 8, pi / 2});
    const index_t m = e.mesh.slave_elems.nx;
    const auto sizes = cfg.get_double_list("refine.sizes", {double(m), double(2 * m), double(4 * m)});
    for (double s : sizes) {
        if (s < 1 || s != std::floor(s)) throw ConfigError(cfg.where("refine.sizes") + ": sizes must be positive integers");
        e.sizes.push_back(static_cast<index_t>(s));
    }
    cfg.require_all_used();
    return e;
}

SolveOutcome solve_system(const SaddleSystem& system, const HierarchyInput& input, const ExperimentConfig& cfg) {
    SolveOutcome out;
    const SaddleOperator& op = system.op;
    const index_t nu = op.n_u();
    LinearOperator apply_a = [&op, nu](std::span<const double> x, std::span<double> y) {
        const BlockVector r = op.apply(BlockVector::split(x, nu));
        std::copy(r.u.begin(), r.u.end(), y.begin());
        std::copy(r.lam.begin(), r.lam.end(), y.begin() + nu);
    };
    auto wrap = [nu](auto precond) {
        return LinearOperator([precond, nu](std::span<const double> x, std::span<double> y) {
            const BlockVector r = precond->apply(BlockVector::split(x, nu));
            std::copy(r.u.begin(), r.u.end(), y.begin());
            std::copy(r.lam.begin(), r.lam.end(), y.begin() + nu);
        });
    };

    const auto t0 = std::chrono::steady_clock::now();
    LinearOperator apply_m;
    switch (cfg.preconditioner) {
        case PreconditionerKind::fully_coupled: {
            auto h = std::make_shared<const Hierarchy>(Hierarchy::setup(op, input, cfg.hierarchy));
            out.complexity = h->complexity();
            out.levels = h->num_levels();
            out.setup_report = h->report();
            apply_m = wrap(h);
            break;
        }
        case PreconditionerKind::nested: {
            auto p = std::make_shared<const NestedPreconditioner>(op, input, cfg.hierarchy.smoother, cfg.nested_inner);
            out.levels = p->inner().num_levels();
            out.setup_report = "nested preconditioner: outer " + describe(cfg.hierarchy.smoother) +
                               ", inner scalar AMG levels " + std::to_string(out.levels) + "\n";
            apply_m = wrap(p);
            break;
        }
        case PreconditionerKind::none: out.setup_report = "no preconditioner\n"; break;
    }
    out.report.setup_seconds = seconds_since(t0);
    const auto merged = system.rhs.merged();
    const auto x = gmres(apply_a, apply_m, merged, cfg.gmres, out.report);
    out.x = BlockVector::split(x, nu);
    return out;
}

SolveOutcome solve_contact(const ContactModel& model, const ExperimentConfig& cfg) {
    return solve_system(model.system, hierarchy_input(model.problem), cfg);
}

std::vector<RotationRow> rotation_sweep(const ExperimentConfig& cfg) {
    std::vector<RotationRow> rows;
    for (double angle : cfg.angles) {
        MeshSpec spec = cfg.mesh;
        spec.angle = angle;
        const ContactModel model = build_contact_model(spec);
        const SolveOutcome o = solve_contact(model, cfg);
        rows.push_back({angle, o.report.iterations, o.report.converged, o.complexity});
    }
    return rows;
}

std::vector<RefineRow> refine_sweep(const ExperimentConfig& cfg) {
    std::vector<RefineRow> rows;
    for (index_t m : cfg.sizes) {
        MeshSpec spec = cfg.mesh;
        spec.slave_elems = {m, m};
        spec.master_elems = {m, m};
        const ContactModel model = build_contact_model(spec);
        const SolveOutcome o = solve_contact(model, cfg);
        rows.push_back({m, model.system.op.n_u(), model.system.op.n_lam(), o.levels, o.report.iterations,
                        o.report.converged, o.complexity, o.report.setup_seconds, o.report.solve_seconds});
    }
    return rows;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_residual_csv(const std::filesystem::path& path, const SolveReport& report) {
    auto out = open_csv(path);
    out << "iteration,relative_residual\n";
    for (std::size_t i = 0; i < report.residual_history.size(); ++i)
        out << i << ',' << format_number(report.residual_history[i]) << '\n';
}

void write_rotation_csv(const std::filesystem::path& path, const std::vector<RotationRow>& rows) {
    auto out = open_csv(path);
    out << "angle,iterations,converged,complexity\n";
    for (const auto& r : rows)
        out << format_number(r.angle) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
            << format_number(r.complexity) << '\n';
}

void write_refine_csv(const std::filesystem::path& path, const std::vector<RefineRow>& rows) {
    auto out = open_csv(path);
    out << "elements,n_u,n_lam,levels,iterations,converged,complexity\n";
    for (const auto& r : rows)
        out << r.elements << ',' << r.n_u << ',' << r.n_lam << ',' << r.levels << ',' << r.iterations << ','
            << (r.converged ? 1 : 0) << ',' << format_number(r.complexity) << '\n';
}

void write_refine_timings_csv(const std::filesystem::path& path, const std::vector<RefineRow>& rows) {
    auto out = open_csv(path);
    out << "elements,setup_seconds,solve_seconds\n";
    for (const auto& r : rows)
        out << r.elements << ',' << format_number(r.setup_seconds) << ',' << format_number(r.solve_seconds) << '\n';
}

}  // namespace camg
