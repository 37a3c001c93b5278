#include "camg/hierarchy.hpp"

#include <sstream>

#include "camg/vector.hpp"

namespace camg {

void HierarchyConfig::validate() const {
    if (max_levels < 1) throw ConfigError("hierarchy: max_levels must be at least 1");
    if (max_coarse_size < 1) throw ConfigError("hierarchy: max_coarse_size must be at least 1");
    if (min_agg_size < 1) throw ConfigError("hierarchy: min_agg_size must be at least 1");
    if (pre_sweeps < 0 || post_sweeps < 0) throw ConfigError("hierarchy: sweep counts must be non-negative");
    if (!(omega >= 0.0)) throw ConfigError("hierarchy: omega must be non-negative");
    if (!(eps_drop >= 0.0)) throw ConfigError("hierarchy: eps_drop must be non-negative");
    smoother.validate();
}

HierarchyConfig hierarchy_config_from(const KeyValueConfig& cfg, const HierarchyConfig& fallback) {
    HierarchyConfig h = fallback;
    h.max_levels = cfg.get_int("hierarchy.max_levels", h.max_levels);
    h.max_coarse_size = cfg.get_int("hierarchy.max_coarse_size", h.max_coarse_size);
    h.min_agg_size = cfg.get_int("hierarchy.min_agg_size", h.min_agg_size);
    h.smooth_displacement_transfers = cfg.get_bool("hierarchy.smooth_displacement", h.smooth_displacement_transfers);
    h.omega = cfg.get_double("hierarchy.omega", h.omega);
    h.eps_drop = cfg.get_double("hierarchy.eps_drop", h.eps_drop);
    h.pre_sweeps = cfg.get_int("hierarchy.pre_sweeps", h.pre_sweeps);
    h.post_sweeps = cfg.get_int("hierarchy.post_sweeps", h.post_sweeps);
    const std::string coarse = cfg.get_string("hierarchy.coarse_solver", "");
    if (coarse == "merged_lu")
        h.coarse_solver = CoarseSolverKind::merged_lu;
    else if (coarse == "block_smoother")
        h.coarse_solver = CoarseSolverKind::block_smoother;
    else if (!coarse.empty())
        throw ConfigError(cfg.where("hierarchy.coarse_solver") +
                          ": hierarchy.coarse_solver must be 'merged_lu' or 'block_smoother'");
    h.smoother = block_smoother_from_config(cfg, "smoother.", h.smoother);
    try {
        h.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(cfg.where("hierarchy.max_levels") + ": " + e.what());
    }
    return h;
}

HierarchyInput hierarchy_input(const ContactProblem& problem) {
    HierarchyInput in;
    in.u_layout = problem.layout();
    in.u_nullspace = rigid_body_nullspace(problem.node_coords);
    const auto ns = static_cast<index_t>(problem.slave_nodes.size());
    in.lam_layout = NodeLayout::uniform(ns, ContactProblem::dofs_per_node);
    SlaveCoupling c;
    c.D = problem.mortar.D;
    for (index_t i = 0; i < c.D.num_rows(); ++i) c.row_node.push_back(problem.slave_nodes[i / 2]);
    in.coupling = std::move(c);
    return in;
}

namespace {

LevelInfo describe_operator(const SaddleOperator& op) {
    LevelInfo info;
    info.n_u = op.n_u();
    info.n_lam = op.n_lam();
    info.nnz_K = op.K.nnz();
    info.nnz_B1 = op.B1.nnz();
    info.nnz_B2 = op.B2.nnz();
    info.nnz_Cz = op.Cz.nnz();
    return info;
}

LagrangeMap lagrange_map(const SlaveCoupling& coupling, const NodeLayout& lam_layout) {
    LagrangeMap map;
    map.row_node = coupling.row_node;
    map.lm_node_of_lm_dof = lam_layout.dof_to_node();
    map.num_lm_nodes = lam_layout.num_nodes();
    return map;
}

}  // namespace

Hierarchy Hierarchy::setup(const SaddleOperator& op, const HierarchyInput& input, const HierarchyConfig& cfg) {
    cfg.validate();
    op.validate();
    require_dims(input.u_layout.num_dofs() == op.n_u(), "Hierarchy::setup: displacement layout does not match K");
    require_dims(input.lam_layout.num_dofs() == op.n_lam(), "Hierarchy::setup: multiplier layout does not match Cz");
    require_dims(input.u_nullspace.vectors.num_rows == op.n_u(), "Hierarchy::setup: null space does not match K");

    Hierarchy h;
    h.cfg_ = cfg;
    auto current = std::make_shared<const SaddleOperator>(op);
    NodeLayout u_layout = input.u_layout;
    NodeLayout lam_layout = input.lam_layout;
    NullSpace u_ns = input.u_nullspace;
    NullSpace lam_ns = constant_nullspace(lam_layout.num_nodes(), ContactProblem::dofs_per_node);
    require_dims(lam_layout.num_dofs() == lam_ns.vectors.num_rows,
                 "Hierarchy::setup: multiplier layout must have two DOFs per node");

    for (index_t l = 0;; ++l) {
        Level level;
        level.op = current;
        level.u_layout = u_layout;
        level.lam_layout = lam_layout;
        level.info = describe_operator(*current);
        const bool last = l + 1 >= cfg.max_levels || current->size() < cfg.max_coarse_size;
        if (last) {
            h.levels_.push_back(std::move(level));
            break;
        }

        const NodeGraph graph = build_filtered_graph(current->K, u_layout, cfg.eps_drop);
        Aggregation u_aggs = aggregate_greedy(graph, cfg.min_agg_size);
        if (u_aggs.num_aggs == 0) throw SetupError("Hierarchy::setup: no displacement aggregates on level " +
                                                   std::to_string(l) + " (all nodes constrained?)");
        const SlaveCoupling coupling =
            (l == 0 && input.coupling) ? *input.coupling : slave_coupling(current->B1, u_layout);
        Aggregation lam_aggs = aggregate_lagrange(u_aggs, coupling.D, lagrange_map(coupling, lam_layout));

        TentativeProlongator pu = tentative_prolongator(u_aggs, u_ns, u_layout);
        TentativeProlongator pl = tentative_prolongator(lam_aggs, lam_ns, lam_layout);
        level.info.u_aggregates = u_aggs.num_aggs;
        level.info.lam_aggregates = lam_aggs.num_aggs;
        level.info.u_singletons = u_aggs.report.singletons;
        level.info.lam_overlaps = lam_aggs.report.overlapping_nodes;
        level.info.dropped_columns = pu.dropped_columns;

        SparseMatrix p_u = std::move(pu.P);
        if (cfg.smooth_displacement_transfers) {
            SmoothedProlongator sp = smooth_prolongator(p_u, current->K, cfg.omega);
            level.info.lambda_max = sp.lambda_max;
            level.info.omega = sp.omega;
            p_u = std::move(sp.P);
        }
        BlockTransfer t = build_block_transfer(std::move(p_u), std::move(pl.P));
        auto coarse = std::make_shared<const SaddleOperator>(coarsen_block(*current, t));
        if (coarse->size() >= current->size()) break;  // coarsening stagnated; keep the current level as coarsest

        level.transfer_down = std::move(t);
        level.u_aggs = std::move(u_aggs);
        level.lam_aggs = std::move(lam_aggs);
        level.smoother = std::make_shared<const BlockSmoother>(current, cfg.smoother);
        h.levels_.push_back(std::move(level));

        current = std::move(coarse);
        u_layout = std::move(pu.coarse_layout);
        lam_layout = std::move(pl.coarse_layout);
        u_ns = std::move(pu.coarse_ns);
        lam_ns = std::move(pl.coarse_ns);
    }
    if (h.levels_.empty() || h.levels_.back().transfer_down) {
        // Stagnation: the last pushed level still holds its transfer; make `current` the coarsest.
        Level level;
        level.op = current;
        level.u_layout = u_layout;
        level.lam_layout = lam_layout;
        level.info = describe_operator(*current);
        h.levels_.push_back(std::move(level));
    }

    Level& coarsest = h.levels_.back();
    if (cfg.coarse_solver == CoarseSolverKind::merged_lu)
        h.coarse_lu_ = std::make_shared<const DenseLu>(coarsest.op->merged().to_dense());
    else
        coarsest.smoother = std::make_shared<const BlockSmoother>(coarsest.op, cfg.smoother);
    return h;
}

double Hierarchy::complexity() const {
    double total = 0.0;
    for (const auto& l : levels_) total += static_cast<double>(l.op->nnz());
    return total / static_cast<double>(levels_.front().op->nnz());
}

void Hierarchy::coarse_solve(BlockVector& x, const BlockVector& b) const {
    const Level& coarsest = levels_.back();
    if (coarse_lu_) {
        const BlockVector r = coarsest.op->residual(x, b);
        const auto dx = coarse_lu_->solve(r.merged());
        const BlockVector d = BlockVector::split(dx, coarsest.op->n_u());
        axpy(1.0, d.u, x.u);
        axpy(1.0, d.lam, x.lam);
        return;
    }
    for (index_t s = 0; s < cfg_.pre_sweeps + cfg_.post_sweeps; ++s) coarsest.smoother->smooth(x, b);
}

void Hierarchy::vcycle(index_t l, BlockVector& x, const BlockVector& b) const {
    if (l == num_levels() - 1) {
        coarse_solve(x, b);
        return;
    }
    const Level& level = levels_[l];
    for (index_t s = 0; s < cfg_.pre_sweeps; ++s) level.smoother->smooth(x, b);
    const BlockVector rc = level.transfer_down->restrict_vector(level.op->residual(x, b));
    const SaddleOperator& cop = *levels_[l + 1].op;
    BlockVector xc(cop.n_u(), cop.n_lam());
    vcycle(l + 1, xc, rc);
    const BlockVector corr = level.transfer_down->prolong(xc);
    axpy(1.0, corr.u, x.u);
    axpy(1.0, corr.lam, x.lam);
    for (index_t s = 0; s < cfg_.post_sweeps; ++s) level.smoother->smooth(x, b);
}

BlockVector Hierarchy::apply(const BlockVector& b) const {
    BlockVector x(levels_.front().op->n_u(), levels_.front().op->n_lam());
    vcycle(0, x, b);
    return x;
}

std::string Hierarchy::report() const {
    std::ostringstream s;
    s << "levels " << num_levels() << "\n";
    s << "smoother " << describe(cfg_.smoother) << "\n";
    s << "coarse_solver " << (cfg_.coarse_solver == CoarseSolverKind::merged_lu ? "merged_lu" : "block_smoother")
      << "\n";
    for (index_t l = 0; l < num_levels(); ++l) {
        const LevelInfo& i = levels_[l].info;
        s << "level " << l << ": rows " << i.n_u + i.n_lam << " (u " << i.n_u << ", lam " << i.n_lam << ")"
          << ", nnz K " << i.nnz_K << " B1 " << i.nnz_B1 << " B2 " << i.nnz_B2 << " Cz " << i.nnz_Cz;
        if (levels_[l].transfer_down) {
            s << ", aggregates u " << i.u_aggregates << " lam " << i.lam_aggregates << ", singletons "
              << i.u_singletons << ", lam overlaps " << i.lam_overlaps << ", dropped null-space columns "
              << i.dropped_columns;
            if (i.lambda_max > 0.0) s << ", lambda_max " << i.lambda_max << " omega " << i.omega;
        }
        s << "\n";
    }
    s << "operator complexity " << complexity() << "\n";
    return s.str();
}

ScalarAmg::ScalarAmg(const SparseMatrix& K, const NodeLayout& layout, const NullSpace& ns, const Config& cfg) {
    if (cfg.max_levels < 1 || cfg.max_coarse_size < 1 || cfg.min_agg_size < 1)
        throw ConfigError("ScalarAmg: level counts and sizes must be at least 1");
    SparseMatrix a = K;
    NodeLayout lay = layout;
    NullSpace cur_ns = ns;
    for (index_t l = 0;; ++l) {
        ScalarLevel level;
        level.A = a;
        if (l + 1 >= cfg.max_levels || a.num_rows() < cfg.max_coarse_size) {
            levels_.push_back(std::move(level));
            break;
        }
        const Aggregation aggs = aggregate_greedy(build_filtered_graph(a, lay, cfg.eps_drop), cfg.min_agg_size);
        if (aggs.num_aggs == 0) throw SetupError("ScalarAmg: no aggregates on level " + std::to_string(l));
        TentativeProlongator tp = tentative_prolongator(aggs, cur_ns, lay);
        SparseMatrix p = cfg.smooth_transfers ? smooth_prolongator(tp.P, a, cfg.omega).P : std::move(tp.P);
        if (p.num_cols() >= a.num_rows()) {
            levels_.push_back(std::move(level));
            break;
        }
        level.R = transpose(p);
        SparseMatrix coarse = galerkin_triple(level.R, a, p);
        level.P = std::move(p);
        level.smoother = std::make_shared<const PointSmoother>(a, cfg.smoother);
        levels_.push_back(std::move(level));
        a = std::move(coarse);
        lay = std::move(tp.coarse_layout);
        cur_ns = std::move(tp.coarse_ns);
    }
    coarse_lu_ = std::make_shared<const DenseLu>(levels_.back().A.to_dense());
}

void ScalarAmg::vcycle(std::size_t l, std::span<double> x, std::span<const double> b) const {
    const ScalarLevel& level = levels_[l];
    if (l + 1 == levels_.size()) {
        auto r = residual(level.A, x, b);
        coarse_lu_->solve_in_place(r);
        axpy(1.0, r, x);
        return;
    }
    level.smoother->smooth(x, b);
    const auto rc = spmv(level.R, residual(level.A, x, b));
    std::vector<double> xc(rc.size(), 0.0);
    vcycle(l + 1, xc, rc);
    spmv_add(level.P, xc, x, 1.0);
    level.smoother->smooth(x, b);
}

void ScalarAmg::solve(std::span<const double> b, std::span<double> x) const {
    require_dims(static_cast<index_t>(b.size()) == size() && static_cast<index_t>(x.size()) == size(),
                 "ScalarAmg: vector length mismatch");
    std::fill(x.begin(), x.end(), 0.0);
    vcycle(0, x, b);
}

NestedPreconditioner::NestedPreconditioner(const SaddleOperator& op, const HierarchyInput& input,
                                           const BlockSmootherConfig& outer, const ScalarAmg::Config& inner) {
    inner_ = std::make_shared<const ScalarAmg>(op.K, input.u_layout, input.u_nullspace, inner);
    smoother_ = std::make_shared<const BlockSmoother>(std::make_shared<const SaddleOperator>(op), outer, inner_);
}

BlockVector NestedPreconditioner::apply(const BlockVector& b) const {
    BlockVector x(smoother_->op().n_u(), smoother_->op().n_lam());
    smoother_->smooth(x, b);
    return x;
}

}  // namespace camg
