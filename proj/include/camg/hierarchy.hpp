#pragma once

// Fully coupled saddle-point multigrid: every level carries the complete
// 2x2 block operator, segregated transfers and a block smoother.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "camg/aggregation.hpp"
#include "camg/smoothers.hpp"
#include "camg/transfer.hpp"

namespace camg {

enum class CoarseSolverKind { merged_lu, block_smoother };

struct HierarchyConfig {
    index_t max_levels = 3;
    index_t max_coarse_size = 500;  // total saddle rows
    CoarseSolverKind coarse_solver = CoarseSolverKind::merged_lu;
    index_t min_agg_size = 6;
    bool smooth_displacement_transfers = false;
    double omega = 4.0 / 3.0;
    double eps_drop = 0.0;
    index_t pre_sweeps = 1;
    index_t post_sweeps = 1;
    BlockSmootherConfig smoother = BlockSmootherConfig::cheap_simplec();

    void validate() const;
};

/// Reads hierarchy.* and smoother.* keys.
HierarchyConfig hierarchy_config_from(const KeyValueConfig& cfg, const HierarchyConfig& fallback = {});

/// Fine-level metadata the algebraic setup cannot recover from the matrices.
struct HierarchyInput {
    NodeLayout u_layout;
    NullSpace u_nullspace;
    NodeLayout lam_layout;
    std::optional<SlaveCoupling> coupling;  // mortar D with owning nodes; B1 pattern when absent
};

HierarchyInput hierarchy_input(const ContactProblem& problem);

struct LevelInfo {
    index_t n_u = 0;
    index_t n_lam = 0;
    index_t nnz_K = 0, nnz_B1 = 0, nnz_B2 = 0, nnz_Cz = 0;
    index_t u_aggregates = 0;    // aggregates formed on this level (0 on the coarsest)
    index_t lam_aggregates = 0;
    index_t u_singletons = 0;
    index_t lam_overlaps = 0;
    index_t dropped_columns = 0;
    double lambda_max = 0.0;
    double omega = 0.0;
};

struct Level {
    std::shared_ptr<const SaddleOperator> op;
    std::optional<BlockTransfer> transfer_down;
    std::shared_ptr<const BlockSmoother> smoother;
    NodeLayout u_layout;
    NodeLayout lam_layout;
    std::optional<Aggregation> u_aggs;
    std::optional<Aggregation> lam_aggs;
    LevelInfo info;
};

class Hierarchy {
public:
    static Hierarchy setup(const SaddleOperator& op, const HierarchyInput& input, const HierarchyConfig& cfg);

    index_t num_levels() const { return static_cast<index_t>(levels_.size()); }
    const Level& level(index_t l) const { return levels_.at(l); }
    const HierarchyConfig& config() const { return cfg_; }

    /// Sum of block nonzeros over all levels divided by the fine-level count.
    double complexity() const;

    /// One V-cycle on `level`, updating x in place.
    void vcycle(index_t level, BlockVector& x, const BlockVector& b) const;
    /// One V-cycle from a zero initial guess.
    BlockVector apply(const BlockVector& b) const;

    std::string report() const;

private:
    void coarse_solve(BlockVector& x, const BlockVector& b) const;

    HierarchyConfig cfg_;
    std::vector<Level> levels_;
    std::shared_ptr<const DenseLu> coarse_lu_;
};

/// Single-field aggregation AMG on K, used as the predictor inside a
/// fine-level block smoother.
class ScalarAmg : public LinearSolver {
public:
    struct Config {
        index_t max_levels = 3;
        index_t max_coarse_size = 500;
        index_t min_agg_size = 6;
        bool smooth_transfers = true;
        double omega = 4.0 / 3.0;
        double eps_drop = 0.0;
        PointSmootherConfig smoother{PointKind::sgs, 1, 1.0};
    };

    ScalarAmg(const SparseMatrix& K, const NodeLayout& layout, const NullSpace& ns, const Config& cfg);

    index_t size() const override { return levels_.front().A.num_rows(); }
    index_t num_levels() const { return static_cast<index_t>(levels_.size()); }
    void solve(std::span<const double> b, std::span<double> x) const override;

private:
    struct ScalarLevel {
        SparseMatrix A;
        SparseMatrix P, R;
        std::shared_ptr<const PointSmoother> smoother;
    };
    void vcycle(std::size_t l, std::span<double> x, std::span<const double> b) const;

    std::vector<ScalarLevel> levels_;
    std::shared_ptr<const DenseLu> coarse_lu_;
};

/// Outer block smoother on the fine level only, with the K-solve of the
/// predictor replaced by one scalar AMG V-cycle.
class NestedPreconditioner {
public:
    NestedPreconditioner(const SaddleOperator& op, const HierarchyInput& input, const BlockSmootherConfig& outer,
                         const ScalarAmg::Config& inner);

    BlockVector apply(const BlockVector& b) const;
    const ScalarAmg& inner() const { return *inner_; }

private:
    std::shared_ptr<const ScalarAmg> inner_;
    std::shared_ptr<const BlockSmoother> smoother_;
};

}  // namespace camg
