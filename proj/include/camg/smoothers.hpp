#pragma once

// Point relaxation and block (predictor-corrector) smoothers for the saddle
// operator [[K, B1], [B2, -Cz]].

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "camg/config.hpp"
#include "camg/dense.hpp"
#include "camg/saddle.hpp"

namespace camg {

/// Approximate inverse applied from a zero initial guess: x = M^-1 b.
/// Implementations are fixed linear operators.
class LinearSolver {
public:
    virtual ~LinearSolver() = default;
    virtual index_t size() const = 0;
    virtual void solve(std::span<const double> b, std::span<double> x) const = 0;
};

enum class PointKind { jacobi, sgs, ilu0, direct };

struct PointSmootherConfig {
    PointKind kind = PointKind::sgs;
    index_t sweeps = 1;
    double damping = 1.0;

    void validate() const;
};

/// Incomplete LU without fill on the pattern of A (natural order, no pivoting).
/// L has a unit diagonal; both factors share A's pattern.
class Ilu0 {
public:
    Ilu0() = default;
    explicit Ilu0(const SparseMatrix& a);

    /// Combined factors: strict lower part is L, upper part including the diagonal is U.
    const SparseMatrix& factors() const { return lu_; }
    void solve_in_place(std::span<double> x) const;

private:
    SparseMatrix lu_;
    std::vector<index_t> diag_pos_;
};

class PointSmoother : public LinearSolver {
public:
    PointSmoother(SparseMatrix a, PointSmootherConfig cfg);

    index_t size() const override { return a_.num_rows(); }
    const PointSmootherConfig& config() const { return cfg_; }

    /// Applies cfg.sweeps sweeps to x in place.
    void smooth(std::span<double> x, std::span<const double> b) const;
    void solve(std::span<const double> b, std::span<double> x) const override;

private:
    void sgs_sweep(std::span<double> x, std::span<const double> b) const;

    SparseMatrix a_;
    PointSmootherConfig cfg_;
    std::vector<double> inv_diag_;
    std::optional<Ilu0> ilu_;
    std::optional<DenseLu> lu_;
};

/// Convenience: sweeps of cfg applied to x, returning the new iterate.
std::vector<double> point_smooth(const PointSmootherConfig& cfg, const SparseMatrix& a, std::span<const double> x,
                                 std::span<const double> b);

enum class BlockKind { uzawa, braess_sarazin, simple, simplec };
enum class AHatMode { plain_diag, abs_rowsum, exact };

struct BlockSmootherConfig {
    BlockKind kind = BlockKind::simplec;
    double alpha = 0.7;
    index_t outer_sweeps = 1;
    PointSmootherConfig predictor{PointKind::sgs, 1, 0.7};
    PointSmootherConfig corrector{PointKind::ilu0, 1, 1.0};
    AHatMode a_hat_mode = AHatMode::abs_rowsum;

    /// Braess-Sarazin always uses the plain diagonal, SIMPLEC the absolute row sums.
    AHatMode effective_a_hat_mode() const;
    void validate() const;

    static BlockSmootherConfig cheap_uzawa(double alpha = 0.7, index_t sweeps = 3);
    static BlockSmootherConfig cheap_braess_sarazin(double alpha = 1.9, index_t sweeps = 3);
    static BlockSmootherConfig cheap_simplec(double alpha = 0.7, index_t sweeps = 3);
    static BlockSmootherConfig cheap_simple(double alpha = 0.8, index_t sweeps = 3);
    /// Exact inner solves (dense LU) for small systems.
    static BlockSmootherConfig exact(BlockKind kind, double alpha, AHatMode mode);
};

std::string to_string(BlockKind kind);
std::string to_string(PointKind kind);
std::string to_string(AHatMode mode);
std::string describe(const BlockSmootherConfig& cfg);

/// Reads <prefix>kind, alpha, sweeps, a_hat, predictor.kind/sweeps/damping, corrector.*.
BlockSmootherConfig block_smoother_from_config(const KeyValueConfig& cfg, const std::string& prefix,
                                               const BlockSmootherConfig& fallback);

/// Explicit Schur approximation S = scale * (Cz + B2 Ahat^-1 B1).
struct SchurOperator {
    SparseMatrix S_tilde;
    std::vector<double> a_hat_inv_diag;   // empty when Ahat is exact
    std::shared_ptr<const DenseLu> a_hat_lu;  // set when Ahat = K

    /// y = Ahat^-1 x
    std::vector<double> apply_a_hat_inv(std::span<const double> x) const;
};

SchurOperator build_schur(const SaddleOperator& op, AHatMode mode, double alpha, bool scale_with_alpha);
/// Same with an explicit diagonal Ahat^-1 and a scale factor.
SchurOperator build_schur_from_diagonal(const SaddleOperator& op, std::vector<double> a_hat_inv_diag, double scale);

class BlockSmoother {
public:
    /// predictor overrides the point smoother on K (nested preconditioning).
    BlockSmoother(std::shared_ptr<const SaddleOperator> op, BlockSmootherConfig cfg,
                  std::shared_ptr<const LinearSolver> predictor = nullptr);

    const BlockSmootherConfig& config() const { return cfg_; }
    const SchurOperator& schur() const { return schur_; }
    const SaddleOperator& op() const { return *op_; }

    /// cfg.outer_sweeps sweeps in place.
    void smooth(BlockVector& x, const BlockVector& b) const;
    void sweep(BlockVector& x, const BlockVector& b) const;

private:
    void uzawa(BlockVector& x, const BlockVector& b) const;
    void braess_sarazin(BlockVector& x, const BlockVector& b) const;
    void simple(BlockVector& x, const BlockVector& b) const;

    std::shared_ptr<const SaddleOperator> op_;
    BlockSmootherConfig cfg_;
    SchurOperator schur_;
    std::shared_ptr<const LinearSolver> predictor_;
    std::shared_ptr<const LinearSolver> corrector_;
};

/// Dense splitting matrix M of one sweep with exact inner solves
/// (x+ = x + M^-1 (b - A x)) and E = A - M. Test-scale only.
DenseMatrix smoother_splitting(const SaddleOperator& op, const BlockSmootherConfig& cfg);
DenseMatrix error_matrix(const SaddleOperator& op, const BlockSmootherConfig& cfg);

}  // namespace camg
