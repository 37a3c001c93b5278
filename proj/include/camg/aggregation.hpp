#pragma once

// Node aggregation for the displacement field (never crossing the contact
// interface) and for the Lagrange multipliers (driven by the slave-side
// coupling pattern).

#include <iosfwd>
#include <vector>

#include "camg/contact.hpp"
#include "camg/layout.hpp"
#include "camg/sparse.hpp"

namespace camg {

inline constexpr index_t kUnassigned = -1;

struct NodeGraph {
    std::vector<std::vector<index_t>> adjacency;  // sorted, symmetric, no self loops
    std::vector<Body> body_tag;
    std::vector<InterfaceTag> interface_tag;
    std::vector<bool> excluded;  // nodes left out of aggregation (fully constrained)

    index_t num_nodes() const { return static_cast<index_t>(adjacency.size()); }
};

/// Node graph of K with cross-body couplings dropped on the fly. Nodes i != j
/// are adjacent when some DOF pair has |K_ab| > eps_drop * sqrt(|K_aa K_bb|)
/// and both nodes belong to the same body. Nodes whose rows carry no
/// off-diagonal entry at all (eliminated Dirichlet nodes) are excluded.
NodeGraph build_filtered_graph(const SparseMatrix& K, const NodeLayout& layout, double eps_drop = 0.0);

/// Fine-level convenience: nodes are consecutive groups of dofs_per_node DOFs,
/// body and interface tags come from dof_class, fully Dirichlet nodes are excluded.
NodeGraph build_filtered_graph(const SparseMatrix& K, index_t dofs_per_node, const std::vector<DofClass>& dof_class,
                               double eps_drop = 0.0);

struct AggregationReport {
    index_t singletons = 0;        // aggregates of one node that could not be merged
    index_t excluded_nodes = 0;    // nodes left unassigned on purpose
    index_t overlapping_nodes = 0;  // multiplier nodes referenced from several displacement aggregates
    index_t unreferenced_nodes = 0;  // multiplier nodes without any slave-side coupling
};

struct Aggregation {
    std::vector<index_t> node_to_agg;  // kUnassigned for excluded nodes
    index_t num_aggs = 0;
    std::vector<index_t> agg_root;
    std::vector<Body> agg_body;
    AggregationReport report;

    index_t num_nodes() const { return static_cast<index_t>(node_to_agg.size()); }
    std::vector<index_t> sizes() const;
};

/// Three-phase greedy aggregation in ascending node order.
Aggregation aggregate_greedy(const NodeGraph& graph, index_t min_agg_size);

/// Multiplier pseudo-node bookkeeping for aggregate_lagrange.
struct LagrangeMap {
    std::vector<index_t> row_node;           // displacement node owning each row of D
    std::vector<index_t> lm_node_of_lm_dof;  // pseudo-node of each multiplier DOF
    index_t num_lm_nodes = 0;

    /// Pseudo-node j owns multiplier DOFs [dofs_per_node*j, dofs_per_node*(j+1)).
    static LagrangeMap uniform(std::vector<index_t> row_node, index_t num_lm_dofs, index_t dofs_per_node);
};

/// Multiplier aggregation. Rows of D are visited in order; every multiplier
/// DOF coupled to a row joins the multiplier aggregate paired with the row's
/// displacement aggregate, on first touch only. Multiplier aggregates are
/// created lazily, so none is empty.
Aggregation aggregate_lagrange(const Aggregation& disp_aggs, const SparseMatrix& D, const LagrangeMap& lmap);

/// Slave-side coupling rows of B1: rows whose DOF belongs to a slave-body node
/// and carries at least one nonzero. Returns the submatrix and its owning nodes.
struct SlaveCoupling {
    SparseMatrix D;
    std::vector<index_t> row_node;
};
SlaveCoupling slave_coupling(const SparseMatrix& B1, const NodeLayout& layout);

/// One line per node: "node_id aggregate_id body_tag".
void write_aggregation(std::ostream& out, const Aggregation& aggs, const std::vector<Body>& node_body);

}  // namespace camg
