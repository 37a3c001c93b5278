#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "camg/aggregation.hpp"
#include "camg/contact.hpp"
#include "camg/hierarchy.hpp"

using namespace camg;

namespace {

// Graph from an explicit edge list, one DOF per node, all on one body.
NodeGraph edge_graph(index_t n, const std::vector<std::pair<index_t, index_t>>& edges) {
    std::vector<Triplet> t;
    for (index_t i = 0; i < n; ++i) t.push_back({i, i, 4.0});
    for (auto [a, b] : edges) {
        t.push_back({a, b, -1.0});
        t.push_back({b, a, -1.0});
    }
    return build_filtered_graph(SparseMatrix::from_triplets(n, n, std::move(t)), NodeLayout::uniform(n, 1));
}

SparseMatrix tridiagonal(index_t n) {
    std::vector<Triplet> t;
    for (index_t i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0});
        if (i > 0) t.push_back({i, i - 1, -1.0});
        if (i + 1 < n) t.push_back({i, i + 1, -1.0});
    }
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace

TEST_CASE("filtered graph") {
    SUBCASE("tridiagonal matrix gives a path") {
        const NodeGraph g = build_filtered_graph(tridiagonal(5), NodeLayout::uniform(5, 1));
        CHECK(g.adjacency[0] == std::vector<index_t>{1});
        CHECK(g.adjacency[2] == std::vector<index_t>{1, 3});
        CHECK(g.adjacency[4] == std::vector<index_t>{3});
        for (bool e : g.excluded) CHECK_FALSE(e);
    }
    SUBCASE("cross-body entries are dropped") {
        NodeLayout layout = NodeLayout::uniform(2, 1);
        layout.body[1] = Body::master;
        const NodeGraph g = build_filtered_graph(tridiagonal(2), layout);
        CHECK(g.adjacency[0].empty());
        CHECK(g.adjacency[1].empty());
    }
    SUBCASE("block-diagonal K of two bodies gives two components") {
        std::vector<Triplet> t;
        for (index_t b = 0; b < 2; ++b)
            for (index_t i = 0; i < 3; ++i) {
                t.push_back({3 * b + i, 3 * b + i, 2.0});
                if (i > 0) t.push_back({3 * b + i, 3 * b + i - 1, -1.0}), t.push_back({3 * b + i - 1, 3 * b + i, -1.0});
            }
        const NodeGraph g = build_filtered_graph(SparseMatrix::from_triplets(6, 6, t), NodeLayout::uniform(6, 1));
        for (index_t i = 0; i < 3; ++i)
            for (index_t j : g.adjacency[i]) CHECK(j < 3);
        const Aggregation a = aggregate_greedy(g, 1);
        CHECK(a.num_aggs == 2);
    }
    SUBCASE("drop tolerance and diagonal-only rows") {
        std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}, {0, 1, 0.01}, {1, 0, 0.01}};
        const SparseMatrix k = SparseMatrix::from_triplets(3, 3, t);
        CHECK(build_filtered_graph(k, NodeLayout::uniform(3, 1), 0.0).adjacency[0].size() == 1);
        CHECK(build_filtered_graph(k, NodeLayout::uniform(3, 1), 0.1).adjacency[0].empty());
        CHECK(build_filtered_graph(k, NodeLayout::uniform(3, 1), 0.0).excluded[2]);
    }
}

TEST_CASE("greedy aggregation") {
    SUBCASE("3x3 grid is deterministic and a partition") {
        std::vector<std::pair<index_t, index_t>> e;
        for (index_t r = 0; r < 3; ++r)
            for (index_t c = 0; c < 3; ++c) {
                if (c < 2) e.push_back({3 * r + c, 3 * r + c + 1});
                if (r < 2) e.push_back({3 * r + c, 3 * r + c + 3});
            }
        const NodeGraph g = edge_graph(9, e);
        const Aggregation a = aggregate_greedy(g, 1), b = aggregate_greedy(g, 1);
        CHECK(a.node_to_agg == b.node_to_agg);
        for (index_t x : a.node_to_agg) CHECK(x != kUnassigned);
        for (index_t s : a.sizes()) CHECK(s > 0);
        // Root 0 takes {0,1,3}; root 2 takes {2,5}; root 6 takes {6,7}; 8 can take no root.
        CHECK(a.node_to_agg[0] == a.node_to_agg[1]);
        CHECK(a.node_to_agg[0] == a.node_to_agg[3]);
    }
    SUBCASE("path of three with min size three is one aggregate") {
        const Aggregation a = aggregate_greedy(edge_graph(3, {{0, 1}, {1, 2}}), 3);
        CHECK(a.num_aggs == 1);
        CHECK(a.sizes() == std::vector<index_t>{3});
    }
    SUBCASE("two disconnected triangles") {
        const Aggregation a = aggregate_greedy(edge_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}), 6);
        CHECK(a.num_aggs == 2);
        CHECK(a.node_to_agg[0] != a.node_to_agg[3]);
    }
    SUBCASE("diagonal-only node is excluded, a node cut off by the body filter is a singleton") {
        const Aggregation a = aggregate_greedy(edge_graph(3, {{0, 1}}), 3);
        CHECK(a.num_aggs == 1);
        CHECK(a.node_to_agg[2] == kUnassigned);
        CHECK(a.report.excluded_nodes == 1);

        NodeLayout layout = NodeLayout::uniform(3, 1);
        layout.body[2] = Body::master;
        const Aggregation b = aggregate_greedy(build_filtered_graph(tridiagonal(3), layout), 3);
        CHECK(b.num_aggs == 2);
        CHECK(b.report.singletons == 1);
        CHECK(b.agg_body[b.node_to_agg[2]] == Body::master);
    }
    CHECK_THROWS_AS(aggregate_greedy(edge_graph(2, {{0, 1}}), 0), ConfigError);
}

TEST_CASE("multiplier aggregation") {
    Aggregation disp;
    disp.node_to_agg = {0, 0, 1, 1};
    disp.num_aggs = 2;

    SUBCASE("diagonal D mirrors the displacement aggregates") {
        std::vector<Triplet> t;
        for (index_t i = 0; i < 4; ++i) t.push_back({i, i, 0.5});
        const auto lm = aggregate_lagrange(disp, SparseMatrix::from_triplets(4, 4, t),
                                           LagrangeMap::uniform({0, 1, 2, 3}, 4, 1));
        CHECK(lm.node_to_agg == std::vector<index_t>{0, 0, 1, 1});
        CHECK(lm.report.overlapping_nodes == 0);
    }
    SUBCASE("tridiagonal D follows the first touching row") {
        // Row 1 (aggregate 0) touches multiplier 2 first; row 2 creates the second aggregate via multiplier 3.
        const auto lm = aggregate_lagrange(disp, tridiagonal(4), LagrangeMap::uniform({0, 1, 2, 3}, 4, 1));
        CHECK(lm.node_to_agg == std::vector<index_t>{0, 0, 0, 1});
        CHECK(lm.num_aggs == 2);
        CHECK(lm.report.overlapping_nodes == 2);
    }
    SUBCASE("unaggregated slave node is an error") {
        Aggregation broken = disp;
        broken.node_to_agg[3] = kUnassigned;
        CHECK_THROWS_AS(aggregate_lagrange(broken, tridiagonal(4), LagrangeMap::uniform({0, 1, 2, 3}, 4, 1)),
                        SetupError);
    }
}

TEST_CASE("two-block mesh: partition, body separation, multiplier alignment") {
    MeshSpec s;
    s.slave_elems = s.master_elems = {12, 12};
    s.lumped_mortar = true;
    const ContactModel m = build_contact_model(s);
    const NodeGraph g = build_filtered_graph(m.system.op.K, 2, m.problem.dof_class);
    const Aggregation a = aggregate_greedy(g, 6);

    for (index_t n = 0; n < a.num_nodes(); ++n) {
        if (g.excluded[n]) {
            CHECK(a.node_to_agg[n] == kUnassigned);
            continue;
        }
        REQUIRE(a.node_to_agg[n] != kUnassigned);
        CHECK(a.agg_body[a.node_to_agg[n]] == m.problem.node_body[n]);
    }
    for (index_t size : a.sizes()) CHECK(size > 0);

    const HierarchyInput in = hierarchy_input(m.problem);
    const auto lm = aggregate_lagrange(a, in.coupling->D,
                                       LagrangeMap::uniform(in.coupling->row_node, m.system.op.n_lam(), 2));
    const auto& sn = m.problem.slave_nodes;
    for (std::size_t i = 0; i < sn.size(); ++i)
        for (std::size_t j = 0; j < sn.size(); ++j)
            CHECK((lm.node_to_agg[i] == lm.node_to_agg[j]) == (a.node_to_agg[sn[i]] == a.node_to_agg[sn[j]]));
    std::set<index_t> interface_aggs;
    for (index_t n : sn) interface_aggs.insert(a.node_to_agg[n]);
    CHECK(lm.num_aggs <= static_cast<index_t>(interface_aggs.size()));

    std::ostringstream out;
    write_aggregation(out, a, m.problem.node_body);
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == a.num_nodes());
}
