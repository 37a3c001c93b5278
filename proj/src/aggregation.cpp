#include "camg/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace camg {

std::vector<index_t> Aggregation::sizes() const {
    std::vector<index_t> out(num_aggs, 0);
    for (index_t a : node_to_agg)
        if (a != kUnassigned) ++out[a];
    return out;
}

NodeGraph build_filtered_graph(const SparseMatrix& K, const NodeLayout& layout, double eps_drop) {
    require_dims(K.num_rows() == K.num_cols(), "build_filtered_graph: K must be square");
    require_dims(K.num_rows() == layout.num_dofs(), "build_filtered_graph: layout does not match K");
    require_dims(static_cast<index_t>(layout.body.size()) == layout.num_nodes() &&
                     static_cast<index_t>(layout.interface.size()) == layout.num_nodes(),
                 "build_filtered_graph: layout tags have the wrong length");
    const index_t n = layout.num_nodes();
    const auto dof_node = layout.dof_to_node();
    const auto diag = extract_diagonal(K);

    NodeGraph g;
    g.adjacency.resize(n);
    g.body_tag = layout.body;
    g.interface_tag = layout.interface;
    g.excluded.assign(n, true);
    for (index_t node = 0; node < n; ++node) {
        auto& adj = g.adjacency[node];
        for (index_t row = layout.dof_begin(node); row < layout.dof_end(node); ++row) {
            const auto cols = K.row_cols(row);
            const auto vals = K.row_values(row);
            for (std::size_t k = 0; k < cols.size(); ++k) {
                const index_t col = cols[k];
                if (col != row) g.excluded[node] = false;
                const index_t other = dof_node[col];
                if (other == node || layout.body[other] != layout.body[node]) continue;
                if (std::abs(vals[k]) <= eps_drop * std::sqrt(std::abs(diag[row] * diag[col]))) continue;
                adj.push_back(other);
            }
        }
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    // Symmetrize; drop edges touching excluded nodes.
    std::vector<std::vector<index_t>> sym(n);
    for (index_t i = 0; i < n; ++i) {
        if (g.excluded[i]) continue;
        for (index_t j : g.adjacency[i]) {
            if (g.excluded[j]) continue;
            sym[i].push_back(j);
            sym[j].push_back(i);
        }
    }
    for (auto& adj : sym) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    g.adjacency = std::move(sym);
    return g;
}

NodeGraph build_filtered_graph(const SparseMatrix& K, index_t dofs_per_node, const std::vector<DofClass>& dof_class,
                               double eps_drop) {
    require_dims(dofs_per_node >= 1 && K.num_rows() % dofs_per_node == 0,
                 "build_filtered_graph: rows not divisible by dofs_per_node");
    require_dims(static_cast<index_t>(dof_class.size()) == K.num_rows(),
                 "build_filtered_graph: dof_class length does not match K");
    const index_t n = K.num_rows() / dofs_per_node;
    NodeLayout layout = NodeLayout::uniform(n, dofs_per_node);
    std::vector<bool> all_dirichlet(n, true);
    for (index_t node = 0; node < n; ++node) {
        bool master = false, slave = false;
        for (index_t d = layout.dof_begin(node); d < layout.dof_end(node); ++d) {
            switch (dof_class[d]) {
                case DofClass::interior_master_body: master = true; break;
                case DofClass::master_interface:
                    master = true;
                    layout.interface[node] = InterfaceTag::master_interface;
                    break;
                case DofClass::interior_slave_body: slave = true; break;
                case DofClass::slave_interface:
                    slave = true;
                    layout.interface[node] = InterfaceTag::slave_interface;
                    break;
                case DofClass::dirichlet: continue;
            }
            all_dirichlet[node] = false;
        }
        if (master && slave) throw AssemblyError("build_filtered_graph: node " + std::to_string(node) + " mixes bodies");
        layout.body[node] = master ? Body::master : Body::slave;
    }
    NodeGraph g = build_filtered_graph(K, layout, eps_drop);
    for (index_t node = 0; node < n; ++node)
        if (all_dirichlet[node] && !g.excluded[node]) {
            g.excluded[node] = true;
            for (index_t j : g.adjacency[node]) {
                auto& adj = g.adjacency[j];
                adj.erase(std::remove(adj.begin(), adj.end(), node), adj.end());
            }
            g.adjacency[node].clear();
        }
    return g;
}

Aggregation aggregate_greedy(const NodeGraph& graph, index_t min_agg_size) {
    if (min_agg_size < 1) throw ConfigError("aggregate_greedy: min_agg_size must be at least 1");
    const index_t n = graph.num_nodes();
    std::vector<index_t> agg(n, kUnassigned);
    std::vector<index_t> roots;

    // Phase 1: roots whose whole neighborhood is free.
    for (index_t i = 0; i < n; ++i) {
        if (graph.excluded[i] || agg[i] != kUnassigned) continue;
        const auto& adj = graph.adjacency[i];
        if (std::any_of(adj.begin(), adj.end(), [&](index_t j) { return agg[j] != kUnassigned; })) continue;
        const auto id = static_cast<index_t>(roots.size());
        roots.push_back(i);
        agg[i] = id;
        for (index_t j : adj) agg[j] = id;
    }

    // Phase 2: leftovers join the neighboring aggregate with most adjacent members.
    for (index_t i = 0; i < n; ++i) {
        if (graph.excluded[i] || agg[i] != kUnassigned) continue;
        std::map<index_t, index_t> counts;
        for (index_t j : graph.adjacency[i])
            if (agg[j] != kUnassigned) ++counts[agg[j]];
        index_t best = kUnassigned, best_count = 0;
        for (const auto& [a, c] : counts)
            if (c > best_count) best = a, best_count = c;
        if (best == kUnassigned) {
            // Unreachable for a symmetric graph, kept as a safe fallback.
            best = static_cast<index_t>(roots.size());
            roots.push_back(i);
        }
        agg[i] = best;
    }

    // Phase 3: merge undersized aggregates into their best-connected neighbor.
    std::vector<index_t> label(roots.size());
    for (std::size_t a = 0; a < label.size(); ++a) label[a] = static_cast<index_t>(a);
    auto find = [&](index_t a) {
        while (label[a] != a) a = label[a];
        return a;
    };
    std::vector<std::vector<index_t>> members(roots.size());
    for (index_t i = 0; i < n; ++i)
        if (agg[i] != kUnassigned) members[agg[i]].push_back(i);
    for (bool merged = true; merged;) {
        merged = false;
        for (index_t a = 0; a < static_cast<index_t>(members.size()); ++a) {
            if (label[a] != a || members[a].empty()) continue;
            if (static_cast<index_t>(members[a].size()) >= min_agg_size) continue;
            std::map<index_t, index_t> links;
            for (index_t i : members[a])
                for (index_t j : graph.adjacency[i]) {
                    const index_t b = find(agg[j]);
                    if (b != a) ++links[b];
                }
            index_t best = kUnassigned, best_links = 0;
            for (const auto& [b, c] : links)
                if (c > best_links) best = b, best_links = c;
            if (best == kUnassigned) continue;  // isolated component
            for (index_t i : members[a]) agg[i] = best;
            members[best].insert(members[best].end(), members[a].begin(), members[a].end());
            std::sort(members[best].begin(), members[best].end());
            members[a].clear();
            label[a] = best;
            merged = true;
        }
    }

    // Compact ids in ascending order of surviving aggregates.
    Aggregation out;
    std::vector<index_t> new_id(roots.size(), kUnassigned);
    for (std::size_t a = 0; a < roots.size(); ++a) {
        if (members[a].empty()) continue;
        new_id[a] = out.num_aggs++;
        out.agg_root.push_back(roots[a]);
        out.agg_body.push_back(graph.body_tag[roots[a]]);
        if (members[a].size() == 1) ++out.report.singletons;
    }
    out.node_to_agg.assign(n, kUnassigned);
    for (index_t i = 0; i < n; ++i) {
        if (agg[i] != kUnassigned)
            out.node_to_agg[i] = new_id[agg[i]];
        else
            ++out.report.excluded_nodes;
    }
    return out;
}

LagrangeMap LagrangeMap::uniform(std::vector<index_t> row_node, index_t num_lm_dofs, index_t dofs_per_node) {
    require_dims(dofs_per_node >= 1 && num_lm_dofs % dofs_per_node == 0,
                 "LagrangeMap::uniform: multiplier count not divisible by dofs_per_node");
    LagrangeMap map;
    map.row_node = std::move(row_node);
    map.num_lm_nodes = num_lm_dofs / dofs_per_node;
    map.lm_node_of_lm_dof.resize(num_lm_dofs);
    for (index_t j = 0; j < num_lm_dofs; ++j) map.lm_node_of_lm_dof[j] = j / dofs_per_node;
    return map;
}

Aggregation aggregate_lagrange(const Aggregation& disp_aggs, const SparseMatrix& D, const LagrangeMap& lmap) {
    require_dims(static_cast<index_t>(lmap.row_node.size()) == D.num_rows(),
                 "aggregate_lagrange: row map does not match the rows of D");
    require_dims(static_cast<index_t>(lmap.lm_node_of_lm_dof.size()) == D.num_cols(),
                 "aggregate_lagrange: multiplier map does not match the columns of D");
    Aggregation out;
    out.node_to_agg.assign(lmap.num_lm_nodes, kUnassigned);
    std::vector<index_t> disp_to_lm(disp_aggs.num_aggs, kUnassigned);
    std::vector<index_t> source(lmap.num_lm_nodes, kUnassigned);
    std::vector<bool> overlapping(lmap.num_lm_nodes, false);

    for (index_t i = 0; i < D.num_rows(); ++i) {
        const index_t node = lmap.row_node[i];
        require_dims(node >= 0 && node < disp_aggs.num_nodes(), "aggregate_lagrange: row node out of range");
        const index_t k = disp_aggs.node_to_agg[node];
        if (k == kUnassigned)
            throw SetupError("aggregate_lagrange: slave node " + std::to_string(node) + " is not aggregated");
        const auto cols = D.row_cols(i);
        const auto vals = D.row_values(i);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (vals[c] == 0.0) continue;
            const index_t pn = lmap.lm_node_of_lm_dof[cols[c]];
            if (out.node_to_agg[pn] != kUnassigned) {
                if (source[pn] != k) overlapping[pn] = true;
                continue;
            }
            if (disp_to_lm[k] == kUnassigned) {
                disp_to_lm[k] = out.num_aggs++;
                out.agg_root.push_back(pn);
                out.agg_body.push_back(Body::slave);
            }
            out.node_to_agg[pn] = disp_to_lm[k];
            source[pn] = k;
        }
    }
    // Pseudo-nodes without slave-side coupling become singletons.
    for (index_t pn = 0; pn < lmap.num_lm_nodes; ++pn) {
        if (out.node_to_agg[pn] != kUnassigned) continue;
        out.node_to_agg[pn] = out.num_aggs++;
        out.agg_root.push_back(pn);
        out.agg_body.push_back(Body::slave);
        ++out.report.unreferenced_nodes;
    }
    out.report.overlapping_nodes = std::count(overlapping.begin(), overlapping.end(), true);
    for (index_t s : out.sizes())
        if (s == 1) ++out.report.singletons;
    return out;
}

SlaveCoupling slave_coupling(const SparseMatrix& B1, const NodeLayout& layout) {
    require_dims(B1.num_rows() == layout.num_dofs(), "slave_coupling: layout does not match B1");
    const auto dof_node = layout.dof_to_node();
    std::vector<Triplet> t;
    SlaveCoupling out;
    index_t row = 0;
    for (index_t i = 0; i < B1.num_rows(); ++i) {
        const index_t node = dof_node[i];
        if (layout.body[node] != Body::slave) continue;
        const auto cols = B1.row_cols(i);
        const auto vals = B1.row_values(i);
        bool any = false;
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (vals[k] != 0.0) {
                t.push_back({row, cols[k], vals[k]});
                any = true;
            }
        if (!any) continue;
        out.row_node.push_back(node);
        ++row;
    }
    out.D = SparseMatrix::from_triplets(row, B1.num_cols(), std::move(t));
    return out;
}

void write_aggregation(std::ostream& out, const Aggregation& aggs, const std::vector<Body>& node_body) {
    require_dims(static_cast<index_t>(node_body.size()) == aggs.num_nodes(),
                 "write_aggregation: body tags do not match the node count");
    for (index_t i = 0; i < aggs.num_nodes(); ++i)
        out << i << ' ' << aggs.node_to_agg[i] << ' ' << (node_body[i] == Body::slave ? "slave" : "master") << '\n';
}

}  // namespace camg
