#pragma once

#include <cstdint>
#include <vector>

#include "camg/common.hpp"

namespace camg {

enum class Body : std::uint8_t { slave, master };
enum class InterfaceTag : std::uint8_t { none, slave_interface, master_interface };

/// Grouping of displacement DOFs into nodes. Fine levels carry two DOFs per
/// node; coarse nodes carry as many DOFs as near-kernel columns survived.
struct NodeLayout {
    std::vector<index_t> node_offsets{0};  // num_nodes + 1 entries
    std::vector<Body> body;
    std::vector<InterfaceTag> interface;

    index_t num_nodes() const { return static_cast<index_t>(node_offsets.size()) - 1; }
    index_t num_dofs() const { return node_offsets.back(); }
    index_t dof_begin(index_t node) const { return node_offsets[node]; }
    index_t dof_end(index_t node) const { return node_offsets[node + 1]; }

    std::vector<index_t> dof_to_node() const;

    static NodeLayout uniform(index_t num_nodes, index_t dofs_per_node);
};

}  // namespace camg
