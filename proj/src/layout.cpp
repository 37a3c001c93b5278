#include "camg/layout.hpp"

namespace camg {

std::vector<index_t> NodeLayout::dof_to_node() const {
    std::vector<index_t> map(num_dofs());
    for (index_t n = 0; n < num_nodes(); ++n)
        for (index_t d = dof_begin(n); d < dof_end(n); ++d) map[d] = n;
    return map;
}

NodeLayout NodeLayout::uniform(index_t num_nodes, index_t dofs_per_node) {
    NodeLayout layout;
    layout.node_offsets.resize(num_nodes + 1);
    for (index_t n = 0; n <= num_nodes; ++n) layout.node_offsets[n] = n * dofs_per_node;
    layout.body.assign(num_nodes, Body::slave);
    layout.interface.assign(num_nodes, InterfaceTag::none);
    return layout;
}

}  // namespace camg
