#pragma once

// Linear, fully active, frictionless two-body contact on structured 2-D
// quadrilateral meshes. The slave block sits on top of the master block; both
// far faces are supported and the whole configuration may be rotated.

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "camg/config.hpp"
#include "camg/layout.hpp"
#include "camg/saddle.hpp"

namespace camg {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Extent {
    double width = 1.0;
    double height = 1.0;
};

struct ElementCounts {
    index_t nx = 1;
    index_t ny = 1;
};

/// Far-face support. `roller` fixes only the normal component plus one
/// tangential pin per body; it is used for patch tests and requires angle 0.
enum class FarFaceSupport { clamped, roller };

struct MeshSpec {
    Extent slave_dims{1.0, 1.0};
    Extent master_dims{1.0, 1.0};
    ElementCounts slave_elems{10, 10};
    ElementCounts master_elems{10, 10};
    double gap0 = 0.001;  // initial normal penetration, positive = overlap
    double angle = 0.0;   // radians
    double youngs_modulus = 1.0;  // nondimensional; keeps force and gap rows on comparable scales
    double poisson_ratio = 0.3;
    bool lumped_mortar = false;
    FarFaceSupport far_face = FarFaceSupport::clamped;

    void validate() const;
};

/// Reads `<prefix>slave.width`, `<prefix>slave.nx`, ... from a key=value config.
MeshSpec mesh_spec_from_config(const KeyValueConfig& cfg, const std::string& prefix = "mesh.");

enum class DofClass : std::uint8_t {
    interior_slave_body,
    interior_master_body,
    slave_interface,
    master_interface,
    dirichlet
};

struct MortarMatrices {
    SparseMatrix D;  // slave interface DOFs x multiplier DOFs
    SparseMatrix M;  // multiplier DOFs x master interface DOFs
    std::vector<double> weighted_gaps;  // per slave node
};

struct ContactProblem {
    static constexpr index_t dofs_per_node = 2;

    std::vector<Vec2> node_coords;
    std::vector<Body> node_body;
    std::vector<DofClass> dof_class;
    std::vector<std::array<index_t, 4>> elements;  // counter-clockwise node ids
    std::vector<index_t> slave_nodes;   // slave interface nodes, ordered along the interface
    std::vector<index_t> master_nodes;  // coincident master partner of each slave node
    std::vector<Vec2> normals;          // outward slave normal per slave node
    std::vector<Vec2> tangents;         // per slave node
    std::vector<index_t> dirichlet_dofs;  // sorted
    MortarMatrices mortar;

    index_t num_nodes() const { return static_cast<index_t>(node_coords.size()); }
    index_t num_dofs() const { return dofs_per_node * num_nodes(); }
    index_t num_multipliers() const { return dofs_per_node * static_cast<index_t>(slave_nodes.size()); }

    /// Nodes whose every DOF is Dirichlet.
    std::vector<bool> fully_constrained_nodes() const;
    NodeLayout layout() const;
};

/// Component of multiplier DOF pair (2j, 2j+1) that carries the normal
/// constraint row of slave node j: the dominant component of the normal.
int normal_row_component(const Vec2& normal);

ContactProblem build_mesh(const MeshSpec& spec);

/// Plane-strain bilinear quadrilateral, 2x2 Gauss. Throws AssemblyError on a
/// degenerate or inverted element.
DenseMatrix element_stiffness(const std::array<Vec2, 4>& corners, double youngs_modulus, double poisson_ratio);

/// Stiffness before Dirichlet elimination.
SparseMatrix assemble_stiffness_unconstrained(const ContactProblem& problem, const MeshSpec& spec);
/// Stiffness with Dirichlet rows/columns eliminated symmetrically (unit diagonal).
SparseMatrix assemble_elasticity(const ContactProblem& problem, const MeshSpec& spec);

/// Consistent line mass matrices on the matching interface.
MortarMatrices assemble_mortar(const ContactProblem& problem, bool lumped, double gap0);

SaddleSystem assemble_saddle(const ContactProblem& problem, const SparseMatrix& K, const MortarMatrices& mortar);

struct ContactModel {
    MeshSpec spec;
    ContactProblem problem;
    SaddleSystem system;
};

/// build_mesh + assemble_elasticity + assemble_mortar + assemble_saddle.
ContactModel build_contact_model(const MeshSpec& spec);

/// Writes K.mtx, B1.mtx, B2.mtx, Cz.mtx, rhs_u.vec and rhs_lam.vec into dir.
void export_system(const std::filesystem::path& dir, const SaddleSystem& system);

}  // namespace camg
