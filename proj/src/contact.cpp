#include "camg/contact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "camg/matrix_market.hpp"

namespace camg {

namespace {

Vec2 rotate(const Vec2& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Plane-strain constitutive matrix in Voigt order (xx, yy, xy).
std::array<double, 9> plane_strain_matrix(double e, double nu) {
    const double f = e / ((1.0 + nu) * (1.0 - 2.0 * nu));
    return {f * (1.0 - nu), f * nu, 0.0, f * nu, f * (1.0 - nu), 0.0, 0.0, 0.0, f * (1.0 - 2.0 * nu) / 2.0};
}

constexpr double kGauss = 0.57735026918962576451;  // 1/sqrt(3)

}  // namespace

void MeshSpec::validate() const {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0)) throw ConfigError(std::string("mesh: ") + what + " must be positive");
    };
    positive(slave_dims.width, "slave width");
    positive(slave_dims.height, "slave height");
    positive(master_dims.width, "master width");
    positive(master_dims.height, "master height");
    positive(youngs_modulus, "Young's modulus");
    if (slave_elems.nx < 1 || slave_elems.ny < 1 || master_elems.nx < 1 || master_elems.ny < 1)
        throw ConfigError("mesh: element counts must be at least 1");
    if (!(poisson_ratio > 0.0 && poisson_ratio < 0.5)) throw ConfigError("mesh: Poisson ratio must lie in (0, 0.5)");
    if (!std::isfinite(gap0) || !std::isfinite(angle)) throw ConfigError("mesh: gap0 and angle must be finite");
    if (slave_elems.nx != master_elems.nx || std::abs(slave_dims.width - master_dims.width) > 1e-12 * master_dims.width)
        throw UnsupportedConfigurationError(
            "mesh: non-matching interface discretizations are not supported (slave and master need equal width and nx)");
    if (far_face == FarFaceSupport::roller && angle != 0.0)
        throw UnsupportedConfigurationError("mesh: roller far-face support requires angle 0");
}

MeshSpec mesh_spec_from_config(const KeyValueConfig& cfg, const std::string& prefix) {
    MeshSpec s;
    s.slave_dims.width = cfg.get_double(prefix + "slave.width", s.slave_dims.width);
    s.slave_dims.height = cfg.get_double(prefix + "slave.height", s.slave_dims.height);
    s.master_dims.width = cfg.get_double(prefix + "master.width", s.master_dims.width);
    s.master_dims.height = cfg.get_double(prefix + "master.height", s.master_dims.height);
    s.slave_elems.nx = cfg.get_int(prefix + "slave.nx", s.slave_elems.nx);
    s.slave_elems.ny = cfg.get_int(prefix + "slave.ny", s.slave_elems.ny);
    s.master_elems.nx = cfg.get_int(prefix + "master.nx", s.master_elems.nx);
    s.master_elems.ny = cfg.get_int(prefix + "master.ny", s.master_elems.ny);
    s.gap0 = cfg.get_double(prefix + "gap0", s.gap0);
    s.angle = cfg.get_double(prefix + "angle", s.angle);
    s.youngs_modulus = cfg.get_double(prefix + "youngs_modulus", s.youngs_modulus);
    s.poisson_ratio = cfg.get_double(prefix + "poisson_ratio", s.poisson_ratio);
    s.lumped_mortar = cfg.get_bool(prefix + "lumped_mortar", s.lumped_mortar);
    const std::string support = cfg.get_string(prefix + "far_face", "clamped");
    if (support == "clamped")
        s.far_face = FarFaceSupport::clamped;
    else if (support == "roller")
        s.far_face = FarFaceSupport::roller;
    else
        throw ConfigError(cfg.where(prefix + "far_face") + ": far_face must be 'clamped' or 'roller'");
    try {
        s.validate();
    } catch (const Error& e) {
        throw ConfigError(cfg.where(prefix + "slave.nx") + ": " + e.what());
    }
    return s;
}

std::vector<bool> ContactProblem::fully_constrained_nodes() const {
    std::vector<bool> out(num_nodes(), false);
    for (index_t n = 0; n < num_nodes(); ++n)
        out[n] = dof_class[2 * n] == DofClass::dirichlet && dof_class[2 * n + 1] == DofClass::dirichlet;
    return out;
}

NodeLayout ContactProblem::layout() const {
    NodeLayout layout = NodeLayout::uniform(num_nodes(), dofs_per_node);
    layout.body = node_body;
    for (index_t n : slave_nodes) layout.interface[n] = InterfaceTag::slave_interface;
    for (index_t n : master_nodes) layout.interface[n] = InterfaceTag::master_interface;
    return layout;
}

int normal_row_component(const Vec2& normal) {
    // Ties (45 degrees) go to the x component.
    return std::abs(normal.x) >= std::abs(normal.y) - 1e-12 ? 0 : 1;
}

ContactProblem build_mesh(const MeshSpec& spec) {
    spec.validate();
    ContactProblem p;
    const index_t nx = spec.slave_elems.nx;
    const double width = spec.slave_dims.width;

    // Slave block: y in [-gap0, H_s - gap0]; master block: y in [-H_m, 0].
    auto add_block = [&](Body body, index_t ny, double height, double y0) {
        const index_t first = p.num_nodes();
        for (index_t r = 0; r <= ny; ++r)
            for (index_t c = 0; c <= nx; ++c) {
                p.node_coords.push_back(
                    rotate({width * static_cast<double>(c) / nx, y0 + height * static_cast<double>(r) / ny}, spec.angle));
                p.node_body.push_back(body);
            }
        for (index_t r = 0; r < ny; ++r)
            for (index_t c = 0; c < nx; ++c) {
                const index_t a = first + r * (nx + 1) + c;
                p.elements.push_back({a, a + 1, a + nx + 2, a + nx + 1});
            }
        return first;
    };
    const index_t slave_first = add_block(Body::slave, spec.slave_elems.ny, spec.slave_dims.height, -spec.gap0);
    const index_t master_first =
        add_block(Body::master, spec.master_elems.ny, spec.master_dims.height, -spec.master_dims.height);

    const Vec2 normal = rotate({0.0, -1.0}, spec.angle);
    const Vec2 tangent{-normal.y, normal.x};
    for (index_t c = 0; c <= nx; ++c) {
        p.slave_nodes.push_back(slave_first + c);
        p.master_nodes.push_back(master_first + spec.master_elems.ny * (nx + 1) + c);
        p.normals.push_back(normal);
        p.tangents.push_back(tangent);
    }

    p.dof_class.resize(p.num_dofs());
    for (index_t n = 0; n < p.num_nodes(); ++n) {
        const DofClass c =
            p.node_body[n] == Body::slave ? DofClass::interior_slave_body : DofClass::interior_master_body;
        p.dof_class[2 * n] = p.dof_class[2 * n + 1] = c;
    }
    for (index_t n : p.slave_nodes) p.dof_class[2 * n] = p.dof_class[2 * n + 1] = DofClass::slave_interface;
    for (index_t n : p.master_nodes) p.dof_class[2 * n] = p.dof_class[2 * n + 1] = DofClass::master_interface;

    // Far faces: top row of the slave block, bottom row of the master block.
    const index_t slave_top = slave_first + spec.slave_elems.ny * (nx + 1);
    for (index_t c = 0; c <= nx; ++c)
        for (index_t node : {slave_top + c, master_first + c}) {
            if (spec.far_face == FarFaceSupport::clamped || c == 0) p.dof_class[2 * node] = DofClass::dirichlet;
            p.dof_class[2 * node + 1] = DofClass::dirichlet;
        }
    for (index_t d = 0; d < p.num_dofs(); ++d)
        if (p.dof_class[d] == DofClass::dirichlet) p.dirichlet_dofs.push_back(d);

    p.mortar = assemble_mortar(p, spec.lumped_mortar, spec.gap0);
    return p;
}

DenseMatrix element_stiffness(const std::array<Vec2, 4>& corners, double youngs_modulus, double poisson_ratio) {
    static constexpr double xi_n[4] = {-1.0, 1.0, 1.0, -1.0};
    static constexpr double eta_n[4] = {-1.0, -1.0, 1.0, 1.0};
    const auto d = plane_strain_matrix(youngs_modulus, poisson_ratio);
    DenseMatrix ke(8, 8);
    for (double xi : {-kGauss, kGauss})
        for (double eta : {-kGauss, kGauss}) {
            double dn_dxi[4], dn_deta[4];
            for (int a = 0; a < 4; ++a) {
                dn_dxi[a] = 0.25 * xi_n[a] * (1.0 + eta * eta_n[a]);
                dn_deta[a] = 0.25 * eta_n[a] * (1.0 + xi * xi_n[a]);
            }
            double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
            for (int a = 0; a < 4; ++a) {
                j11 += dn_dxi[a] * corners[a].x;
                j12 += dn_dxi[a] * corners[a].y;
                j21 += dn_deta[a] * corners[a].x;
                j22 += dn_deta[a] * corners[a].y;
            }
            const double det = j11 * j22 - j12 * j21;
            if (!(det > 0.0)) throw AssemblyError("element_stiffness: degenerate or inverted element (det J <= 0)");
            double b[3][8] = {};
            for (int a = 0; a < 4; ++a) {
                const double dx = (j22 * dn_dxi[a] - j12 * dn_deta[a]) / det;
                const double dy = (-j21 * dn_dxi[a] + j11 * dn_deta[a]) / det;
                b[0][2 * a] = dx;
                b[1][2 * a + 1] = dy;
                b[2][2 * a] = dy;
                b[2][2 * a + 1] = dx;
            }
            for (int i = 0; i < 8; ++i) {
                double db[3];
                for (int r = 0; r < 3; ++r) db[r] = d[3 * r] * b[0][i] + d[3 * r + 1] * b[1][i] + d[3 * r + 2] * b[2][i];
                for (int j = 0; j < 8; ++j) ke(j, i) += det * (b[0][j] * db[0] + b[1][j] * db[1] + b[2][j] * db[2]);
            }
        }
    return ke;
}

namespace {

SparseMatrix assemble_stiffness(const ContactProblem& problem, const MeshSpec& spec, bool eliminate) {
    std::vector<bool> fixed(problem.num_dofs(), false);
    if (eliminate)
        for (index_t d : problem.dirichlet_dofs) fixed[d] = true;
    std::vector<Triplet> triplets;
    triplets.reserve(problem.elements.size() * 64 + problem.dirichlet_dofs.size());
    for (const auto& elem : problem.elements) {
        std::array<Vec2, 4> corners;
        for (int a = 0; a < 4; ++a) corners[a] = problem.node_coords[elem[a]];
        const DenseMatrix ke = element_stiffness(corners, spec.youngs_modulus, spec.poisson_ratio);
        for (int i = 0; i < 8; ++i) {
            const index_t gi = 2 * elem[i / 2] + i % 2;
            if (fixed[gi]) continue;
            for (int j = 0; j < 8; ++j) {
                const index_t gj = 2 * elem[j / 2] + j % 2;
                if (!fixed[gj]) triplets.push_back({gi, gj, ke(i, j)});
            }
        }
    }
    for (index_t d = 0; d < problem.num_dofs(); ++d)
        if (fixed[d]) triplets.push_back({d, d, 1.0});
    return SparseMatrix::from_triplets(problem.num_dofs(), problem.num_dofs(), std::move(triplets));
}

}  // namespace

SparseMatrix assemble_stiffness_unconstrained(const ContactProblem& problem, const MeshSpec& spec) {
    return assemble_stiffness(problem, spec, false);
}

SparseMatrix assemble_elasticity(const ContactProblem& problem, const MeshSpec& spec) {
    return assemble_stiffness(problem, spec, true);
}

MortarMatrices assemble_mortar(const ContactProblem& problem, bool lumped, double gap0) {
    const auto ns = static_cast<index_t>(problem.slave_nodes.size());
    if (problem.master_nodes.size() != problem.slave_nodes.size())
        throw UnsupportedConfigurationError("assemble_mortar: interface meshes do not match");
    // Scalar line mass on the slave side, 2-point Gauss per segment.
    std::vector<Triplet> scalar;
    for (index_t e = 0; e + 1 < ns; ++e) {
        const Vec2 a = problem.node_coords[problem.slave_nodes[e]];
        const Vec2 b = problem.node_coords[problem.slave_nodes[e + 1]];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        double m[2][2] = {};
        for (double g : {-kGauss, kGauss}) {
            const double n0 = 0.5 * (1.0 - g), n1 = 0.5 * (1.0 + g);
            const double w = 0.5 * len;  // weight 1 times Jacobian len/2
            m[0][0] += w * n0 * n0;
            m[0][1] += w * n0 * n1;
            m[1][0] += w * n1 * n0;
            m[1][1] += w * n1 * n1;
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                if (lumped)
                    scalar.push_back({e + i, e + i, m[i][j]});
                else
                    scalar.push_back({e + i, e + j, m[i][j]});
            }
    }
    const SparseMatrix dn = SparseMatrix::from_triplets(ns, ns, std::move(scalar));

    MortarMatrices out;
    std::vector<Triplet> d, mm;
    out.weighted_gaps.assign(ns, 0.0);
    for (index_t j = 0; j < ns; ++j) {
        const auto cols = dn.row_cols(j);
        const auto vals = dn.row_values(j);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            out.weighted_gaps[j] += vals[k] * gap0;
            for (index_t c = 0; c < 2; ++c) {
                d.push_back({2 * cols[k] + c, 2 * j + c, vals[k]});
                // Coincident master trace: M equals D node by node.
                mm.push_back({2 * j + c, 2 * cols[k] + c, vals[k]});
            }
        }
    }
    out.D = SparseMatrix::from_triplets(2 * ns, 2 * ns, std::move(d));
    out.M = SparseMatrix::from_triplets(2 * ns, 2 * ns, std::move(mm));
    return out;
}

SaddleSystem assemble_saddle(const ContactProblem& problem, const SparseMatrix& K, const MortarMatrices& mortar) {
    const index_t nu = problem.num_dofs();
    const index_t nl = problem.num_multipliers();
    const auto ns = static_cast<index_t>(problem.slave_nodes.size());
    require_dims(K.num_rows() == nu && K.num_cols() == nu, "assemble_saddle: K does not match the mesh");
    require_dims(mortar.D.num_rows() == nl && mortar.D.num_cols() == nl && mortar.M.num_rows() == nl &&
                     mortar.M.num_cols() == 2 * static_cast<index_t>(problem.master_nodes.size()) &&
                     static_cast<index_t>(mortar.weighted_gaps.size()) == ns,
                 "assemble_saddle: mortar matrices do not match the interface");
    std::vector<bool> fixed(nu, false);
    for (index_t d : problem.dirichlet_dofs) fixed[d] = true;

    auto slave_dof = [&](index_t local) { return 2 * problem.slave_nodes[local / 2] + local % 2; };
    auto master_dof = [&](index_t local) { return 2 * problem.master_nodes[local / 2] + local % 2; };

    std::vector<Triplet> b1, b2, cz;
    SaddleSystem sys;
    sys.rhs = BlockVector(nu, nl);
    // B1 = [D^T on slave rows; -M^T on master rows].
    for (index_t i = 0; i < mortar.D.num_rows(); ++i) {
        const index_t row = slave_dof(i);
        if (fixed[row]) continue;
        for (std::size_t k = 0; k < mortar.D.row_cols(i).size(); ++k)
            b1.push_back({row, mortar.D.row_cols(i)[k], mortar.D.row_values(i)[k]});
    }
    for (index_t lam = 0; lam < nl; ++lam)
        for (std::size_t k = 0; k < mortar.M.row_cols(lam).size(); ++k) {
            const index_t row = master_dof(mortar.M.row_cols(lam)[k]);
            if (!fixed[row]) b1.push_back({row, lam, -mortar.M.row_values(lam)[k]});
        }
    // Constraint rows: normal row N_j in B2, tangential row t_j in Cz.
    const SparseMatrix dt = transpose(mortar.D);  // multiplier rows x slave DOFs
    for (index_t j = 0; j < ns; ++j) {
        const Vec2 n = problem.normals[j];
        const Vec2 t = problem.tangents[j];
        const int nc = normal_row_component(n);
        const index_t normal_row = 2 * j + nc;
        const index_t tangent_row = 2 * j + (1 - nc);
        // Row 2j of D^T / M holds the scalar weights of slave node j.
        const index_t lam_x = 2 * j;
        for (std::size_t k = 0; k < dt.row_cols(lam_x).size(); ++k) {
            const index_t local = dt.row_cols(lam_x)[k];  // x-component slave DOF
            const double w = dt.row_values(lam_x)[k];
            for (int c = 0; c < 2; ++c) {
                const index_t col = slave_dof(local + c);
                if (!fixed[col]) b2.push_back({normal_row, col, (c == 0 ? n.x : n.y) * w});
            }
        }
        for (std::size_t k = 0; k < mortar.M.row_cols(lam_x).size(); ++k) {
            const index_t local = mortar.M.row_cols(lam_x)[k];
            const double w = mortar.M.row_values(lam_x)[k];
            for (int c = 0; c < 2; ++c) {
                const index_t col = master_dof(local + c);
                if (!fixed[col]) b2.push_back({normal_row, col, -(c == 0 ? n.x : n.y) * w});
            }
        }
        cz.push_back({tangent_row, 2 * j, t.x});
        cz.push_back({tangent_row, 2 * j + 1, t.y});
        sys.rhs.lam[normal_row] = -mortar.weighted_gaps[j];
    }
    sys.op.K = K;
    sys.op.B1 = SparseMatrix::from_triplets(nu, nl, std::move(b1), 0.0);
    sys.op.B2 = SparseMatrix::from_triplets(nl, nu, std::move(b2), 0.0);
    sys.op.Cz = SparseMatrix::from_triplets(nl, nl, std::move(cz), 0.0);
    sys.op.validate();
    return sys;
}

ContactModel build_contact_model(const MeshSpec& spec) {
    ContactModel model;
    model.spec = spec;
    model.problem = build_mesh(spec);
    const SparseMatrix K = assemble_elasticity(model.problem, spec);
    model.system = assemble_saddle(model.problem, K, model.problem.mortar);
    return model;
}

void export_system(const std::filesystem::path& dir, const SaddleSystem& system) {
    std::filesystem::create_directories(dir);
    write_matrix_market(dir / "K.mtx", system.op.K);
    write_matrix_market(dir / "B1.mtx", system.op.B1);
    write_matrix_market(dir / "B2.mtx", system.op.B2);
    write_matrix_market(dir / "Cz.mtx", system.op.Cz);
    write_vector(dir / "rhs_u.vec", system.rhs.u);
    write_vector(dir / "rhs_lam.vec", system.rhs.lam);
}

}  // namespace camg
