#pragma once

// Drivers shared by the command-line tool and the acceptance suite.

#include <filesystem>
#include <string>
#include <vector>

#include "camg/contact.hpp"
#include "camg/hierarchy.hpp"
#include "camg/krylov.hpp"

namespace camg {

enum class PreconditionerKind { fully_coupled, nested, none };

struct ExperimentConfig {
    MeshSpec mesh;
    HierarchyConfig hierarchy;
    GmresConfig gmres;
    PreconditionerKind preconditioner = PreconditionerKind::fully_coupled;
    ScalarAmg::Config nested_inner;
    std::vector<double> angles;      // rotation sweep
    std::vector<index_t> sizes;      // refinement sweep, elements per block edge
};

/// Parses every key of the flat config and rejects unknown ones.
ExperimentConfig experiment_config_from(const KeyValueConfig& cfg);

struct SolveOutcome {
    SolveReport report;
    BlockVector x;
    double complexity = 1.0;
    index_t levels = 1;
    std::string setup_report;
};

/// GMRES on the assembled system, preconditioned as configured.
SolveOutcome solve_system(const SaddleSystem& system, const HierarchyInput& input, const ExperimentConfig& cfg);
SolveOutcome solve_contact(const ContactModel& model, const ExperimentConfig& cfg);

struct RotationRow {
    double angle = 0.0;
    index_t iterations = 0;
    bool converged = false;
    double complexity = 1.0;
};

std::vector<RotationRow> rotation_sweep(const ExperimentConfig& cfg);

struct RefineRow {
    index_t elements = 0;
    index_t n_u = 0;
    index_t n_lam = 0;
    index_t levels = 0;
    index_t iterations = 0;
    bool converged = false;
    double complexity = 1.0;
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
};

std::vector<RefineRow> refine_sweep(const ExperimentConfig& cfg);

/// CSV writers; numbers use 17 significant digits.
std::string format_number(double v);
void write_residual_csv(const std::filesystem::path& path, const SolveReport& report);
void write_rotation_csv(const std::filesystem::path& path, const std::vector<RotationRow>& rows);
/// Deterministic columns only; timings go to write_refine_timings_csv.
void write_refine_csv(const std::filesystem::path& path, const std::vector<RefineRow>& rows);
void write_refine_timings_csv(const std::filesystem::path& path, const std::vector<RefineRow>& rows);

}  // namespace camg
