#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pptgeo/geometry.hpp"
#include "pptgeo/io.hpp"

namespace pptgeo {

inline constexpr const char* kVersion = "1.0.0";

struct ExperimentConfig {
    std::string experiment;
    std::size_t d = 2;
    std::size_t d_s = 2;
    std::size_t l = 2;
    std::size_t power = 1;
    std::size_t n = 16;
    std::size_t samples = 100;
    std::size_t random = 0;
    double epsilon = 1.0;
    std::uint64_t seed = 1;
    double tol_eig = 1e-10;
    double tol_feas = 1e-7;
    double tol_value = 1e-4;
    bool tol_value_user = false;  // if unset, widths at n=81 relax to 1e-3
    std::string out;
    std::string format = "csv";
    std::string schmidt;  // comma-separated Schmidt coefficients
    std::string grid;     // lmin,lmax,dsmin,dsmax for the bounds table
    std::string in;       // input state path for squeeze
    bool all = false;     // construct: also emit gamma and gamma'
};

// Strict key=value application: unknown keys or malformed values throw
// before any computation starts.
void apply_config_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Flat key=value lines; '#' starts a comment, blank lines ignored.
void merge_config_text(ExperimentConfig& cfg, const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Checks cross-field invariants (positive tolerances, samples >= 1, known
// experiment and format) and fills the default output path.
void finalize_config(ExperimentConfig& cfg);

SolverConfig solver_config_for(const ExperimentConfig& cfg, std::size_t n);

RunManifest run(const ExperimentConfig& cfg);

// Renders a result table as a static SVG. Kinds: "widths" and "wigner"
// (histograms, with bound/asymptote lines when a sibling .summary.json is
// present), "bounds" (first/second/exact vs l). Empty tables are an error and
// produce no file.
void plot_export(const std::string& table_path, const std::string& kind,
                 const std::string& image_path);

}  // namespace pptgeo
