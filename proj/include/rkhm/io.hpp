#pragma once

// File formats: CSV samples, JSON density matrices, JSON kernel configs and
// atomically written JSON reports.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rkhm/kernels.hpp"
#include "rkhm/measures.hpp"

namespace rkhm::io {

using nlohmann::json;

/// {"family": "gaussian" | "laplacian" | "inverse_multiquadric",
///  "gamma": g} or {"family": "inverse_multiquadric", "c": c, "beta": b}
ScalarKernel scalar_kernel_from_json(const json& j);
json to_json(const ScalarKernel& k);

/// {"variant": "diagonal_scalar" | "elementwise" | "quantum_projective" |
///  "product_scalar_identity", "m": int, ...scalar kernel fields}.
/// diagonal_scalar also takes "kernels": [per-diagonal kernels];
/// product_scalar_identity takes "first" / "second" (default: the top-level
/// scalar fields for both). Missing "m" falls back to default_m.
KernelSpec kernel_from_json(const json& j, Index default_m = 1);
json to_json(const KernelSpec& k);

/// CSV: header naming m variables, then n rows of m decimal floats. Throws
/// DataError naming the offending line and column.
RealMatrix parse_samples(const std::string& text, const std::string& source = "<memory>");
RealMatrix load_samples(const std::filesystem::path& path);
std::string format_samples(const RealMatrix& samples, const std::vector<std::string>& names = {});

/// Matrix as nested rows of [re, im] pairs. Parsing also accepts a flat
/// row-major list of m^2 pairs.
json to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const json& j);

struct StateSet {
  std::vector<DensityMatrix> states;
  std::vector<std::string> labels;  // empty when the file carries none
};

/// Either a JSON list of matrices or {"states": [...], "labels": [...]}.
/// Every matrix is validated as a density matrix; failures name the index.
StateSet parse_states(const json& j, const std::string& source = "<memory>");
StateSet load_states(const std::filesystem::path& path);
json to_json(const StateSet& set);

json read_json(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over the target.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const json& j);

}  // namespace rkhm::io
