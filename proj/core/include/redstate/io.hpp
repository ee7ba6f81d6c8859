#pragma once

// Text file formats shared by the library and the command-line tool.
//
//   matrix:   {"rows": R, "cols": C, "entries": [[re, im], ...]}   (row-major)
//   state:    matrix fields plus {"m": M, "n": N}
//   spectrum: {"values": [x, ...]}

#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "redstate/linalg.hpp"

namespace redstate::io {

using Json = nlohmann::json;

Json matrix_to_json(const ComplexMatrix& a);
/// Throws ErrorKind::format on malformed documents.
ComplexMatrix matrix_from_json(const Json& doc);

Json state_to_json(const BipartiteState& s);

/// A matrix document that may carry a factorization.
struct MatrixDocument {
  ComplexMatrix matrix;
  std::optional<Index> m;
  std::optional<Index> n;
};
MatrixDocument document_from_json(const Json& doc);

Json spectrum_to_json(std::span<const double> values);
std::vector<double> spectrum_from_json(const Json& doc);

Json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Json& doc);

}  // namespace redstate::io
