#include "redstate/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace redstate::io {

namespace {

double finite_number(const Json& v, const char* what) {
  if (!v.is_number()) fail(ErrorKind::format, std::string(what) + " is not a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(ErrorKind::format, std::string(what) + " is not finite");
  return x;
}

Index count_field(const Json& doc, const char* key) {
  if (!doc.contains(key)) fail(ErrorKind::format, std::string("missing field \"") + key + "\"");
  const Json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    fail(ErrorKind::format, std::string("field \"") + key + "\" is not a count");
  return static_cast<Index>(v.get<long long>());
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& a) {
  Json entries = Json::array();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      entries.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
  return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& doc) {
  if (!doc.is_object()) fail(ErrorKind::format, "matrix document is not an object");
  const Index rows = count_field(doc, "rows");
  const Index cols = count_field(doc, "cols");
  if (!doc.contains("entries") || !doc.at("entries").is_array())
    fail(ErrorKind::format, "missing array field \"entries\"");
  const Json& entries = doc.at("entries");
  if (static_cast<Index>(entries.size()) != rows * cols) {
    std::ostringstream os;
    os << "entries has " << entries.size() << " items, expected " << rows * cols;
    fail(ErrorKind::format, os.str());
  }
  ComplexMatrix a(rows, cols);
  std::size_t k = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j, ++k) {
      const Json& e = entries[k];
      if (e.is_array() && e.size() == 2) {
        a(i, j) = Complex(finite_number(e[0], "entry"), finite_number(e[1], "entry"));
      } else if (e.is_number()) {
        a(i, j) = Complex(finite_number(e, "entry"), 0.0);
      } else {
        fail(ErrorKind::format, "entry is neither [re, im] nor a number");
      }
    }
  }
  return a;
}

Json state_to_json(const BipartiteState& s) {
  Json doc = matrix_to_json(s.matrix());
  doc["m"] = s.m();
  doc["n"] = s.n();
  return doc;
}

MatrixDocument document_from_json(const Json& doc) {
  MatrixDocument out{matrix_from_json(doc), std::nullopt, std::nullopt};
  if (doc.contains("m")) out.m = count_field(doc, "m");
  if (doc.contains("n")) out.n = count_field(doc, "n");
  return out;
}

Json spectrum_to_json(std::span<const double> values) {
  return Json{{"values", std::vector<double>(values.begin(), values.end())}};
}

std::vector<double> spectrum_from_json(const Json& doc) {
  const Json* arr = &doc;
  if (doc.is_object()) {
    if (!doc.contains("values")) fail(ErrorKind::format, "missing field \"values\"");
    arr = &doc.at("values");
  }
  if (!arr->is_array()) fail(ErrorKind::format, "spectrum values are not an array");
  std::vector<double> out;
  out.reserve(arr->size());
  for (const auto& v : *arr) out.push_back(finite_number(v, "spectrum value"));
  return out;
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::format, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::format, path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::format, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace redstate::io
