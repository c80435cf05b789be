#include "nhscat/kernel_io.hpp"

#include <fstream>
#include <sstream>

#include "nhscat/errors.hpp"

namespace nhscat {

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw InputError(std::string("kernel field '") + field + "' is missing");
  return *it;
}

double require_number(const nlohmann::json& j, const char* field) {
  const auto& v = require(j, field);
  if (!v.is_number()) throw InputError(std::string("kernel field '") + field + "' must be a number");
  return v.get<double>();
}

std::size_t require_count(const nlohmann::json& j, const char* field) {
  const auto& v = require(j, field);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InputError(std::string("kernel field '") + field + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<cplx> require_complex_array(const nlohmann::json& j, const char* field, std::size_t expected) {
  const auto& v = require(j, field);
  if (!v.is_array()) throw InputError(std::string("kernel field '") + field + "' must be an array");
  if (v.size() != expected)
    throw InputError(std::string("kernel field '") + field + "' has " + std::to_string(v.size()) +
                     " entries, expected " + std::to_string(expected));
  std::vector<cplx> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(complex_from_json(v[i], std::string(field) + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx complex_from_json(const nlohmann::json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError("kernel field '" + field + "' must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json kernel_to_json(const PotentialKernel& kernel) {
  nlohmann::json j;
  if (const auto* s = std::get_if<SampledKernel>(&kernel)) {
    j["type"] = "sampled";
    j["d"] = s->half_width();
    j["n"] = s->size();
    j["is_local"] = s->is_local();
    auto values = nlohmann::json::array();
    if (s->is_local()) {
      for (Eigen::Index i = 0; i < s->profile().size(); ++i) values.push_back(complex_to_json(s->profile()(i)));
    } else {
      const auto& v = s->values();
      for (Eigen::Index r = 0; r < v.rows(); ++r)
        for (Eigen::Index c = 0; c < v.cols(); ++c) values.push_back(complex_to_json(v(r, c)));
    }
    j["values"] = std::move(values);
  } else if (const auto* p = std::get_if<PolynomialKernel>(&kernel)) {
    j["type"] = "polynomial";
    j["d"] = p->half_width();
    j["imax"] = p->imax();
    j["jmax"] = p->jmax();
    auto coeffs = nlohmann::json::array();
    for (Eigen::Index r = 0; r < p->coeffs().rows(); ++r)
      for (Eigen::Index c = 0; c < p->coeffs().cols(); ++c) coeffs.push_back(complex_to_json(p->coeffs()(r, c)));
    j["coeffs"] = std::move(coeffs);
  } else {
    const auto& q = std::get<RegularizedInverseSquare>(kernel);
    j["type"] = "inverse_square";
    j["d"] = q.d;
    j["alpha"] = q.alpha;
    j["epsilon"] = q.epsilon;
    j["mirrored"] = q.mirrored;
  }
  return j;
}

PotentialKernel kernel_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("kernel document must be a JSON object");
  const auto& type_field = require(j, "type");
  if (!type_field.is_string()) throw InputError("kernel field 'type' must be a string");
  const std::string type = type_field.get<std::string>();
  const double d = require_number(j, "d");
  if (!(d > 0.0)) throw InputError("kernel field 'd' must be positive");

  if (type == "sampled") {
    const std::size_t n = require_count(j, "n");
    if (n < 3) throw InputError("kernel field 'n' must be at least 3");
    bool local = false;
    if (auto it = j.find("is_local"); it != j.end()) {
      if (!it->is_boolean()) throw InputError("kernel field 'is_local' must be a boolean");
      local = it->get<bool>();
    }
    const auto values = require_complex_array(j, "values", local ? n : n * n);
    if (local) {
      Eigen::VectorXcd p(n);
      for (std::size_t i = 0; i < n; ++i) p(i) = values[i];
      return SampledKernel::local(d, std::move(p));
    }
    Eigen::MatrixXcd v(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) v(r, c) = values[r * n + c];
    return SampledKernel(d, std::move(v));
  }
  if (type == "polynomial") {
    const std::size_t imax = require_count(j, "imax");
    const std::size_t jmax = require_count(j, "jmax");
    if (imax > 5) throw InputError("kernel field 'imax' must be at most 5");
    if (jmax > 5) throw InputError("kernel field 'jmax' must be at most 5");
    const auto coeffs = require_complex_array(j, "coeffs", (imax + 1) * (jmax + 1));
    Eigen::MatrixXcd c(imax + 1, jmax + 1);
    for (std::size_t r = 0; r <= imax; ++r)
      for (std::size_t s = 0; s <= jmax; ++s) c(r, s) = coeffs[r * (jmax + 1) + s];
    return PolynomialKernel(d, std::move(c));
  }
  if (type == "inverse_square") {
    RegularizedInverseSquare q;
    q.d = d;
    q.alpha = require_number(j, "alpha");
    q.epsilon = require_number(j, "epsilon");
    if (!(q.epsilon > 0.0)) throw InputError("kernel field 'epsilon' must be positive");
    if (auto it = j.find("mirrored"); it != j.end()) {
      if (!it->is_boolean()) throw InputError("kernel field 'mirrored' must be a boolean");
      q.mirrored = it->get<bool>();
    }
    return q;
  }
  throw InputError("kernel field 'type' has unknown value '" + type + "'");
}

PotentialKernel parse_kernel(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line/column pair.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InputError("malformed kernel JSON at line " + std::to_string(line) + ", column " +
                     std::to_string(column) + ": " + e.what());
  }
  return kernel_from_json(j);
}

PotentialKernel read_kernel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open kernel file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_kernel(buffer.str());
}

void write_kernel_file(const std::filesystem::path& path, const PotentialKernel& kernel) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write kernel file '" + path.string() + "'");
  out << kernel_to_json(kernel).dump(1) << '\n';
}

}  // namespace nhscat
