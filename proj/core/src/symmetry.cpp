#include "nhscat/symmetry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "nhscat/errors.hpp"

namespace nhscat {

namespace {

constexpr std::size_t inverse_square_samples = 401;

double relative_difference(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return b.size() && b.cwiseAbs().maxCoeff() > 0.0 ? 1.0 : 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

double residual_of(const PotentialKernel& kernel, Symmetry code) {
  if (const auto* s = std::get_if<SampledKernel>(&kernel)) {
    const SampledKernel t = transform(*s, code);
    return s->is_local() ? relative_difference(s->profile(), t.profile()) : relative_difference(s->values(), t.values());
  }
  if (const auto* p = std::get_if<PolynomialKernel>(&kernel))
    return relative_difference(p->coeffs(), transform(*p, code).coeffs());
  const auto& inv = std::get<RegularizedInverseSquare>(kernel);
  const SampledKernel a = sample(inv, inverse_square_samples);
  const SampledKernel b = sample(transform(inv, code), inverse_square_samples);
  return relative_difference(a.profile(), b.profile());
}

// Amplitudes of transform(V, code) as a recombination of those of V:
// predicted[i] = (hatted ? hat : direct)[perm[i]], order (Tl, Tr, Rl, Rr).
struct Recombination {
  bool hatted;
  std::array<int, 4> perm;
};

constexpr std::array<Recombination, 8> recombinations{{
    {false, {0, 1, 2, 3}},  // I
    {true, {0, 1, 2, 3}},   // II
    {false, {1, 0, 3, 2}},  // III
    {true, {1, 0, 3, 2}},   // IV
    {true, {1, 0, 2, 3}},   // V
    {false, {1, 0, 2, 3}},  // VI
    {true, {0, 1, 3, 2}},   // VII
    {false, {0, 1, 3, 2}},  // VIII
}};

constexpr std::array<const char*, 4> component_names{"Tl", "Tr", "Rl", "Rr"};

std::array<cplx, 4> as_array(const AmplitudeQuad& q) { return {q.Tl, q.Tr, q.Rl, q.Rr}; }

const AmplitudeQuad& hatted_or_throw(const ScatteringAmplitudes& amps) {
  if (!amps.hatted) throw InputError("relation needs the adjoint amplitudes");
  return *amps.hatted;
}

bool near(double value, double target) { return std::abs(value - target) < relation_condition_tol; }

}  // namespace

SymmetryReport check_symmetries(const PotentialKernel& kernel, double tol) {
  if (!(tol > 0.0)) throw InputError("symmetry tolerance must be positive");
  SymmetryReport report;
  report.tol = tol;
  for (Symmetry s : all_symmetries) {
    const double r = s == Symmetry::I ? 0.0 : residual_of(kernel, s);
    report.residuals[index(s)] = r;
    report.verdicts[index(s)] = r < tol;
  }
  return report;
}

PotentialKernel symmetrize(const PotentialKernel& kernel, Symmetry code) {
  if (const auto* s = std::get_if<SampledKernel>(&kernel)) {
    const SampledKernel t = transform(*s, code);
    if (s->is_local()) return SampledKernel::local(s->half_width(), 0.5 * (s->profile() + t.profile()));
    return SampledKernel(s->half_width(), 0.5 * (s->values() + t.values()));
  }
  if (const auto* p = std::get_if<PolynomialKernel>(&kernel))
    return PolynomialKernel(p->half_width(), 0.5 * (p->coeffs() + transform(*p, code).coeffs()));
  if (residual_of(kernel, code) == 0.0) return kernel;
  throw InputError("the inverse-square potential cannot be projected onto symmetry " +
                   std::string(to_string(code)));
}

std::vector<std::pair<Symmetry, Symmetry>> equivalence_pairs(Symmetry first) {
  std::vector<std::pair<Symmetry, Symmetry>> pairs;
  if (first == Symmetry::I) return pairs;
  for (Symmetry x : all_symmetries) {
    if (x == Symmetry::I || x == first) continue;
    const Symmetry y = compose(first, x);
    if (index(x) < index(y)) pairs.emplace_back(x, y);
  }
  return pairs;
}

std::vector<EquivalenceCheck> equivalence_table_check(const PotentialKernel& kernel, Symmetry first, double tol) {
  const SymmetryReport report = check_symmetries(kernel, tol);
  if (!report.holds(first))
    throw InputError("kernel does not satisfy symmetry " + std::string(to_string(first)) + " (residual " +
                     std::to_string(report.residual(first)) + ")");
  std::vector<EquivalenceCheck> out;
  for (const auto& pair : equivalence_pairs(first))
    out.push_back({pair, report.holds(pair.first) == report.holds(pair.second)});
  return out;
}

std::string to_string(DeviceCode code) {
  switch (code) {
    case DeviceCode::TR_A: return "TR/A";
    case DeviceCode::T_R: return "T/R";
    case DeviceCode::T_A: return "T/A";
    case DeviceCode::TR_R: return "TR/R";
    case DeviceCode::R_A: return "R/A";
    case DeviceCode::TR_T: return "TR/T";
  }
  return "?";
}

DeviceCode parse_device(std::string_view text) {
  std::string key;
  for (char c : text)
    if (c != '/' && c != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "tra") return DeviceCode::TR_A;
  if (key == "tr") return DeviceCode::T_R;
  if (key == "ta") return DeviceCode::T_A;
  if (key == "trr") return DeviceCode::TR_R;
  if (key == "ra") return DeviceCode::R_A;
  if (key == "trt") return DeviceCode::TR_T;
  throw InputError("unknown device code '" + std::string(text) + "'");
}

std::array<int, 4> pattern(DeviceCode code) {
  switch (code) {
    case DeviceCode::TR_A: return {1, 0, 1, 0};
    case DeviceCode::T_R: return {1, 0, 0, 1};
    case DeviceCode::T_A: return {1, 0, 0, 0};
    case DeviceCode::TR_R: return {1, 0, 1, 1};
    case DeviceCode::R_A: return {0, 0, 1, 0};
    case DeviceCode::TR_T: return {1, 1, 1, 0};
  }
  return {0, 0, 0, 0};
}

std::vector<Symmetry> forbidding_symmetries(DeviceCode code) {
  using S = Symmetry;
  switch (code) {
    case DeviceCode::TR_A:
    case DeviceCode::T_R: return {S::II, S::III, S::IV, S::V, S::VI, S::VII, S::VIII};
    case DeviceCode::T_A: return {S::II, S::III, S::IV, S::V, S::VI, S::VII};
    case DeviceCode::TR_R: return {S::II, S::III, S::VI, S::VII};
    case DeviceCode::R_A: return {S::II, S::III, S::IV, S::V, S::VII, S::VIII};
    case DeviceCode::TR_T: return {S::II, S::III, S::V, S::VIII};
  }
  return {};
}

std::vector<DeviceVerdict> allowed_devices(const SymmetryReport& report) {
  std::vector<DeviceVerdict> out;
  for (DeviceCode code : all_devices) {
    DeviceVerdict v{code, true, {}};
    for (Symmetry s : forbidding_symmetries(code))
      if (report.holds(s)) v.forbidden_by.push_back(s);
    v.allowed = v.forbidden_by.empty();
    out.push_back(std::move(v));
  }
  return out;
}

AmplitudeQuad equivariant_amplitudes(const ScatteringAmplitudes& amps, Symmetry code) {
  const Recombination& r = recombinations[index(code)];
  const std::array<cplx, 4> src = as_array(r.hatted ? hatted_or_throw(amps) : amps.quad());
  return {src[r.perm[0]], src[r.perm[1]], src[r.perm[2]], src[r.perm[3]]};
}

std::vector<AmplitudeRelation> predicted_amplitude_relations(const SymmetryReport& report) {
  std::vector<AmplitudeRelation> out;
  for (Symmetry s : all_symmetries) {
    if (s == Symmetry::I || !report.holds(s)) continue;

    // Component identities: V is a fixed point of its own transform.
    const Recombination& r = recombinations[index(s)];
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < 4; ++i) {
      const int j = r.perm[i];
      if (!r.hatted) {
        if (i == j || !seen.insert({std::min(i, j), std::max(i, j)}).second) continue;
        out.push_back({s, std::string(component_names[i]) + " = " + component_names[j], false,
                       [i, j](const ScatteringAmplitudes& a) {
                         const auto q = as_array(a.quad());
                         return std::abs(q[i] - q[j]);
                       }});
      } else {
        out.push_back({s, std::string(component_names[i]) + " = hat " + component_names[j], true,
                       [i, j](const ScatteringAmplitudes& a) {
                         return std::abs(as_array(a.quad())[i] - as_array(hatted_or_throw(a))[j]);
                       }});
      }
    }

    // Moduli implied together with generalized unitarity.
    const auto equal_moduli = [&](int i, int j) {
      out.push_back({s, "|" + std::string(component_names[i]) + "| = |" + component_names[j] + "|", false,
                     [i, j](const ScatteringAmplitudes& a) {
                       const auto q = as_array(a.quad());
                       return std::abs(std::abs(q[i]) - std::abs(q[j]));
                     }});
    };
    if (s == Symmetry::II) {
      equal_moduli(0, 1);
      equal_moduli(2, 3);
    }
    if (s == Symmetry::V) equal_moduli(2, 3);
    if (s == Symmetry::VII) equal_moduli(0, 1);

    // Conditions attached to perfect one-way transmission or reflection.
    if (s == Symmetry::IV) {
      out.push_back({s, "|Tl| = 1, |Tr| = 0 implies Rr Rl* = 1", false, [](const ScatteringAmplitudes& a) {
                       if (!near(std::abs(a.Tl), 1.0) || !near(std::abs(a.Tr), 0.0)) return 0.0;
                       return std::abs(a.Rr * std::conj(a.Rl) - 1.0);
                     }});
      out.push_back({s, "|Rl| = 1, |Rr| = 0 implies Tr Tl* = 1", false, [](const ScatteringAmplitudes& a) {
                       if (!near(std::abs(a.Rl), 1.0) || !near(std::abs(a.Rr), 0.0)) return 0.0;
                       return std::abs(a.Tr * std::conj(a.Tl) - 1.0);
                     }});
    }
    if (s == Symmetry::V) {
      out.push_back({s, "|Tl| = 1, |Tr| = 0 implies |Rl| = |Rr| = 1", false, [](const ScatteringAmplitudes& a) {
                       if (!near(std::abs(a.Tl), 1.0) || !near(std::abs(a.Tr), 0.0)) return 0.0;
                       return std::max(std::abs(std::abs(a.Rl) - 1.0), std::abs(std::abs(a.Rr) - 1.0));
                     }});
    }
    if (s == Symmetry::VII) {
      out.push_back({s, "|Rl| = 1, |Rr| = 0 implies |Tl| = |Tr| = 1", false, [](const ScatteringAmplitudes& a) {
                       if (!near(std::abs(a.Rl), 1.0) || !near(std::abs(a.Rr), 0.0)) return 0.0;
                       return std::max(std::abs(std::abs(a.Tl) - 1.0), std::abs(std::abs(a.Tr) - 1.0));
                     }});
    }
  }
  return out;
}

}  // namespace nhscat
