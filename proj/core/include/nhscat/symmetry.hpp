#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nhscat/kernel.hpp"
#include "nhscat/solver.hpp"
#include "nhscat/symmetry_code.hpp"

namespace nhscat {

struct SymmetryReport {
  /// sup |V - transform(V, code)| / sup |V|, indexed by index(code).
  std::array<double, 8> residuals{};
  std::array<bool, 8> verdicts{};
  double tol = 1e-9;

  bool holds(Symmetry code) const { return verdicts[index(code)]; }
  double residual(Symmetry code) const { return residuals[index(code)]; }
};

/// Residual of every symmetry relation. Sampled and polynomial kernels are
/// compared entry by entry (coefficients for polynomials); the inverse-square
/// potential is compared on a 401-point tabulation.
SymmetryReport check_symmetries(const PotentialKernel& kernel, double tol = 1e-9);

/// Projection (V + transform(V, code)) / 2 onto the symmetry class. The
/// transforms commute, so chained projections land in the intersection.
/// Throws InputError for the inverse-square potential unless it already
/// satisfies `code`.
PotentialKernel symmetrize(const PotentialKernel& kernel, Symmetry code);

/// Pairs (X, Y) that become equivalent once `first` holds, i.e. Y is X
/// composed with `first`; three per row, ordered by X.
std::vector<std::pair<Symmetry, Symmetry>> equivalence_pairs(Symmetry first);

struct EquivalenceCheck {
  std::pair<Symmetry, Symmetry> pair;
  bool agree = false;
};

/// Evaluate each pair of `first`'s row against the kernel's verdicts.
/// Throws InputError naming `first` when the kernel does not satisfy it.
std::vector<EquivalenceCheck> equivalence_table_check(const PotentialKernel& kernel, Symmetry first,
                                                      double tol = 1e-9);

enum class DeviceCode { TR_A, T_R, T_A, TR_R, R_A, TR_T };

inline constexpr std::array<DeviceCode, 6> all_devices{DeviceCode::TR_A, DeviceCode::T_R,  DeviceCode::T_A,
                                                       DeviceCode::TR_R, DeviceCode::R_A,  DeviceCode::TR_T};

/// "TR/A", "T/R", ...
std::string to_string(DeviceCode code);
/// Accepts "TR/A" style names and the short forms tra, tr, ta, trr, ra, trt.
DeviceCode parse_device(std::string_view text);

/// Target moduli (|T^l|, |T^r|, |R^l|, |R^r|), each 0 or 1.
std::array<int, 4> pattern(DeviceCode code);

/// Symmetries whose presence makes the device impossible.
std::vector<Symmetry> forbidding_symmetries(DeviceCode code);

struct DeviceVerdict {
  DeviceCode code;
  bool allowed = true;
  std::vector<Symmetry> forbidden_by;
};

std::vector<DeviceVerdict> allowed_devices(const SymmetryReport& report);

/// Amplitudes of transform(V, code) predicted from those of V. Codes II, IV,
/// V and VII draw on the hatted amplitudes; InputError when absent.
AmplitudeQuad equivariant_amplitudes(const ScatteringAmplitudes& amps, Symmetry code);

/// A checkable statement about one ScatteringAmplitudes value.
struct AmplitudeRelation {
  Symmetry source;
  std::string text;
  bool needs_adjoint = false;
  /// Zero when the relation holds exactly. Conditional relations return zero
  /// when their condition is not met.
  std::function<double(const ScatteringAmplitudes&)> defect;
};

/// Relations implied by every satisfied symmetry other than I: component
/// identities between direct and hatted amplitudes, equal moduli, and the
/// phase conditions attached to perfect one-way transmission or reflection.
std::vector<AmplitudeRelation> predicted_amplitude_relations(const SymmetryReport& report);

/// Tolerance used to decide whether a conditional relation applies.
inline constexpr double relation_condition_tol = 1e-6;

}  // namespace nhscat
