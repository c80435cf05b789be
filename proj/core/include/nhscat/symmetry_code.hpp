#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace nhscat {

/// The eight generalized symmetries generated by Klein's four-group
/// {1, parity, time reversal, parity*time reversal} acting by commutation
/// (A H = H A) or pseudo-hermiticity (A H = H^dagger A).
///
/// At the level of the kernel V(x,y) each code is a combination of three
/// commuting involutions: complex conjugation, transposition (x <-> y) and
/// parity (x,y -> -x,-y).
enum class Symmetry : int { I = 0, II, III, IV, V, VI, VII, VIII };

inline constexpr std::array<Symmetry, 8> all_symmetries{
    Symmetry::I, Symmetry::II, Symmetry::III, Symmetry::IV,
    Symmetry::V, Symmetry::VI, Symmetry::VII, Symmetry::VIII};

struct KernelAction {
  bool conjugate = false;
  bool transpose = false;
  bool parity = false;
};

constexpr std::size_t index(Symmetry s) { return static_cast<std::size_t>(s); }

namespace detail {
// bit 0: conjugate, bit 1: transpose, bit 2: parity
inline constexpr std::array<unsigned, 8> action_bits{0b000, 0b011, 0b100, 0b111,
                                                     0b001, 0b010, 0b101, 0b110};
}  // namespace detail

constexpr KernelAction action(Symmetry s) {
  const unsigned b = detail::action_bits[index(s)];
  return {(b & 1u) != 0, (b & 2u) != 0, (b & 4u) != 0};
}

/// Kernel-level composition: transform(transform(V, a), b) == transform(V, compose(a, b)).
constexpr Symmetry compose(Symmetry a, Symmetry b) {
  const unsigned bits = detail::action_bits[index(a)] ^ detail::action_bits[index(b)];
  for (Symmetry s : all_symmetries) {
    if (detail::action_bits[index(s)] == bits) return s;
  }
  return Symmetry::I;
}

std::string_view to_string(Symmetry s);
std::optional<Symmetry> parse_symmetry(std::string_view text);

}  // namespace nhscat
