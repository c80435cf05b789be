#include "nhscat/symmetry_code.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace nhscat {

namespace {
constexpr std::array<std::string_view, 8> names{"I", "II", "III", "IV", "V", "VI", "VII", "VIII"};
}

std::string_view to_string(Symmetry s) { return names[index(s)]; }

std::optional<Symmetry> parse_symmetry(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Symmetry s : all_symmetries) {
    if (names[index(s)] == upper) return s;
  }
  return std::nullopt;
}

}  // namespace nhscat
