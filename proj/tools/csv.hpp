#pragma once

#include <ostream>
#include <string>

#include "nhscat/solver.hpp"

namespace nhscat::cli {

inline constexpr const char* sweep_csv_header =
    "k,abs2_Tl,abs2_Tr,abs2_Rl,abs2_Rr,re_Tl,im_Tl,re_Tr,im_Tr,re_Rl,im_Rl,re_Rr,im_Rr,error";

/// One row per k, ascending; failed rows keep k and the quoted error text.
/// Numbers use 17 significant digits.
void write_sweep_csv(std::ostream& out, const SweepTable& table);
std::string sweep_csv(const SweepTable& table);

std::string format_double(double v);

}  // namespace nhscat::cli
