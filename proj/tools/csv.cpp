#include "csv.hpp"

#include <cstdio>
#include <sstream>

namespace nhscat::cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string quoted(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << sweep_csv_header << '\n';
  for (const SweepRow& row : table.rows) {
    out << format_double(row.k);
    if (row.amplitudes) {
      const ScatteringAmplitudes& a = *row.amplitudes;
      for (cplx z : {a.Tl, a.Tr, a.Rl, a.Rr}) out << ',' << format_double(std::norm(z));
      for (cplx z : {a.Tl, a.Tr, a.Rl, a.Rr}) out << ',' << format_double(z.real()) << ',' << format_double(z.imag());
      out << ",\n";
    } else {
      out << ",,,,,,,,,,,,," << quoted(row.error) << '\n';
    }
  }
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream s;
  write_sweep_csv(s, table);
  return s.str();
}

}  // namespace nhscat::cli
