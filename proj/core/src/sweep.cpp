#include <algorithm>

#include "nhscat/errors.hpp"
#include "nhscat/solver.hpp"

namespace nhscat {

SweepTable k_sweep(const PotentialKernel& kernel, std::span<const double> ks, const SolverConfig& config,
                   bool with_adjoint) {
  config.validate();
  std::vector<double> sorted(ks.begin(), ks.end());
  std::sort(sorted.begin(), sorted.end());
  SweepTable table;
  table.rows.reserve(sorted.size());
  for (const double k : sorted) {
    SweepRow row;
    row.k = k;
    try {
      row.amplitudes = scatter_all(kernel, k, config, with_adjoint);
    } catch (const NumericalError& e) {
      row.error = e.what();
    } catch (const DomainError& e) {
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

}  // namespace nhscat
