#include "optodicke/rabi_ed.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "optodicke/parallel.hpp"

namespace optodicke {

void RabiParams::validate() const {
  if (!(std::isfinite(omega) && omega > 0)) throw std::invalid_argument("omega must be > 0");
  if (!(std::isfinite(omega_a) && omega_a > 0)) throw std::invalid_argument("omega_a must be > 0");
  if (!(std::isfinite(g) && g >= 0)) throw std::invalid_argument("g must be >= 0");
}

std::array<TridiagonalBlock, 2> build_blocks(const RabiParams& params, int n_max) {
  params.validate();
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
  std::array<TridiagonalBlock, 2> blocks;
  const int parities[2] = {+1, -1};
  for (int b = 0; b < 2; ++b) {
    auto& blk = blocks[b];
    blk.parity = parities[b];
    blk.matrix.diag.resize(n_max + 1);
    blk.matrix.offdiag.resize(n_max);
    for (int n = 0; n <= n_max; ++n) {
      const double spin = (n % 2 == 0) ? 1.0 : -1.0;
      blk.matrix.diag(n) = params.omega * n + blk.parity * 0.5 * params.omega_a * spin;
      if (n < n_max) blk.matrix.offdiag(n) = 0.5 * params.g * std::sqrt(double(n + 1));
    }
  }
  return blocks;
}

EigenEstimate smallest_eigenvalue(const TridiagonalBlock& block) {
  const auto pair = smallest_eigenpair(block.matrix);
  return {pair.value, pair.residual, norm_inf(block.matrix)};
}

namespace {

struct SectorMinimum {
  EigenEstimate estimate;
  int parity{-1};
};

SectorMinimum lowest_sector(const RabiParams& params, int n_max) {
  SectorMinimum best;
  bool first = true;
  for (const auto& blk : build_blocks(params, n_max)) {
    const auto est = smallest_eigenvalue(blk);
    if (first || est.value < best.estimate.value) {
      best = {est, blk.parity};
      first = false;
    }
  }
  return best;
}

}  // namespace

EDResult ground_energy(const RabiParams& params, int n_max) {
  const auto full = lowest_sector(params, n_max);
  const auto half = lowest_sector(params, std::max(n_max / 2, 2));
  EDResult r;
  r.ground_energy = full.estimate.value;
  r.parity = full.parity;
  r.n_max = n_max;
  r.residual = full.estimate.residual;
  r.matrix_norm = full.estimate.matrix_norm;
  r.convergence_delta = std::abs(full.estimate.value - half.estimate.value);
  return r;
}

double variational_energy_rabi(const RabiParams& params) {
  params.validate();
  const double gc = std::sqrt(params.omega * params.omega_a);
  if (params.g <= gc) return -0.5 * params.omega_a;
  const double g2 = params.g * params.g;
  return -0.25 * params.omega *
         (g2 / (params.omega * params.omega) + params.omega_a * params.omega_a / g2);
}

std::vector<RabiComparison> compare_curve(const RabiParams& base, const std::vector<double>& g_values,
                                          int n_max, int workers) {
  std::vector<RabiComparison> rows(g_values.size());
  parallel_for(g_values.size(), workers, [&](std::size_t i) {
    RabiParams p = base;
    p.g = g_values[i];
    EDResult ed;
    try {
      ed = ground_energy(p, n_max);
    } catch (const ConvergenceFailure& e) {
      throw ConvergenceFailure("at g=" + std::to_string(p.g) + ": " + e.what());
    }
    auto& row = rows[i];
    row.g = p.g;
    row.e_ed = ed.ground_energy;
    row.e_variational = variational_energy_rabi(p);
    row.deviation = row.e_variational - row.e_ed;
    row.parity = ed.parity;
    row.residual = ed.residual;
    row.convergence_delta = ed.convergence_delta;
  });
  return rows;
}

}  // namespace optodicke
