// Exact diagonalization of the single-atom (Rabi) limit in a truncated Fock
// basis, used as an independent check of the variational ground energy.
//
//   H = omega a^dag a + (omega_a / 2) sigma_z + (g / 2) (a + a^dag) sigma_x
//
// Parity conservation splits the 2 (n_max + 1) states into two chains
// |0, s>, |1, -s>, |2, s>, ... each of which is symmetric tridiagonal.
#pragma once

#include <array>
#include <vector>

#include "optodicke/tridiagonal.hpp"

namespace optodicke {

struct RabiParams {
  double omega{1};
  double omega_a{1};
  double g{0};  // the atom-field coupling is g / 2

  void validate() const;
};

struct TridiagonalBlock {
  int parity{1};  // +1: chain starts with the excited atom, -1: with the ground atom
  SymmetricTridiagonal<double> matrix;
};

struct EigenEstimate {
  double value{0};
  double residual{0};
  double matrix_norm{0};
};

struct EDResult {
  double ground_energy{0};
  int parity{-1};
  int n_max{0};
  double residual{0};
  double matrix_norm{0};
  double convergence_delta{0};  // |E(n_max) - E(n_max / 2)|
};

struct RabiComparison {
  double g{0};
  double e_ed{0};
  double e_variational{0};
  double deviation{0};  // e_variational - e_ed
  int parity{-1};
  double residual{0};
  double convergence_delta{0};
};

/// Blocks ordered {parity +1, parity -1}.
std::array<TridiagonalBlock, 2> build_blocks(const RabiParams& params, int n_max);

EigenEstimate smallest_eigenvalue(const TridiagonalBlock& block);

EDResult ground_energy(const RabiParams& params, int n_max = 300);

/// -omega_a / 2 below g_c = sqrt(omega omega_a), -(omega / 4)(g^2/omega^2 + omega_a^2/g^2) above.
double variational_energy_rabi(const RabiParams& params);

std::vector<RabiComparison> compare_curve(const RabiParams& base, const std::vector<double>& g_values,
                                          int n_max = 300, int workers = 1);

}  // namespace optodicke
