// Variational energy landscape of N two-level atoms in an optomechanical cavity.
//
// The photon and phonon fields are coherent states, the collective spin is a
// spin coherent state. After eliminating the phonon displacement the scaled
// energy depends on a single amplitude gamma_bar = gamma / sqrt(N):
//
//   eps(x) = omega x - (zeta^2 / omega_b) x^2 + s A(x) / 2,   x = gamma_bar^2
//   A(x)   = sqrt(omega_a^2 + 4 g^2 x)
//
// with s = -1 on the Normal (spin down) branch and s = +1 on the Inverted one.
// Everything here is N-independent and templated on the scalar type so that
// finite-difference checks can run in extended precision.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace optodicke {

enum class SpinBranch { Normal, Inverted };

enum class Stability { Stable, Unstable, Marginal };

/// Sign multiplying A/2 in the branch energy: -1 for Normal, +1 for Inverted.
template <typename Scalar = double>
constexpr Scalar branch_sign(SpinBranch branch) {
  return branch == SpinBranch::Normal ? Scalar(-1) : Scalar(1);
}

inline const char* to_string(SpinBranch branch) {
  return branch == SpinBranch::Normal ? "normal" : "inverted";
}

inline const char* to_string(Stability stability) {
  switch (stability) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Marginal: return "marginal";
  }
  return "?";
}

/// Physical parameters; frequencies and couplings in units of omega_a.
template <typename Scalar = double>
struct ModelParams {
  Scalar omega{1};    // cavity frequency
  Scalar omega_a{1};  // atomic transition frequency
  Scalar omega_b{10}; // mechanical oscillator frequency
  Scalar g{0};        // collective atom-field coupling
  Scalar zeta{0};     // photon-phonon (radiation pressure) coupling
  int n_atoms{1};

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw std::invalid_argument(what);
    };
    require(std::isfinite(double(omega)) && omega > 0, "omega must be > 0");
    require(std::isfinite(double(omega_a)) && omega_a > 0, "omega_a must be > 0");
    require(std::isfinite(double(omega_b)) && omega_b > 0, "omega_b must be > 0");
    require(std::isfinite(double(g)) && g >= 0, "g must be >= 0");
    require(std::isfinite(double(zeta)) && zeta >= 0, "zeta must be >= 0");
    require(n_atoms >= 1, "n_atoms must be >= 1");
  }

  template <typename Other>
  ModelParams<Other> cast() const {
    return {Other(omega), Other(omega_a), Other(omega_b), Other(g), Other(zeta), n_atoms};
  }
};

/// Cavity amplitude per square root of the atom number.
template <typename Scalar = double>
class ScaledAmplitude {
 public:
  constexpr ScaledAmplitude() = default;
  constexpr explicit ScaledAmplitude(Scalar gamma_bar) : value_(gamma_bar) {
    if (!(gamma_bar >= 0)) throw std::invalid_argument("scaled amplitude must be >= 0");
  }
  static ScaledAmplitude from_squared(Scalar x) { return ScaledAmplitude(std::sqrt(x)); }

  constexpr Scalar value() const { return value_; }
  constexpr Scalar squared() const { return value_ * value_; }
  /// Raw coherent-state amplitude gamma = sqrt(N) gamma_bar.
  Scalar raw(int n_atoms) const { return std::sqrt(Scalar(n_atoms)) * value_; }

 private:
  Scalar value_{0};
};

template <typename Scalar>
ScaledAmplitude(Scalar) -> ScaledAmplitude<Scalar>;

/// Angles of the spin coherent state and phases of the boson coherent states.
template <typename Scalar = double>
struct ScsAngles {
  Scalar theta{0};    // polar angle of n
  Scalar phi{0};      // azimuthal angle of n
  Scalar eta{0};      // photon coherent-state phase
  Scalar xi{0};       // phonon coherent-state phase
  Scalar rho_bar{0};  // phonon displacement / sqrt(N)
};

template <typename Scalar = double>
struct VariationalPoint {
  ScaledAmplitude<Scalar> amplitude;
  SpinBranch branch{SpinBranch::Normal};
  Scalar energy{0};
  Scalar curvature{0};
  Stability stability{Stability::Marginal};
};

template <typename Scalar = double>
struct Observables {
  Scalar n_p{0};        // photons per atom
  Scalar delta_n_a{0};  // <J_z> / N
  Scalar n_b{0};        // phonons per atom
  Scalar energy{0};     // energy per atom
};

template <typename Scalar>
Stability classify_curvature(Scalar curvature, Scalar tol_curv) {
  if (curvature > tol_curv) return Stability::Stable;
  if (curvature < -tol_curv) return Stability::Unstable;
  return Stability::Marginal;
}

// Functions of x = gamma_bar^2; the solver works in this variable.
namespace detail {

template <typename Scalar>
Scalar splitting_x(const ModelParams<Scalar>& p, Scalar x) {
  using std::sqrt;
  return sqrt(p.omega_a * p.omega_a + 4 * p.g * p.g * x);
}

template <typename Scalar>
Scalar energy_x(const ModelParams<Scalar>& p, SpinBranch b, Scalar x) {
  const Scalar quartic = p.zeta * p.zeta / p.omega_b;
  return p.omega * x - quartic * x * x + branch_sign<Scalar>(b) * splitting_x(p, x) / 2;
}

template <typename Scalar>
Scalar poly_x(const ModelParams<Scalar>& p, SpinBranch b, Scalar x) {
  const Scalar a = splitting_x(p, x);
  return p.omega - 2 * p.zeta * p.zeta * x / p.omega_b + branch_sign<Scalar>(b) * p.g * p.g / a;
}

/// d p / d x.
template <typename Scalar>
Scalar poly_slope_x(const ModelParams<Scalar>& p, SpinBranch b, Scalar x) {
  const Scalar a = splitting_x(p, x);
  const Scalar g2 = p.g * p.g;
  return -2 * p.zeta * p.zeta / p.omega_b - branch_sign<Scalar>(b) * 2 * g2 * g2 / (a * a * a);
}

template <typename Scalar>
Scalar curvature_x(const ModelParams<Scalar>& p, SpinBranch b, Scalar x) {
  const Scalar a = splitting_x(p, x);
  return 2 * (p.omega - 6 * p.zeta * p.zeta * x / p.omega_b +
              branch_sign<Scalar>(b) * p.g * p.g * p.omega_a * p.omega_a / (a * a * a));
}

/// Magnitude of the individual terms of p, used to scale rounding tolerances.
template <typename Scalar>
Scalar poly_scale_x(const ModelParams<Scalar>& p, Scalar x) {
  return p.omega + 2 * p.zeta * p.zeta * x / p.omega_b + p.g * p.g / splitting_x(p, x);
}

}  // namespace detail

/// A(gamma_bar) = omega_a sqrt(1 + f^2), f = 2 g gamma_bar / omega_a.
template <typename Scalar>
Scalar level_splitting(const ModelParams<Scalar>& p, ScaledAmplitude<Scalar> gb) {
  using std::hypot;
  return hypot(p.omega_a, 2 * p.g * gb.value());
}

template <typename Scalar>
Scalar scaled_energy(const ModelParams<Scalar>& p, SpinBranch b, ScaledAmplitude<Scalar> gb) {
  const Scalar x = gb.squared();
  const Scalar quartic = p.zeta * p.zeta / p.omega_b;
  return p.omega * x - quartic * x * x + branch_sign<Scalar>(b) * level_splitting(p, gb) / 2;
}

/// p(gamma_bar) with d eps / d gamma_bar = 2 gamma_bar p.
template <typename Scalar>
Scalar extremum_polynomial(const ModelParams<Scalar>& p, SpinBranch b,
                           ScaledAmplitude<Scalar> gb) {
  return p.omega - 2 * p.zeta * p.zeta * gb.squared() / p.omega_b +
         branch_sign<Scalar>(b) * p.g * p.g / level_splitting(p, gb);
}

/// d p / d gamma_bar.
template <typename Scalar>
Scalar extremum_polynomial_slope(const ModelParams<Scalar>& p, SpinBranch b,
                                 ScaledAmplitude<Scalar> gb) {
  return 2 * gb.value() * detail::poly_slope_x(p, b, gb.squared());
}

/// d^2 eps / d gamma_bar^2 = 2 (omega - 6 zeta^2 x / omega_b -+ g^2 omega_a^2 / A^3).
template <typename Scalar>
Scalar curvature(const ModelParams<Scalar>& p, SpinBranch b, ScaledAmplitude<Scalar> gb) {
  const Scalar a = level_splitting(p, gb);
  return 2 * (p.omega - 6 * p.zeta * p.zeta * gb.squared() / p.omega_b +
              branch_sign<Scalar>(b) * p.g * p.g * p.omega_a * p.omega_a / (a * a * a));
}

/// Closed-form solution of the spin-coherent-state eigen conditions.
///
/// The phase convention eta = 0, phi = pi makes A the positive root for both
/// branches; the branch only selects +-n. The phonon displacement follows from
/// d E / d rho = 0 with cos xi = 1.
template <typename Scalar>
ScsAngles<Scalar> scs_angles(const ModelParams<Scalar>& p, ScaledAmplitude<Scalar> gb,
                             SpinBranch /*branch*/) {
  using std::atan2;
  ScsAngles<Scalar> a;
  a.theta = atan2(2 * p.g * gb.value(), p.omega_a);
  a.phi = std::numbers::pi_v<Scalar>;
  a.eta = 0;
  a.xi = 0;
  a.rho_bar = p.zeta * gb.squared() / p.omega_b;
  return a;
}

/// A(alpha, theta, phi) evaluated from explicit angles.
template <typename Scalar>
Scalar splitting_from_angles(const ModelParams<Scalar>& p, ScaledAmplitude<Scalar> gb,
                             const ScsAngles<Scalar>& a) {
  using std::cos;
  using std::sin;
  return p.omega_a * cos(a.theta) - 2 * p.g * gb.value() * cos(a.eta) * cos(a.phi) * sin(a.theta);
}

template <typename Scalar>
VariationalPoint<Scalar> make_point(const ModelParams<Scalar>& p, SpinBranch b,
                                    ScaledAmplitude<Scalar> gb, Scalar tol_curv) {
  VariationalPoint<Scalar> pt;
  pt.amplitude = gb;
  pt.branch = b;
  pt.energy = scaled_energy(p, b, gb);
  pt.curvature = curvature(p, b, gb);
  pt.stability = classify_curvature(pt.curvature, tol_curv);
  return pt;
}

template <typename Scalar>
Observables<Scalar> observables_at(const ModelParams<Scalar>& p,
                                   const VariationalPoint<Scalar>& pt) {
  Observables<Scalar> o;
  o.n_p = pt.amplitude.squared();
  o.delta_n_a = branch_sign<Scalar>(pt.branch) * p.omega_a / (2 * level_splitting(p, pt.amplitude));
  o.n_b = p.zeta * p.zeta * o.n_p * o.n_p / (p.omega_b * p.omega_b);
  o.energy = scaled_energy(p, pt.branch, pt.amplitude);
  return o;
}

}  // namespace optodicke
