#include "optodicke/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace optodicke {

namespace {

using Params = ModelParams<double>;

int sign_of(double v) { return (v > 0) - (v < 0); }

std::string describe(const Params& p) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "omega=%.9g omega_a=%.9g omega_b=%.9g g=%.9g zeta=%.9g", p.omega,
                p.omega_a, p.omega_b, p.g, p.zeta);
  return buf;
}

// Bisection for a sign change of p in x; sign_lo is the sign of p just right of lo.
double bisect_root(const Params& p, SpinBranch b, double lo, double hi, int sign_lo,
                   double tol_gamma) {
  for (int it = 0; it < 256; ++it) {
    if (std::sqrt(hi) - std::sqrt(lo) <= tol_gamma) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int s = sign_of(detail::poly_x(p, b, mid));
    if (s == 0) return mid;
    (s == sign_lo ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Zero of d p / d x on [lo, hi], bisected to full precision.
double bisect_extremum(const Params& p, SpinBranch b, double lo, double hi) {
  const int sign_lo = sign_of(detail::poly_slope_x(p, b, lo));
  for (int it = 0; it < 256; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int s = sign_of(detail::poly_slope_x(p, b, mid));
    if (s == 0) return mid;
    (s == sign_lo ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Upper end of the scan: p <= omega - 2 zeta^2 x / omega_b + max(s, 0) g^2 / omega_a.
double scan_limit(const Params& p, SpinBranch b) {
  const double lift = b == SpinBranch::Inverted ? p.g * p.g / p.omega_a : 0.0;
  return 1.2 * (p.omega + lift) * p.omega_b / (2 * p.zeta * p.zeta);
}

std::vector<double> scan_roots(const Params& p, SpinBranch b, const SolverConfig& cfg) {
  std::vector<double> roots;
  const int n = cfg.scan_points;
  const double x_max = scan_limit(p, b);
  const double h = x_max / n;

  auto x_at = [&](int i) { return i == n ? x_max : h * i; };
  double xa = 0.0;
  double pa = detail::poly_x(p, b, xa);
  double da = detail::poly_slope_x(p, b, xa);
  for (int i = 0; i < n; ++i) {
    const double xb = x_at(i + 1);
    const double pb = detail::poly_x(p, b, xb);
    const double db = detail::poly_slope_x(p, b, xb);
    int sa = sign_of(pa);
    // x = 0 is the zero-photon point; a root there is not reported, but the
    // direction in which p leaves zero still matters for the first cell.
    if (i == 0 && sa == 0) sa = sign_of(da);
    if (i > 0 && pa == 0.0) roots.push_back(xa);
    const int sb = sign_of(pb);

    if (sa != 0 && sb != 0 && sa != sb) {
      roots.push_back(bisect_root(p, b, xa, xb, sa, cfg.tol_root));
    } else if (sa != 0 && sa == sb && sign_of(da) * sign_of(db) < 0) {
      const double xe = bisect_extremum(p, b, xa, xb);
      const double pe = detail::poly_x(p, b, xe);
      const double band = 64 * std::numeric_limits<double>::epsilon() * detail::poly_scale_x(p, xe);
      if (std::abs(pe) <= band) {
        char buf[128];
        std::snprintf(buf, sizeof buf, " (double root at gamma_bar=%.9g)", std::sqrt(xe));
        throw DegenerateBracket("near-double root not separable at " + describe(p) + buf);
      }
      if (sign_of(pe) != sa) {
        roots.push_back(bisect_root(p, b, xa, xe, sa, cfg.tol_root));
        roots.push_back(bisect_root(p, b, xe, xb, sign_of(pe), cfg.tol_root));
      }
    }
    xa = xb;
    pa = pb;
    da = db;
  }
  return roots;
}

bool normal_has_stable_root(const Params& p, const SolverConfig& cfg, bool& degenerate) {
  degenerate = false;
  try {
    const RootSet rs = find_roots(p, SpinBranch::Normal, cfg);
    return std::any_of(rs.roots.begin(), rs.roots.end(),
                       [](const auto& r) { return r.stability == Stability::Stable; });
  } catch (const DegenerateBracket&) {
    degenerate = true;
    return false;
  }
}

}  // namespace

const char* to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::NP_Nminus: return "NP_Nminus";
    case PhaseLabel::SP: return "SP";
    case PhaseLabel::NP_Nplus: return "NP_Nplus";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(tol_root > 0)) throw std::invalid_argument("tol_root must be > 0");
  if (!(tol_curv > 0)) throw std::invalid_argument("tol_curv must be > 0");
  if (!(tol_gt > 0)) throw std::invalid_argument("tol_gt must be > 0");
  if (scan_points < 100) throw std::invalid_argument("scan_points must be >= 100");
}

double critical_coupling(const ModelParams<double>& params) {
  return std::sqrt(params.omega * params.omega_a);
}

VariationalPoint<double> zero_photon_point(const ModelParams<double>& params, SpinBranch branch,
                                           const SolverConfig& config) {
  return make_point(params, branch, ScaledAmplitude(0.0), config.tol_curv);
}

RootSet find_roots(const ModelParams<double>& params, SpinBranch branch,
                   const SolverConfig& config) {
  params.validate();
  config.validate();
  RootSet rs;
  rs.branch = branch;
  rs.zero_point = zero_photon_point(params, branch, config);

  std::vector<double> xs;
  if (params.zeta == 0.0) {
    // p_+ > 0 everywhere; p_- is increasing with a single root above g_c.
    if (branch == SpinBranch::Normal && params.g > critical_coupling(params)) {
      const double g2 = params.g * params.g;
      const double x = g2 / (4 * params.omega * params.omega) -
                       params.omega_a * params.omega_a / (4 * g2);
      if (x > 0) xs.push_back(x);
    }
  } else {
    xs = scan_roots(params, branch, config);
  }

  std::sort(xs.begin(), xs.end());
  for (double x : xs)
    rs.roots.push_back(
        make_point(params, branch, ScaledAmplitude<double>::from_squared(x), config.tol_curv));
  return rs;
}

std::optional<TurningPoint> turning_point(const ModelParams<double>& params,
                                          const SolverConfig& config) {
  params.validate();
  config.validate();
  if (params.zeta == 0.0) return std::nullopt;

  Params p = params;
  const double gc = critical_coupling(p);
  bool degenerate = false;
  auto stable_at = [&](double g) {
    p.g = g;
    return normal_has_stable_root(p, config, degenerate);
  };

  // Lower bracket: a coupling just above g_c that still has a stable root.
  double g_lo = 0.0;
  for (double delta = 1e-3 * gc; delta >= 1e-13 * gc; delta *= 0.5) {
    if (stable_at(gc + delta)) {
      g_lo = gc + delta;
      break;
    }
  }
  if (g_lo == 0.0) throw NotFound("no superradiant window above g_c at " + describe(params));

  double g_hi = 2 * gc;
  for (int k = 0; stable_at(g_hi); ++k) {
    if (k == 60) throw NotFound("no turning point below g=" + std::to_string(g_hi));
    g_lo = g_hi;
    g_hi *= 2;
  }
  if (degenerate) g_lo = g_hi;

  while (g_hi - g_lo > config.tol_gt) {
    const double mid = 0.5 * (g_lo + g_hi);
    const bool stable = stable_at(mid);
    if (degenerate) {
      g_lo = g_hi = mid;
      break;
    }
    (stable ? g_lo : g_hi) = mid;
  }

  TurningPoint tp;
  tp.g_t = 0.5 * (g_lo + g_hi);
  p.g = tp.g_t;
  // p_- is concave in x, so its maximum is the merged root.
  double x_e = 0.0;
  if (detail::poly_slope_x(p, SpinBranch::Normal, 0.0) > 0) {
    double x_hi = scan_limit(p, SpinBranch::Normal);
    while (detail::poly_slope_x(p, SpinBranch::Normal, x_hi) > 0) x_hi *= 2;
    x_e = bisect_extremum(p, SpinBranch::Normal, 0.0, x_hi);
  }
  const auto amp = ScaledAmplitude<double>::from_squared(x_e);
  tp.fold_amplitude = amp.value();
  tp.residual = extremum_polynomial(p, SpinBranch::Normal, amp);
  tp.slope = extremum_polynomial_slope(p, SpinBranch::Normal, amp);
  return tp;
}

double sp_window(const ModelParams<double>& params, const SolverConfig& config) {
  try {
    const auto tp = turning_point(params, config);
    if (!tp) return std::numeric_limits<double>::infinity();
    return tp->g_t - critical_coupling(params);
  } catch (const NotFound&) {
    return 0.0;
  }
}

SpClosure sp_closure(const ModelParams<double>& params, const SolverConfig& config,
                     double width_tol) {
  if (!(width_tol > 0)) throw std::invalid_argument("width_tol must be > 0");
  Params p = params;
  p.g = 0.0;
  p.zeta = 0.0;
  p.validate();

  SpClosure out;
  out.width_tol = width_tol;
  out.zeta_estimate = std::sqrt(p.omega_b * p.omega * p.omega / p.omega_a);

  auto closed = [&](double zeta) {
    p.zeta = zeta;
    return sp_window(p, config) <= width_tol;
  };

  double hi = out.zeta_estimate;
  for (int k = 0; !closed(hi); ++k) {
    if (k == 60) throw NotFound("superradiant window does not close at " + describe(p));
    hi *= 1.5;
  }
  double lo = 0.5 * out.zeta_estimate;
  while (closed(lo)) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-9 * out.zeta_estimate) {
      out.zeta_star = hi;
      return out;
    }
  }
  while (hi - lo > 1e-7 * out.zeta_estimate) {
    const double mid = 0.5 * (lo + hi);
    (closed(mid) ? hi : lo) = mid;
  }
  out.zeta_star = hi;
  return out;
}

GroundState ground_state(const ModelParams<double>& params, const SolverConfig& config) {
  params.validate();
  config.validate();

  std::vector<VariationalPoint<double>> candidates;
  const auto n_zero = zero_photon_point(params, SpinBranch::Normal, config);
  // Exactly at g_c the zero-photon point is flat to second order and is a
  // minimum iff p_- rises away from it.
  if (n_zero.stability == Stability::Stable ||
      (n_zero.stability == Stability::Marginal &&
       detail::poly_slope_x(params, SpinBranch::Normal, 0.0) > 0))
    candidates.push_back(n_zero);

  const auto i_zero = zero_photon_point(params, SpinBranch::Inverted, config);
  if (i_zero.stability == Stability::Stable) candidates.push_back(i_zero);

  for (SpinBranch b : {SpinBranch::Normal, SpinBranch::Inverted}) {
    try {
      for (const auto& r : find_roots(params, b, config).roots)
        if (r.stability == Stability::Stable) candidates.push_back(r);
    } catch (const DegenerateBracket&) {
      // A merged root is an inflection point, never a minimum.
    }
  }

  if (candidates.empty()) throw NotFound("no stable stationary point at " + describe(params));

  const VariationalPoint<double>* best = &candidates.front();
  for (const auto& c : candidates) {
    const double diff = c.energy - best->energy;
    if (diff < -1e-12 ||
        (std::abs(diff) <= 1e-12 && c.amplitude.value() < best->amplitude.value()))
      best = &c;
  }

  GroundState gs;
  gs.point = *best;
  gs.observables = observables_at(params, gs.point);
  if (best->amplitude.value() > 0)
    gs.phase = PhaseLabel::SP;
  else
    gs.phase = best->branch == SpinBranch::Normal ? PhaseLabel::NP_Nminus : PhaseLabel::NP_Nplus;
  return gs;
}

}  // namespace optodicke
