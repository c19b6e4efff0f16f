#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "optodicke/solver.hpp"

using namespace optodicke;

namespace {

ModelParams<double> params(double g, double zeta = 0, double omega_b = 10, double omega = 1,
                           double omega_a = 1) {
  ModelParams<double> p;
  p.omega = omega;
  p.omega_a = omega_a;
  p.omega_b = omega_b;
  p.g = g;
  p.zeta = zeta;
  return p;
}

int stable_count(const RootSet& rs) {
  int n = 0;
  for (const auto& r : rs.roots) n += r.stability == Stability::Stable;
  return n;
}

}  // namespace

TEST_CASE("critical coupling") {
  CHECK(critical_coupling(params(0)) == 1.0);
  CHECK(critical_coupling(params(0, 0, 10, 4, 1)) == 2.0);
  CHECK(critical_coupling(params(0, 0, 10, 0.8, 1.2)) ==
        doctest::Approx(std::sqrt(0.96)).epsilon(1e-15));
}

TEST_CASE("zero photon points") {
  auto pt = zero_photon_point(params(0.8), SpinBranch::Normal);
  CHECK(pt.stability == Stability::Stable);
  CHECK(pt.energy == -0.5);
  CHECK(zero_photon_point(params(1.5), SpinBranch::Normal).stability == Stability::Unstable);
  pt = zero_photon_point(params(3), SpinBranch::Inverted);
  CHECK(pt.stability == Stability::Stable);
  CHECK(pt.energy == 0.5);
  CHECK(zero_photon_point(params(1), SpinBranch::Normal).stability == Stability::Marginal);
}

TEST_CASE("roots") {
  SUBCASE("pure Dicke limit") {
    const auto rs = find_roots(params(1.5), SpinBranch::Normal);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].stability == Stability::Stable);
    CHECK(rs.roots[0].amplitude.squared() ==
          doctest::Approx(2.25 / 4 - 1 / (4 * 2.25)).epsilon(1e-12));
    CHECK(find_roots(params(0.9), SpinBranch::Normal).roots.empty());
    CHECK(find_roots(params(1.5), SpinBranch::Inverted).roots.empty());
  }

  SUBCASE("two roots on the normal branch") {
    const auto p = params(1.5, 1);
    const auto rs = find_roots(p, SpinBranch::Normal);
    const auto ref = oracle::sign_scan_roots(1, 1, 10, 1.5, 1, -1);
    REQUIRE(rs.roots.size() == 2);
    REQUIRE(ref.size() == 2);
    CHECK(rs.roots[0].stability == Stability::Stable);
    CHECK(rs.roots[1].stability == Stability::Unstable);
    CHECK(rs.roots[0].amplitude.squared() == doctest::Approx(0.622).epsilon(2e-3));
    CHECK(rs.roots[1].amplitude.squared() == doctest::Approx(2.800).epsilon(2e-3));
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(rs.roots[i].amplitude.value() - ref[i].gamma_bar) < 1e-9);
    SolverConfig cfg;
    for (const auto& r : rs.roots) {
      const double slope = extremum_polynomial_slope(p, SpinBranch::Normal, r.amplitude);
      CHECK(std::abs(extremum_polynomial(p, SpinBranch::Normal, r.amplitude)) <=
            10 * cfg.tol_root * std::abs(slope) + 1e-14);
    }
  }

  SUBCASE("one unstable root below the critical coupling") {
    const auto rs = find_roots(params(0.8, 1), SpinBranch::Normal);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].stability == Stability::Unstable);
  }

  SUBCASE("inverted branch never has a stable root") {
    const auto p = params(1.5, 1);
    const auto rs = find_roots(p, SpinBranch::Inverted);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].stability == Stability::Unstable);
    const auto ref = oracle::sign_scan_roots(1, 1, 10, 1.5, 1, +1);
    REQUIRE(ref.size() == 1);
    CHECK(std::abs(rs.roots[0].amplitude.value() - ref[0].gamma_bar) < 1e-9);
  }
}

TEST_CASE("roots agree with a dense sign scan on a 50x50 grid") {
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double g = 0.06 * (i + 1), zeta = 0.06 * (j + 1);
      const auto p = params(g, zeta);
      for (auto b : {SpinBranch::Normal, SpinBranch::Inverted}) {
        const auto rs = find_roots(p, b);
        const auto ref = oracle::sign_scan_roots(1, 1, 10, g, zeta, b == SpinBranch::Normal ? -1 : 1);
        REQUIRE_MESSAGE(rs.roots.size() == ref.size(), "g=" << g << " zeta=" << zeta);
        for (std::size_t k = 0; k < ref.size(); ++k) {
          CHECK(std::abs(rs.roots[k].amplitude.value() - ref[k].gamma_bar) < 1e-6);
          // stability follows the slope of p at the root
          CHECK((rs.roots[k].stability == Stability::Stable) == (ref[k].slope_sign > 0));
        }
        // ordering and counts
        for (std::size_t k = 1; k < rs.roots.size(); ++k)
          CHECK(rs.roots[k - 1].amplitude.value() < rs.roots[k].amplitude.value());
        CHECK(rs.roots.size() <= (b == SpinBranch::Normal ? 2u : 1u));
        CHECK(stable_count(rs) <= 1);
        ++checked;
      }
    }
  }
  CHECK(checked == 5000);
}

TEST_CASE("a rounding-level double root is reported as degenerate") {
  // Bisect g onto the fold using only the vertex value of p_- (fold oracle)
  // until the bracket is two adjacent doubles.
  const double zeta = 1;
  auto vertex = [&](long double g) {
    const long double a = std::cbrt(10 * g * g * g * g / ((long double)zeta * zeta));
    const long double x = (a * a - 1) / (4 * g * g);
    return 1 - 2 * zeta * zeta * x / 10 - g * g / a;
  };
  double lo = 1.7, hi = 1.8;
  REQUIRE(vertex(lo) > 0);
  REQUIRE(vertex(hi) < 0);
  while (std::nextafter(lo, hi) < hi) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (vertex(mid) > 0 ? lo : hi) = mid;
  }
  CHECK_THROWS_AS(find_roots(params(lo, zeta), SpinBranch::Normal), DegenerateBracket);
  CHECK(std::abs(lo - oracle::fold_turning_point(1, 1, 10, zeta)) < 1e-12);
  // away from the fold the pair is cleanly separated or absent
  CHECK(find_roots(params(lo - 1e-6, zeta), SpinBranch::Normal).roots.size() == 2);
  CHECK(find_roots(params(hi + 1e-6, zeta), SpinBranch::Normal).roots.empty());
}

TEST_CASE("turning point") {
  auto tp = turning_point(params(0, 1.0));
  REQUIRE(tp);
  CHECK(tp->g_t == doctest::Approx(1.763).epsilon(0.005 / 1.763));
  CHECK(std::abs(tp->g_t - oracle::fold_turning_point(1, 1, 10, 1.0)) < 1e-5);
  CHECK(std::abs(tp->residual) < 1e-6);
  CHECK(tp->fold_amplitude > 0);

  tp = turning_point(params(0, 1.203));
  REQUIRE(tp);
  CHECK(tp->g_t == doctest::Approx(1.500).epsilon(0.005 / 1.5));

  tp = turning_point(params(0, 2.0));
  REQUIRE(tp);
  CHECK(tp->g_t == doctest::Approx(1.09).epsilon(0.01));
  CHECK(std::abs(tp->g_t - oracle::fold_turning_point(1, 1, 10, 2.0)) < 1e-5);

  CHECK_FALSE(turning_point(params(0, 0)).has_value());
  CHECK_THROWS_AS(turning_point(params(0, 3.5)), NotFound);
  CHECK(std::isinf(sp_window(params(0, 0))));
  CHECK(sp_window(params(0, 3.5)) == 0.0);

  SUBCASE("stable root count changes across the fold") {
    SolverConfig cfg;
    for (double zeta : {0.5, 1.0, 2.0, 2.9}) {
      const auto t = turning_point(params(0, zeta), cfg);
      REQUIRE(t);
      CHECK(stable_count(find_roots(params(t->g_t - cfg.tol_gt, zeta), SpinBranch::Normal, cfg)) == 1);
      CHECK(stable_count(find_roots(params(t->g_t + cfg.tol_gt, zeta), SpinBranch::Normal, cfg)) == 0);
    }
  }

  SUBCASE("monotone in the photon-phonon coupling") {
    double prev = std::numeric_limits<double>::infinity();
    for (double zeta : {0.5, 1.0, 1.5, 2.0, 2.5}) {
      const double gt = turning_point(params(0, zeta))->g_t;
      CHECK(gt < prev);
      CHECK(std::abs(gt - oracle::fold_turning_point(1, 1, 10, zeta)) < 1e-5);
      prev = gt;
    }
  }

  SUBCASE("other frequencies") {
    for (auto [w, wa, wb, z] : {std::tuple{0.8, 1.2, 10.0, 1.0}, std::tuple{1.5, 0.7, 40.0, 3.0}}) {
      const auto t = turning_point(params(0, z, wb, w, wa));
      REQUIRE(t);
      CHECK(std::abs(t->g_t - oracle::fold_turning_point(w, wa, wb, z)) < 1e-5);
    }
  }
}

TEST_CASE("closure of the superradiant window") {
  const auto c1 = sp_closure(params(0), {}, 0.01);
  CHECK(c1.zeta_estimate == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
  CHECK(c1.zeta_star <= 3.0);
  CHECK(sp_window(params(0, c1.zeta_star)) <= 0.01);
  CHECK(sp_window(params(0, c1.zeta_star * 0.99)) > 0.01);

  const auto c2 = sp_closure(params(0), {}, 1e-3);
  CHECK(c2.zeta_star == doctest::Approx(3.0).epsilon(0.005));
  CHECK(c2.zeta_star < c2.zeta_estimate);

  CHECK(sp_window(params(0, 3.0)) > 0);
  CHECK(sp_window(params(0, 3.0)) <= 0.01);
  CHECK(sp_window(params(0, std::sqrt(10.0) + 0.01)) == 0.0);

  double prev = 0;
  for (double wb : {10.0, 40.0, 90.0}) {
    const auto c = sp_closure(params(0, 0, wb), {}, 1e-3);
    CHECK(c.zeta_star > prev);
    CHECK(c.zeta_estimate == doctest::Approx(std::sqrt(wb)).epsilon(1e-15));
    prev = c.zeta_star;
  }
}

TEST_CASE("ground state") {
  auto gs = ground_state(params(0.8, 1));
  CHECK(gs.phase == PhaseLabel::NP_Nminus);
  CHECK(gs.observables.energy == -0.5);

  gs = ground_state(params(1.5, 1));
  CHECK(gs.phase == PhaseLabel::SP);
  CHECK(gs.observables.energy == doctest::Approx(-0.701).epsilon(1e-3));

  gs = ground_state(params(2.0, 1));
  CHECK(gs.phase == PhaseLabel::NP_Nplus);
  CHECK(gs.observables.energy == 0.5);
  CHECK(gs.observables.delta_n_a == 0.5);

  SUBCASE("exactly at the critical coupling") {
    gs = ground_state(params(1.0, 0));
    CHECK(gs.phase == PhaseLabel::NP_Nminus);
    CHECK(gs.observables.energy == -0.5);
    gs = ground_state(params(1.0, 1));
    CHECK(gs.phase == PhaseLabel::NP_Nminus);
  }

  SUBCASE("amplitude emerges continuously above the critical coupling") {
    double prev = std::numeric_limits<double>::infinity();
    for (double d : {1e-2, 1e-3, 1e-4}) {
      const auto s = ground_state(params(1 + d, 1));
      REQUIRE(s.phase == PhaseLabel::SP);
      CHECK(s.observables.n_p < prev);
      CHECK(s.observables.n_p < 2 * d);
      prev = s.observables.n_p;
    }
  }

  SUBCASE("energy ordering and first-order jump") {
    const double gt = turning_point(params(0, 1))->g_t;
    for (double g = 1.02; g < gt - 1e-3; g += 0.05) {
      const auto s = ground_state(params(g, 1));
      CHECK(s.phase == PhaseLabel::SP);
      CHECK(s.observables.energy < 0.5);
    }
    const auto below = ground_state(params(gt - 1e-4, 1));
    const auto above = ground_state(params(gt + 1e-4, 1));
    CHECK(below.phase == PhaseLabel::SP);
    CHECK(above.phase == PhaseLabel::NP_Nplus);
    CHECK(above.observables.energy - below.observables.energy > 0.5);
  }

  SUBCASE("pure Dicke limit") {
    for (double g : {0.3, 0.99, 1.01, 2.0, 3.0}) {
      const auto s = ground_state(params(g, 0));
      if (g < 1) {
        CHECK(s.phase == PhaseLabel::NP_Nminus);
      } else {
        CHECK(s.phase == PhaseLabel::SP);
        CHECK(s.observables.n_p == doctest::Approx(0.25 * (g * g - 1 / (g * g))).epsilon(1e-12));
        CHECK(s.observables.energy == doctest::Approx(-0.25 * (g * g + 1 / (g * g))).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("configuration validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tol_root = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.scan_points = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  auto p = params(1);
  p.omega_b = -1;
  CHECK_THROWS_AS(find_roots(p, SpinBranch::Normal), std::invalid_argument);
}
