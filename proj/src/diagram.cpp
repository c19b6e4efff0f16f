#include "optodicke/diagram.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "optodicke/parallel.hpp"

namespace optodicke {

const char* to_string(BranchTag tag) {
  switch (tag) {
    case BranchTag::NMinus: return "N-";
    case BranchTag::NPlus: return "N+";
    case BranchTag::GammaSMinus: return "gs-";
    case BranchTag::GammaUsMinus: return "gus-";
    case BranchTag::GammaUsPlus: return "gus+";
  }
  return "?";
}

void SweepSpec::validate() const {
  base.validate();
  if (!(g_min < g_max)) throw std::invalid_argument("sweep requires g_min < g_max");
  if (g_min < 0) throw std::invalid_argument("sweep requires g_min >= 0");
  if (g_steps < 2) throw std::invalid_argument("sweep requires g_steps >= 2");
}

void GridSpec::validate() const {
  base.validate();
  if (g_steps < 1 || zeta_steps < 1) throw std::invalid_argument("grid step counts must be >= 1");
  if (!(g_min <= g_max) || !(zeta_min <= zeta_max))
    throw std::invalid_argument("grid ranges must be ordered");
  if (g_min < 0 || zeta_min < 0) throw std::invalid_argument("grid ranges must be >= 0");
}

const BranchEntry* SweepRow::find(BranchTag tag) const {
  for (const auto& b : branches)
    if (b.tag == tag) return &b;
  return nullptr;
}

std::vector<BranchEntry> classify_branches(const ModelParams<double>& params,
                                           const SolverConfig& config) {
  std::vector<BranchEntry> slots(std::size(kAllBranchTags));
  std::vector<bool> used(slots.size(), false);
  auto put = [&](BranchTag tag, const VariationalPoint<double>& pt) {
    const auto k = static_cast<std::size_t>(tag);
    if (used[k]) return false;
    slots[k] = {tag, observables_at(params, pt), pt.stability};
    used[k] = true;
    return true;
  };

  const auto normal = find_roots(params, SpinBranch::Normal, config);
  const auto inverted = find_roots(params, SpinBranch::Inverted, config);
  put(BranchTag::NMinus, normal.zero_point);
  put(BranchTag::NPlus, inverted.zero_point);
  for (const auto& r : normal.roots) {
    if (r.stability == Stability::Unstable || !put(BranchTag::GammaSMinus, r))
      put(BranchTag::GammaUsMinus, r);
  }
  for (const auto& r : inverted.roots) put(BranchTag::GammaUsPlus, r);

  std::vector<BranchEntry> out;
  for (std::size_t k = 0; k < slots.size(); ++k)
    if (used[k]) out.push_back(slots[k]);
  return out;
}

std::vector<SweepRow> sweep_g(const SweepSpec& spec, const SolverConfig& config, int workers) {
  spec.validate();
  config.validate();
  const auto gs = linspace(spec.g_min, spec.g_max, spec.g_steps);
  std::vector<SweepRow> rows(gs.size());
  parallel_for(gs.size(), workers, [&](std::size_t i) {
    ModelParams<double> p = spec.base;
    p.g = gs[i];
    try {
      const auto ground = ground_state(p, config);
      rows[i] = {p.g, ground.phase, ground.observables, classify_branches(p, config)};
    } catch (const DegenerateBracket& e) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "sweep failed at g=%.9g: ", p.g);
      throw DegenerateBracket(buf + std::string(e.what()));
    }
  });
  return rows;
}

namespace {

PhaseLabel label_at(const ModelParams<double>& base, double g, double zeta,
                    const SolverConfig& config) {
  ModelParams<double> p = base;
  p.g = g;
  p.zeta = zeta;
  return ground_state(p, config).phase;
}

}  // namespace

PhaseGrid phase_grid(const GridSpec& spec, const SolverConfig& config, int workers,
                     double boundary_tol) {
  spec.validate();
  config.validate();
  const auto gs = linspace(spec.g_min, spec.g_max, spec.g_steps);
  const auto zetas = linspace(spec.zeta_min, spec.zeta_max, spec.zeta_steps);
  const std::size_t ng = gs.size();

  PhaseGrid grid;
  grid.cells.resize(ng * zetas.size());
  parallel_for(grid.cells.size(), workers, [&](std::size_t k) {
    const double zeta = zetas[k / ng];
    const double g = gs[k % ng];
    grid.cells[k] = {g, zeta, label_at(spec.base, g, zeta, config)};
  });

  std::vector<std::vector<BoundarySample>> per_row(zetas.size());
  parallel_for(zetas.size(), workers, [&](std::size_t r) {
    for (std::size_t i = 0; i + 1 < ng; ++i) {
      const auto& left = grid.cells[r * ng + i];
      const auto& right = grid.cells[r * ng + i + 1];
      if (left.phase == right.phase) continue;
      double lo = left.g;
      double hi = right.g;
      while (hi - lo > boundary_tol) {
        const double mid = 0.5 * (lo + hi);
        (label_at(spec.base, mid, left.zeta, config) == left.phase ? lo : hi) = mid;
      }
      per_row[r].push_back({left.zeta, 0.5 * (lo + hi), left.phase, right.phase});
    }
  });
  for (auto& row : per_row) grid.boundaries.insert(grid.boundaries.end(), row.begin(), row.end());
  return grid;
}

std::vector<BoundaryRow> boundary_trace(const GridSpec& spec, const SolverConfig& config,
                                        int workers) {
  spec.validate();
  config.validate();
  const auto zetas = linspace(spec.zeta_min, spec.zeta_max, spec.zeta_steps);
  std::vector<BoundaryRow> rows(zetas.size());
  parallel_for(zetas.size(), workers, [&](std::size_t i) {
    ModelParams<double> p = spec.base;
    p.zeta = zetas[i];
    rows[i].zeta = p.zeta;
    rows[i].g_c = critical_coupling(p);
    try {
      if (const auto tp = turning_point(p, config)) rows[i].g_t = tp->g_t;
    } catch (const NotFound&) {
    }
  });
  return rows;
}

}  // namespace optodicke
