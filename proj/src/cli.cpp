#include "optodicke/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "optodicke/diagram.hpp"
#include "optodicke/parallel.hpp"
#include "optodicke/rabi_ed.hpp"
#include "optodicke/table.hpp"

namespace optodicke::cli {

namespace {

constexpr const char* kUnitsNote = "all quantities in units of omega_a";

using json = nlohmann::json;

double number_at(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

int integer_at(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<int>();
}

std::string string_at(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

Format parse_format(const std::string& text, const std::string& key) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw ConfigError(key, "format must be csv or json");
}

void assign_scalar_or_range(const std::variant<double, Range>& v, double& scalar,
                            std::optional<Range>& range) {
  if (const auto* d = std::get_if<double>(&v)) {
    scalar = *d;
    range.reset();
  } else {
    range = std::get<Range>(v);
    scalar = range->min;
  }
}

std::variant<double, Range> scalar_or_range_at(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_scalar_or_range(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  }
  throw ConfigError(key, "expected a number or \"min:max:count\"");
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

void check_range(const Range& r, const std::string& key) {
  if (!std::isfinite(r.min) || !std::isfinite(r.max)) throw ConfigError(key, "range must be finite");
  if (r.count < 1) throw ConfigError(key, "range count must be >= 1");
  if (r.min > r.max) throw ConfigError(key, "range must satisfy min <= max");
  if (r.min < 0) throw ConfigError(key, "range must be >= 0");
}

// ---------------------------------------------------------------------------
// Tables

Table make_table(std::vector<std::string> columns) {
  Table t;
  t.note = kUnitsNote;
  t.columns = std::move(columns);
  return t;
}

Cell num(double v) { return v; }
Cell text(const char* s) { return std::string(s); }

Range g_range_or(const RunConfig& cfg, Range fallback) {
  if (cfg.g_range) return *cfg.g_range;
  return fallback;
}

SpinBranch branch_of(BranchTag tag) {
  return tag == BranchTag::NPlus || tag == BranchTag::GammaUsPlus ? SpinBranch::Inverted
                                                                  : SpinBranch::Normal;
}

Table roots_table(const RunConfig& cfg) {
  if (cfg.g_range && cfg.g_range->count != 1) throw ConfigError("g", "roots requires a single g");
  if (cfg.zeta_range && cfg.zeta_range->count != 1)
    throw ConfigError("zeta", "roots requires a single zeta");
  auto t = make_table({"tag", "branch", "gamma_bar", "n_p", "delta_n_a", "n_b", "energy",
                       "curvature", "stability"});
  for (const auto& e : classify_branches(cfg.params, cfg.solver)) {
    const auto branch = branch_of(e.tag);
    const auto amp = ScaledAmplitude<double>::from_squared(e.observables.n_p);
    t.rows.push_back({text(to_string(e.tag)), text(to_string(branch)), num(amp.value()),
                      num(e.observables.n_p), num(e.observables.delta_n_a), num(e.observables.n_b),
                      num(e.observables.energy), num(curvature(cfg.params, branch, amp)),
                      text(to_string(e.stability))});
  }
  return t;
}

Table sweep_table(const RunConfig& cfg) {
  if (cfg.zeta_range && cfg.zeta_range->count != 1)
    throw ConfigError("zeta", "sweep requires a single zeta");
  const Range r = g_range_or(cfg, {0, 3, 301});
  SweepSpec spec{cfg.params, r.min, r.max, r.count};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("g", e.what());
  }
  std::vector<std::string> cols = {"g",         "phase",     "np_ground",
                                   "dna_ground", "nb_ground", "eps_ground"};
  for (BranchTag tag : kAllBranchTags) {
    const std::string s = to_string(tag);
    cols.push_back("np_" + s);
    cols.push_back("eps_" + s);
    cols.push_back("stab_" + s);
  }
  auto t = make_table(std::move(cols));
  for (const auto& row : sweep_g(spec, cfg.solver, cfg.workers)) {
    std::vector<Cell> cells = {num(row.g),           text(to_string(row.phase)),
                               num(row.ground.n_p),  num(row.ground.delta_n_a),
                               num(row.ground.n_b),  num(row.ground.energy)};
    for (BranchTag tag : kAllBranchTags) {
      if (const auto* b = row.find(tag)) {
        cells.push_back(num(b->observables.n_p));
        cells.push_back(num(b->observables.energy));
        cells.push_back(text(to_string(b->stability)));
      } else {
        cells.insert(cells.end(), 3, Cell{});
      }
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

GridSpec grid_spec(const RunConfig& cfg, Range g_fallback, Range zeta_fallback) {
  const Range g = g_range_or(cfg, g_fallback);
  const Range z = cfg.zeta_range ? *cfg.zeta_range : zeta_fallback;
  return {cfg.params, g.min, g.max, g.count, z.min, z.max, z.count};
}

std::pair<Table, Table> phase_diagram_tables(const RunConfig& cfg) {
  const auto spec = grid_spec(cfg, {0, 3, 61}, {0, 3, 31});
  const auto grid = phase_grid(spec, cfg.solver, cfg.workers);
  auto cells = make_table({"g", "zeta", "phase"});
  for (const auto& c : grid.cells) cells.rows.push_back({num(c.g), num(c.zeta), text(to_string(c.phase))});
  auto bounds = make_table({"zeta", "g", "phase_below", "phase_above"});
  for (const auto& b : grid.boundaries)
    bounds.rows.push_back(
        {num(b.zeta), num(b.g), text(to_string(b.below)), text(to_string(b.above))});
  return {std::move(cells), std::move(bounds)};
}

Table turning_point_table(const RunConfig& cfg) {
  auto t = make_table({"zeta", "g_c", "g_t", "window", "fold_gamma_bar", "residual"});
  if (cfg.zeta_range) {
    GridSpec spec = grid_spec(cfg, {0, 0, 1}, *cfg.zeta_range);
    spec.g_min = spec.g_max = 0;
    spec.g_steps = 1;
    for (const auto& row : boundary_trace(spec, cfg.solver, cfg.workers)) {
      std::vector<Cell> cells = {num(row.zeta), num(row.g_c)};
      if (row.g_t)
        cells.insert(cells.end(), {num(*row.g_t), num(*row.g_t - row.g_c)});
      else
        cells.insert(cells.end(), {Cell{}, num(0)});
      cells.insert(cells.end(), 2, Cell{});
      t.rows.push_back(std::move(cells));
    }
    return t;
  }
  const double gc = critical_coupling(cfg.params);
  const auto tp = turning_point(cfg.params, cfg.solver);
  if (tp)
    t.rows.push_back({num(cfg.params.zeta), num(gc), num(tp->g_t), num(tp->g_t - gc),
                      num(tp->fold_amplitude), num(tp->residual)});
  else
    t.rows.push_back({num(cfg.params.zeta), num(gc), Cell{}, Cell{}, Cell{}, Cell{}});
  return t;
}

Table sp_closure_table(const RunConfig& cfg) {
  const auto c = sp_closure(cfg.params, cfg.solver, cfg.width_tol);
  auto t = make_table({"width_tol", "zeta_star", "zeta_estimate"});
  t.rows.push_back({num(c.width_tol), num(c.zeta_star), num(c.zeta_estimate)});
  return t;
}

Table rabi_table(const RunConfig& cfg) {
  const Range r = g_range_or(cfg, {0, 3, 61});
  RabiParams base{cfg.params.omega, cfg.params.omega_a, 0.0};
  auto t = make_table(
      {"g", "e_ed", "e_variational", "deviation", "parity", "residual", "convergence_delta"});
  for (const auto& row : compare_curve(base, r.values(), cfg.n_max, cfg.workers))
    t.rows.push_back({num(row.g), num(row.e_ed), num(row.e_variational), num(row.deviation),
                      num(row.parity), num(row.residual), num(row.convergence_delta)});
  return t;
}

void emit(const Table& table, Format format, const std::string& path, std::ostream& out) {
  std::ostringstream buf;
  if (format == Format::Json)
    write_json(table, buf);
  else
    write_csv(table, buf);
  if (path.empty() || path == "-") {
    out << buf.str();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("output", "cannot open '" + path + "' for writing");
  file << buf.str();
  if (!file) throw ConfigError("output", "failed writing '" + path + "'");
}

// Flag values; unset flags leave the file/default value in place.
struct Flags {
  std::string config_path;
  std::optional<double> omega, omega_a, omega_b, tol_root, tol_curv, tol_gt, width_tol;
  std::optional<std::string> g, zeta, output, boundary_output, format;
  std::optional<int> n_atoms, scan_points, n_max, workers;
};

void add_common_options(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file");
  sub->add_option("--omega", f.omega, "cavity frequency");
  sub->add_option("--omega-a", f.omega_a, "atomic transition frequency");
  sub->add_option("--omega-b", f.omega_b, "mechanical frequency");
  sub->add_option("--g", f.g, "coupling g, number or min:max:count");
  sub->add_option("--zeta", f.zeta, "photon-phonon coupling, number or min:max:count");
  sub->add_option("--n-atoms", f.n_atoms, "atom number N");
  sub->add_option("--tol-root", f.tol_root);
  sub->add_option("--tol-curv", f.tol_curv);
  sub->add_option("--scan-points", f.scan_points);
  sub->add_option("--tol-gt", f.tol_gt);
  sub->add_option("--n-max", f.n_max, "Fock truncation for rabi-compare");
  sub->add_option("--width-tol", f.width_tol, "window width for sp-closure");
  sub->add_option("-o,--output", f.output, "output file (default: stdout)");
  sub->add_option("--boundary-output", f.boundary_output, "phase-diagram boundary samples");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--workers", f.workers, "worker threads");
}

RunConfig merge(const Flags& f) {
  RunConfig cfg = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
  if (const char* env = std::getenv(kWorkersEnv); env && *env) {
    try {
      cfg.workers = static_cast<int>(parse_double(env));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(kWorkersEnv, e.what());
    }
  }
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(cfg.params.omega, f.omega);
  set(cfg.params.omega_a, f.omega_a);
  set(cfg.params.omega_b, f.omega_b);
  set(cfg.params.n_atoms, f.n_atoms);
  set(cfg.solver.tol_root, f.tol_root);
  set(cfg.solver.tol_curv, f.tol_curv);
  set(cfg.solver.scan_points, f.scan_points);
  set(cfg.solver.tol_gt, f.tol_gt);
  set(cfg.n_max, f.n_max);
  set(cfg.width_tol, f.width_tol);
  set(cfg.output, f.output);
  set(cfg.boundary_output, f.boundary_output);
  set(cfg.workers, f.workers);
  if (f.format) cfg.format = parse_format(*f.format, "format");
  try {
    if (f.g) assign_scalar_or_range(parse_scalar_or_range(*f.g), cfg.params.g, cfg.g_range);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("g", e.what());
  }
  try {
    if (f.zeta)
      assign_scalar_or_range(parse_scalar_or_range(*f.zeta), cfg.params.zeta, cfg.zeta_range);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("zeta", e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace

std::vector<double> Range::values() const { return linspace(min, max, count); }

std::variant<double, Range> parse_scalar_or_range(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) return parse_double(text);
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
    throw std::invalid_argument("range must be min:max:count, got '" + text + "'");
  Range r;
  r.min = parse_double(text.substr(0, first));
  r.max = parse_double(text.substr(first + 1, second - first - 1));
  const double count = parse_double(text.substr(second + 1));
  if (count != std::floor(count) || count < 1 || count > 1e7)
    throw std::invalid_argument("range count must be a positive integer, got '" + text + "'");
  r.count = static_cast<int>(count);
  return r;
}

void RunConfig::validate() const {
  auto require = [](bool ok, const char* key, const char* msg) {
    if (!ok) throw ConfigError(key, msg);
  };
  const auto& p = params;
  require(std::isfinite(p.omega) && p.omega > 0, "omega", "must be > 0");
  require(std::isfinite(p.omega_a) && p.omega_a > 0, "omega_a", "must be > 0");
  require(std::isfinite(p.omega_b) && p.omega_b > 0, "omega_b", "must be > 0");
  require(std::isfinite(p.g) && p.g >= 0, "g", "must be >= 0");
  require(std::isfinite(p.zeta) && p.zeta >= 0, "zeta", "must be >= 0");
  require(p.n_atoms >= 1, "n_atoms", "must be >= 1");
  require(solver.tol_root > 0, "solver.tol_root", "must be > 0");
  require(solver.tol_curv > 0, "solver.tol_curv", "must be > 0");
  require(solver.tol_gt > 0, "solver.tol_gt", "must be > 0");
  require(solver.scan_points >= 100, "solver.scan_points", "must be >= 100");
  require(n_max >= 2, "n_max", "must be >= 2");
  require(std::isfinite(width_tol) && width_tol > 0, "width_tol", "must be > 0");
  require(workers >= 0, "workers", "must be >= 0");
  if (g_range) check_range(*g_range, "g");
  if (zeta_range) check_range(*zeta_range, "zeta");
}

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
  RunConfig cfg;
  for (const auto& [key, v] : doc.items()) {
    if (key == "omega") cfg.params.omega = number_at(v, key);
    else if (key == "omega_a") cfg.params.omega_a = number_at(v, key);
    else if (key == "omega_b") cfg.params.omega_b = number_at(v, key);
    else if (key == "g") assign_scalar_or_range(scalar_or_range_at(v, key), cfg.params.g, cfg.g_range);
    else if (key == "zeta")
      assign_scalar_or_range(scalar_or_range_at(v, key), cfg.params.zeta, cfg.zeta_range);
    else if (key == "n_atoms") cfg.params.n_atoms = integer_at(v, key);
    else if (key == "n_max") cfg.n_max = integer_at(v, key);
    else if (key == "width_tol") cfg.width_tol = number_at(v, key);
    else if (key == "output") cfg.output = string_at(v, key);
    else if (key == "boundary_output") cfg.boundary_output = string_at(v, key);
    else if (key == "format") cfg.format = parse_format(string_at(v, key), key);
    else if (key == "workers") cfg.workers = integer_at(v, key);
    else if (key == "solver") {
      if (!v.is_object()) throw ConfigError(key, "expected an object");
      for (const auto& [sk, sv] : v.items()) {
        const std::string path = "solver." + sk;
        if (sk == "tol_root") cfg.solver.tol_root = number_at(sv, path);
        else if (sk == "tol_curv") cfg.solver.tol_curv = number_at(sv, path);
        else if (sk == "tol_gt") cfg.solver.tol_gt = number_at(sv, path);
        else if (sk == "scan_points") cfg.solver.scan_points = integer_at(sv, path);
        else throw ConfigError(path, "unknown key");
      }
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(doc);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational ground states of the optomechanical Dicke model"};
  app.require_subcommand(1);
  Flags flags;
  const char* names[] = {"roots", "sweep", "phase-diagram", "turning-point", "sp-closure",
                         "rabi-compare"};
  const char* help[] = {"stationary points at one (g, zeta)",
                        "observables and branches versus g",
                        "ground-state phase on a g-zeta grid",
                        "turning point g_t for one zeta or a zeta range",
                        "zeta at which the superradiant window closes",
                        "single-atom variational energy against exact diagonalization"};
  std::vector<CLI::App*> subs;
  for (int i = 0; i < 6; ++i) {
    subs.push_back(app.add_subcommand(names[i], help[i]));
    add_common_options(subs.back(), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  std::string command;
  for (int i = 0; i < 6; ++i)
    if (subs[i]->parsed()) command = names[i];

  try {
    const RunConfig cfg = merge(flags);
    if (command == "roots") {
      emit(roots_table(cfg), cfg.format, cfg.output, out);
    } else if (command == "sweep") {
      emit(sweep_table(cfg), cfg.format, cfg.output, out);
    } else if (command == "phase-diagram") {
      const auto [cells, bounds] = phase_diagram_tables(cfg);
      emit(cells, cfg.format, cfg.output, out);
      if (!cfg.boundary_output.empty()) emit(bounds, cfg.format, cfg.boundary_output, out);
    } else if (command == "turning-point") {
      emit(turning_point_table(cfg), cfg.format, cfg.output, out);
    } else if (command == "sp-closure") {
      emit(sp_closure_table(cfg), cfg.format, cfg.output, out);
    } else {
      emit(rabi_table(cfg), cfg.format, cfg.output, out);
    }
  } catch (const ConfigError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolverError;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("optodicke");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace optodicke::cli
