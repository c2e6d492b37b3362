#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "minpart/minpart.hpp"

namespace fs = std::filesystem;
using namespace minpart;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInvariant = 4;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::NoConvergence:
    case ErrorCode::FactorizationBreakdown:
    case ErrorCode::DimensionTooSmall:
    case ErrorCode::BudgetExhaustedWithoutImprovement:
    case ErrorCode::AllZero:
    case ErrorCode::EmptyDomain:
    case ErrorCode::NotFound:
      return kExitSolver;
    case ErrorCode::InvariantViolation:
      return kExitInvariant;
    default:
      return kExitConfig;
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error(ErrorCode::ConfigError, "not a number: '" + s + "'");
  return v;
}

Point parse_point(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw Error(ErrorCode::ConfigError, "pole position must be 'x,y': '" + s + "'");
  return {to_double(parts[0]), to_double(parts[1])};
}

std::vector<PartitionEnergyEntry> parse_entries(const std::string& s) {
  std::vector<PartitionEnergyEntry> out;
  for (const auto& item : split(s, ',')) {
    const auto f = split(item, ':');
    if (f.size() < 2 || f.size() > 3) throw Error(ErrorCode::ConfigError, "entry must be 'k:L' or 'k:L:odd': '" + item + "'");
    PartitionEnergyEntry e;
    e.k = static_cast<std::size_t>(to_double(f[0]));
    e.energy = to_double(f[1]);
    if (f.size() == 3) e.odd_points = static_cast<std::size_t>(to_double(f[2]));
    out.push_back(e);
  }
  return out;
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& payload) {
  const auto path = fs::path(cfg.out) / name;
  write_atomic(path, payload);
  std::cout << "wrote " << path.string() << "\n";
}

PoleConfig poles_of(const RunConfig& cfg, const Grid& grid) { return snap_poles(grid, cfg.pole_positions); }

int run_constants(const RunConfig& cfg) {
  const auto L = build_ledger();
  std::printf("j           %.15f\n", L.j);
  std::printf("pi j^2      %.12f\n", L.faber_krahn);
  std::printf("eps range   (0, %.12f)\n", L.interval_end);
  std::printf("eps_max     %.12f (golden section %.12f)\n", L.eps_max, L.eps_max_golden);
  std::printf("c0          %.12f (closed form %.12f)\n", L.c0_of_eps_max, L.c0_closed_form);
  std::printf("c0 (corrected counting bound) %.12f\n", L.c0_corrected);
  for (const auto& q : L.quoted)
    std::printf("quoted %-13s %-8g computed %.6f  %s\n", q.name.c_str(), q.quoted, q.computed, q.agrees ? "agrees" : "DISCREPANCY");
  emit(cfg, "constants.json", json_payload(cfg, L.to_json()));
  return 0;
}

int run_weyl(const RunConfig& cfg) {
  const auto grid = t_grid(cfg.t_min, cfg.t_max, cfg.step);
  std::vector<CountReport> rows;
  std::vector<double> viol_paper, viol_corr;
  for (double t : grid) {
    rows.push_back(count_report(t));
    if (t >= 2.0 && !rows.back().satisfied_paper) viol_paper.push_back(t);
    if (t >= 2.0 && !rows.back().satisfied_corrected) viol_corr.push_back(t);
  }
  std::ostringstream csv;
  write_count_csv(csv, rows);
  emit(cfg, "weyl.csv", csv_payload(cfg, csv.str()));

  const double eps = cfg.eps > 0 ? cfg.eps : eps_max();
  nlohmann::json summary;
  summary["points"] = rows.size();
  summary["violations_quoted_bound"] = viol_paper.size();
  summary["violations_corrected_bound"] = viol_corr.size();
  summary["first_violation_quoted"] = viol_paper.empty() ? nlohmann::json(nullptr) : nlohmann::json(viol_paper.front());
  summary["last_violation_quoted"] = viol_paper.empty() ? nlohmann::json(nullptr) : nlohmann::json(viol_paper.back());
  summary["first_violation_corrected"] = viol_corr.empty() ? nlohmann::json(nullptr) : nlohmann::json(viol_corr.front());
  summary["last_violation_corrected"] = viol_corr.empty() ? nlohmann::json(nullptr) : nlohmann::json(viol_corr.back());
  summary["eps"] = eps;
  try {
    const auto w = min_t_for_wq(eps, cfg.t_max);
    summary["wq_threshold"] = {{"empirical_t", w.empirical_t}, {"analytic_t", w.analytic_t}, {"step", w.step}};
  } catch (const Error& e) {
    summary["wq_threshold"] = {{"error", e.what()}};
  }
  std::printf("%zu points; quoted bound violated at %zu, corrected bound at %zu\n", rows.size(), viol_paper.size(), viol_corr.size());
  emit(cfg, "weyl_summary.json", json_payload(cfg, summary));
  return 0;
}

nlohmann::json spectrum_json(const Spectrum& s) {
  return {{"eigenvalues", s.eigenvalues}, {"residuals", s.residuals}, {"iterations", s.iterations}, {"operator_norm", s.operator_norm}, {"h", s.h}};
}

int run_solve(const RunConfig& cfg) {
  const auto spec = DomainSpec::parse(cfg.domain);
  const auto grid = build_grid(spec, cfg.h);
  const auto poles = poles_of(cfg, grid);
  const auto op = assemble_ab(grid, poles);
  EigenOptions eo;
  eo.tol = cfg.tol;
  eo.seed = cfg.seed;
  const auto s = smallest_eigenpairs(op, cfg.eigenpairs, eo);
  nlohmann::json j;
  j["grid_points"] = grid.size();
  j["pole_positions"] = nlohmann::json::array();
  for (const auto& p : poles.coordinates(grid)) j["pole_positions"].push_back({p.x, p.y});
  j["spectrum"] = spectrum_json(s);
  std::printf("N=%zu\n", grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) std::printf("lambda_%zu = %.10f\n", i + 1, s.eigenvalues[i]);
  if (cfg.richardson) {
    const auto fine_grid = build_grid(spec, cfg.h / 2);
    const auto fine = smallest_eigenpairs(assemble_ab(fine_grid, snap_poles(fine_grid, cfg.pole_positions)), cfg.eigenpairs, eo);
    const auto ex = richardson(s.eigenvalues, fine.eigenvalues);
    j["fine_spectrum"] = spectrum_json(fine);
    j["richardson"] = ex;
    for (std::size_t i = 0; i < ex.size(); ++i) std::printf("extrapolated lambda_%zu = %.10f\n", i + 1, ex[i]);
  }
  emit(cfg, "solve.json", json_payload(cfg, j));
  if (cfg.dump_matrix) {
    std::ostringstream m;
    write_coordinate(m, op);
    emit(cfg, "matrix.txt", m.str());
  }
  return 0;
}

int run_partition(const RunConfig& cfg) {
  const auto spec = DomainSpec::parse(cfg.domain);
  const auto grid = build_grid(spec, cfg.h);
  const auto poles = poles_of(cfg, grid);
  const auto op = assemble_ab(grid, poles);
  EigenOptions eo;
  eo.tol = cfg.tol;
  eo.seed = cfg.seed;
  const auto s = smallest_eigenpairs(op, cfg.k < grid.size() ? cfg.k + 1 : cfg.k, eo);
  BasisChoice basis;
  auto part = extract_kth_partition(s, cfg.k, op.gauge, grid, cfg.zero_tol, poles, &basis);
  compute_energies(part, grid, eo);
  const auto euler = euler_check(part);
  const double lambda_k = s.eigenvalues[cfg.k - 1];
  nlohmann::json j;
  j["lambda_k"] = lambda_k;
  j["basis"] = {{"partner", basis.partner < 0 ? nlohmann::json(nullptr) : nlohmann::json(basis.partner + 1)}, {"angle", basis.angle}};
  j["spectrum"] = spectrum_json(s);
  j["partition"] = to_json(part);
  j["euler"] = {{"odd", euler.odd}, {"bound", euler.bound}, {"vacuous", euler.vacuous}, {"pass", euler.pass}};
  j["faber_krahn"] = to_json(faber_krahn_domains(part, grid));
  if (basis.partner >= 0) std::printf("mixed eigenvectors %zu and %d at angle %.4f\n", cfg.k, basis.partner + 1, basis.angle);
  std::printf("lambda_%zu = %.10f, %zu nodal domains, %zu odd critical points, Euler %s\n", cfg.k, lambda_k,
              part.k, part.odd_count(), euler.pass ? "ok" : "VIOLATED");
  for (std::size_t i = 0; i < part.energies.size(); ++i)
    std::printf("  domain %zu: %zu points, energy %.8f (staircase %.8f)\n", i, part.domains[i].size(), part.energies[i],
                part.staircase_energies[i]);
  emit(cfg, "partition.json", json_payload(cfg, j));
  emit(cfg, "partition.pgm", pgm_payload(cfg, part, grid));
  return 0;
}

SearchOptions search_options(const RunConfig& cfg) {
  SearchOptions o;
  o.k = cfg.k;
  o.poles = cfg.poles;
  o.h = cfg.h;
  o.budget = cfg.budget;
  o.seed = cfg.seed;
  o.tol = cfg.tol;
  o.zero_tol = cfg.zero_tol;
  o.threads = cfg.threads;
  return o;
}

void print_search(const SearchResult& r, const Grid& grid, std::size_t poles) {
  std::printf("poles=%zu lambda_k=%.10f energy=%.10f domains=%zu odd=%zu evaluations=%zu restarts=%zu\n", poles, r.lambda_k,
              r.energy_estimate, r.partition.k, r.partition.odd_count(), r.evaluations, r.restarts);
  for (const auto& p : r.best.coordinates(grid)) std::printf("  pole (%.6f, %.6f)\n", p.x, p.y);
  for (const auto& w : r.warnings) std::printf("  warning: %s\n", w.c_str());
}

int run_search(const RunConfig& cfg) {
  const auto spec = DomainSpec::parse(cfg.domain);
  const auto grid = build_grid(spec, cfg.h);
  const auto counts = cfg.pole_sweep.empty() ? std::vector<std::size_t>{cfg.poles} : cfg.pole_sweep;
  const auto sweep = sweep_pole_counts(spec, search_options(cfg), counts);
  nlohmann::json j;
  j["runs"] = nlohmann::json::array();
  for (std::size_t i = 0; i < sweep.results.size(); ++i) {
    print_search(sweep.results[i], grid, sweep.pole_counts[i]);
    auto r = to_json(sweep.results[i], grid);
    r["pole_count"] = sweep.pole_counts[i];
    j["runs"].push_back(std::move(r));
  }
  j["best"] = sweep.best;
  emit(cfg, "search.json", json_payload(cfg, j));
  emit(cfg, "search.pgm", pgm_payload(cfg, sweep.results[sweep.best].partition, grid));
  return 0;
}

int run_certify(const RunConfig& cfg) {
  const auto spec = DomainSpec::parse(cfg.domain);
  const auto grid = build_grid(spec, cfg.h);
  const auto poles = poles_of(cfg, grid);
  EigenOptions eo;
  eo.tol = cfg.tol;
  eo.seed = cfg.seed;
  const auto s = smallest_eigenpairs(assemble_ab(grid, poles), cfg.k, eo);
  CertifyOptions co;
  co.eps = cfg.eps;
  co.t_z1 = cfg.t;
  co.t_tile = cfg.t_tile;
  const auto report = certify(grid, poles, cfg.k, s.eigenvalues.back(), co);
  const auto& z = report.z1;
  std::printf("k=%zu  L_k=%.8f  odd points=%zu\n", report.k, report.energy, report.poles);
  if (report.tiling) {
    const auto& t = *report.tiling;
    const auto& v = *report.superadditivity;
    std::printf("tiling t=%.4g side=%.6f kept=%zu excluded_by_pole=%zu covered=%.6f deficit=%.6f\n", t.t, t.side, t.kept,
                t.excluded_by_pole, t.covered_area, t.boundary_deficit);
    std::printf("superadditivity %zu x %zu = %zu <= %zu : %s\n", t.kept, v.per_square, v.sum, v.discrete_count, v.holds ? "holds" : "FAILS");
  } else {
    std::printf("tiling skipped: %s\n", report.tiling_skipped.c_str());
  }
  std::printf("z1: eps=%.6f t=%.6f rhs/k=%.8f contradiction=%s\n", z.eps, z.t, z.rhs_over_k, z.contradiction ? "yes" : "no");
  std::printf("alpha=%.6f threshold=%.6f  nu_k >= %.6f (c0 k=%.6f, ceiling %zu, %s)\n", z.alpha, z.alpha_threshold, z.lower_bound,
              report.nu.value, report.nu.ceiling, report.nu.vacuous ? "vacuous" : "informative");
  emit(cfg, "certify.json", json_payload(cfg, to_json(report)));
  return 0;
}

int run_hexa(const RunConfig& cfg) {
  const auto spec = DomainSpec::parse(cfg.domain);
  const auto entries = parse_entries(cfg.entries);
  const double hex = hexagon_reference_energy(cfg.h);
  const auto r = hexagonal_diagnostic(entries, spec.area(), hex);
  std::printf("hexagon energy %.8f, pi j^2 %.8f\n", r.hexagon_energy, r.faber_krahn);
  for (const auto& row : r.rows)
    std::printf("k=%zu  A L_k/k=%.6f  ratio to hexagon %.6f\n", row.k, row.scaled_energy, row.scaled_energy / r.hexagon_energy);
  emit(cfg, "hexa.json", json_payload(cfg, to_json(r)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral minimal partitions, Aharonov-Bohm operators and odd critical point bounds"};
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_file, sweep_raw;
  std::vector<std::string> pole_at;

  struct Bound {
    std::string key;
    CLI::Option* opt;
  };
  std::vector<Bound> bound;
  auto add = [&](const std::string& name, auto& target, const std::string& key, const std::string& help) {
    bound.push_back({key, app.add_option(name, target, help)});
  };
  add("--domain", flags.domain, "domain", "unit_square | disk[:r] | hexagon[:area] | rectangle:WxH | regular_polygon:n[:area] | JSON");
  add("--h", flags.h, "h", "grid spacing");
  add("--k", flags.k, "k", "number of domains / eigenvalue index");
  add("--poles", flags.poles, "poles", "number of poles for search");
  add("--eps", flags.eps, "eps", "epsilon (0 selects eps_max)");
  add("--t", flags.t, "t", "t of the threshold inequality (0 selects t(eps))");
  add("--t-tile", flags.t_tile, "t_tile", "t of the superadditivity tiling");
  add("--t-min", flags.t_min, "t_min", "counting scan start");
  add("--t-max", flags.t_max, "t_max", "counting scan end");
  add("--step", flags.step, "step", "counting scan step");
  add("--tol", flags.tol, "tol", "relative eigen residual tolerance");
  add("--zero-tol", flags.zero_tol, "zero_tol", "relative threshold for nodal zeros");
  add("--seed", flags.seed, "seed", "random seed");
  add("--budget", flags.budget, "budget", "search evaluation budget");
  add("--eigenpairs", flags.eigenpairs, "eigenpairs", "eigenpairs for solve");
  add("--entries", flags.entries, "entries", "hexa-diagnostic input k:L[:odd],...");
  add("--out", flags.out, "out", "output directory");
  bound.push_back({"richardson", app.add_flag("--richardson", flags.richardson, "also solve at h/2 and extrapolate")});
  bound.push_back({"dump_matrix", app.add_flag("--dump-matrix", flags.dump_matrix, "write the operator in coordinate form")});
  auto* pole_opt = app.add_option("--pole-at", pole_at, "pole position x,y (repeatable)");
  auto* sweep_opt = app.add_option("--pole-sweep", sweep_raw, "comma-separated pole counts for search");
  unsigned threads_flag = 0;
  auto* threads_opt = app.add_option("--threads", threads_flag, "worker threads (default: MINPART_THREADS or all cores)");
  app.add_option("--config", config_file, "JSON config; flags override its values");

  const std::pair<const char*, const char*> subcommands[] = {
      {"constants", "Bessel zero, eps_max and c0 with quoted-value checks"},
      {"weyl", "square counting function against the lower bounds over a t range"},
      {"solve", "lowest eigenpairs of the Laplacian or Aharonov-Bohm operator"},
      {"partition", "nodal partition of the k-th eigenfunction"},
      {"search", "pole positions maximizing lambda_k, with the resulting partition"},
      {"certify", "tiling, superadditivity and threshold inequality for a partition"},
      {"hexa-diagnostic", "partition energies compared with the regular hexagon"},
  };
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    RunConfig cfg;
    bool config_threads = false;
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      if (!f) throw Error(ErrorCode::ConfigError, "cannot read config " + config_file);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
      }
      cfg.merge(j);
      config_threads = j.contains("threads");
    }
    const auto flag_json = [&] {
      // Route explicitly given flags through the same merge as the file.
      nlohmann::json j = nlohmann::json::object();
      const auto full = flags.to_json();
      for (const auto& b : bound)
        if (b.opt->count() > 0) j[b.key] = b.key == "domain" ? nlohmann::json(flags.domain) : full.at(b.key);
      return j;
    }();
    cfg.merge(flag_json);
    if (pole_opt->count() > 0) {
      cfg.pole_positions.clear();
      for (const auto& s : pole_at) cfg.pole_positions.push_back(parse_point(s));
    }
    if (sweep_opt->count() > 0) {
      cfg.pole_sweep.clear();
      for (const auto& s : split(sweep_raw, ',')) cfg.pole_sweep.push_back(static_cast<std::size_t>(to_double(s)));
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (threads_opt->count() > 0) {
      cfg.threads = threads_flag;
    } else if (const char* env = std::getenv("MINPART_THREADS")) {
      cfg.threads = static_cast<unsigned>(to_double(env));
    } else if (!config_threads) {
      cfg.threads = std::max(1u, std::thread::hardware_concurrency());
    }
    cfg.threads = std::max(1u, cfg.threads);
    cfg.validate();

    const auto& sub = cfg.subcommand;
    if (sub == "constants") return run_constants(cfg);
    if (sub == "weyl") return run_weyl(cfg);
    if (sub == "solve") return run_solve(cfg);
    if (sub == "partition") return run_partition(cfg);
    if (sub == "search") return run_search(cfg);
    if (sub == "certify") return run_certify(cfg);
    if (sub == "hexa-diagnostic") return run_hexa(cfg);
    throw Error(ErrorCode::ConfigError, "unknown subcommand " + sub);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
