// Acceptance run: one PASS/FAIL line per criterion, followed by indented details.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "minpart/minpart.hpp"

using namespace minpart;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// Closed-form spectrum of the 5-point Dirichlet stencil on the unit square.
double stencil_eigenvalue(int m, int n, double h) {
  const double sm = std::sin(m * pi * h / 2), sn = std::sin(n * pi * h / 2);
  return 4 / (h * h) * (sm * sm + sn * sn);
}

Outcome criterion_constants() {
  Outcome o;
  const double j = bessel_j01();
  o.check(std::abs(j - 2.404825557695773) <= 1e-12, fmt("j01 = %.15f", j));
  const double em = eps_max(), eg = eps_max_golden();
  o.check(std::abs(em - eg) <= 1e-6, fmt("eps_max = %.10f, golden-section argmax = %.10f", em, eg));
  const double c_eps = c0_of_eps(em), c_closed = c0_closed_form();
  o.check(std::abs(c_eps - c_closed) <= 1e-10, fmt("c0(eps_max) = %.12f, closed form = %.12f", c_eps, c_closed));
  o.check(c_closed >= 0.0150 && c_closed <= 0.0158, fmt("c0 = %.9f in [0.0150, 0.0158]", c_closed));
  const auto ledger = build_ledger();
  for (const auto& q : ledger.quoted)
    o.note(fmt("quoted %s = %g vs computed %.6g: %s", q.name.c_str(), q.quoted, q.computed, q.agrees ? "agrees" : "recorded discrepancy"));
  return o;
}

Outcome criterion_weyl() {
  Outcome o;
  const double h = 1.0 / 256;
  const auto op = assemble_laplacian(build_grid(DomainSpec::unit_square(), h));
  std::size_t compared = 0, skipped = 0, mismatched = 0;
  for (int i = 0; i < 20; ++i) {
    const double t = 3.0 + 27.0 * i / 19.0;
    const double t2 = t * t;
    // Gap from t^2 to the nearest continuum eigenvalue, against the worst
    // discretization error among the modes near it.
    double gap = std::numeric_limits<double>::infinity(), err = 0;
    for (int m = 1; m * m * pi * pi <= 2 * t2 + 1; ++m)
      for (int n = 1; (m * m + n * n) * pi * pi <= 2 * t2 + 1; ++n) {
        const double lc = (m * m + n * n) * pi * pi;
        gap = std::min(gap, std::abs(lc - t2));
        err = std::max(err, std::abs(lc - stencil_eigenvalue(m, n, h)));
      }
    if (gap <= 3 * err) {
      ++skipped;
      o.note(fmt("t=%.4f skipped: gap %.3g <= 3 x error %.3g", t, gap, err));
      continue;
    }
    ++compared;
    const auto exact = n_square_exact(t), discrete = count_below(op, t2);
    if (exact != discrete) {
      ++mismatched;
      o.note(fmt("t=%.4f: n_square_exact=%zu, count_below=%zu", t, exact, discrete));
    }
  }
  o.check(mismatched == 0 && compared > 0, fmt("%zu of 20 values compared exactly (%zu skipped), %zu mismatches", compared, skipped, mismatched));

  for (double t : {2.0, 4.4}) {
    const auto n = n_square_exact(t);
    const double b = weyl_bound_quoted(t);
    o.check(static_cast<double>(n) < b, fmt("quoted bound violated at t=%.1f: n=%zu < %.4f", t, n, b));
  }

  std::size_t violations = 0;
  double first = 0, last = 0;
  for (long i = 0; i <= 49800; ++i) {
    const double t = 2.0 + 0.01 * static_cast<double>(i);
    if (static_cast<double>(n_square_exact(t)) < weyl_bound_corrected(t)) {
      if (violations++ == 0) first = t;
      last = t;
    }
  }
  o.check(violations == 0, violations == 0 ? std::string("corrected bound holds on [2, 500] step 0.01")
                                           : fmt("corrected bound violated at %zu points in [%.2f, %.2f]", violations, first, last));
  if (violations) o.note(fmt("n(2) = %zu while the corrected bound at 2 is %.4f", n_square_exact(2.0), weyl_bound_corrected(2.0)));
  return o;
}

Outcome criterion_spectral() {
  Outcome o;
  EigenOptions opt;
  const auto coarse = smallest_eigenpairs(assemble_laplacian(build_grid(DomainSpec::unit_square(), 1.0 / 128)), 5, opt).eigenvalues;
  const auto fine = smallest_eigenpairs(assemble_laplacian(build_grid(DomainSpec::unit_square(), 1.0 / 256)), 5, opt).eigenvalues;
  const auto rich = richardson(coarse, fine);
  const double ref[5] = {2, 5, 5, 8, 10};
  double worst = 0;
  for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(rich[i] / (ref[i] * pi * pi) - 1));
  o.check(worst <= 5e-4, fmt("square lambda_1..5 after Richardson: worst relative error %.2e", worst));

  const double j2 = j01_squared();
  const auto disk = build_grid(DomainSpec::disk(1.0), 1.0 / 256);
  const double d1 = smallest_eigenpairs(assemble_laplacian(disk), 1, opt).eigenvalues[0];
  o.check(std::abs(d1 / j2 - 1) <= 2e-3, fmt("disk lambda_1 = %.6f vs j^2 = %.6f (%.3f%%), %zu points", d1, j2, 100 * (d1 / j2 - 1), disk.size()));

  // 1/256.5 puts a plaquette center exactly on the origin.
  const auto ab_grid = build_grid(DomainSpec::disk(1.0), 1.0 / 256.5);
  const auto pole = snap_poles(ab_grid, {{0.0, 0.0}});
  const auto c = ab_grid.plaquette_center(pole.plaquettes[0]);
  const double a1 = smallest_eigenpairs(assemble_ab(ab_grid, pole), 1, opt).eigenvalues[0];
  o.check(std::abs(a1 / (pi * pi) - 1) <= 5e-3,
          fmt("AB disk lambda_1 = %.6f vs pi^2 (%.3f%%), pole at (%.1e, %.1e)", a1, 100 * (a1 / (pi * pi) - 1), c.x, c.y));
  return o;
}

PoleConfig random_poles(const Grid& g, std::mt19937_64& rng, std::size_t count) {
  const auto plaq = g.interior_plaquettes();
  std::uniform_int_distribution<std::size_t> pick(0, plaq.size() - 1);
  PoleConfig c;
  while (c.size() < count) {
    const auto p = plaq[pick(rng)];
    if (std::find(c.plaquettes.begin(), c.plaquettes.end(), p) == c.plaquettes.end()) c.plaquettes.push_back(p);
  }
  return c;
}

Outcome criterion_magnetic() {
  Outcome o;
  {
    const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 48);
    const auto poles = snap_poles(g, {{0.31, 0.27}, {0.66, 0.72}, {0.2, 0.8}});
    std::vector<std::vector<double>> spectra;
    bool equivalent = true;
    const auto base = assemble_ab(g, poles, default_cuts(g, poles, Down));
    for (auto dir : {Down, Up, Left}) {
      const auto op = assemble_ab(g, poles, default_cuts(g, poles, dir));
      equivalent = equivalent && gauge_equivalent(base, op).equivalent;
      spectra.push_back(smallest_eigenpairs(op, 6).eigenvalues);
    }
    double spread = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      double lo = spectra[0][i], hi = lo;
      for (const auto& s : spectra) lo = std::min(lo, s[i]), hi = std::max(hi, s[i]);
      spread = std::max(spread, (hi - lo) / lo);
    }
    o.check(spread < 1e-8 && equivalent, fmt("3 cut sets: relative spread %.2e over 6 eigenvalues, diagonal witness %s", spread, equivalent ? "found" : "missing"));
  }
  {
    std::mt19937_64 rng(2024);
    const auto sq = build_grid(DomainSpec::unit_square(), 1.0 / 24);
    const auto disk = build_grid(DomainSpec::disk(1.0), 1.0 / 12);
    std::size_t bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto& g = trial % 2 ? disk : sq;
      const auto poles = random_poles(g, rng, 1 + trial % 6);
      if (!flux_violations(g, poles, assemble_ab(g, poles).gauge).empty()) ++bad;
    }
    o.check(bad == 0, fmt("plaquette flux exact on 100 random configurations (%zu violations)", bad));
  }
  {
    const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 33);
    std::mt19937_64 rng(5);
    const auto poles = random_poles(g, rng, 9);
    const auto gauge = assemble_ab(g, poles).gauge;
    std::vector<std::int8_t> signs(g.size());
    std::uniform_int_distribution<int> coin(0, 9);
    for (auto& s : signs) s = static_cast<std::int8_t>(coin(rng) == 0 ? 0 : (coin(rng) < 5 ? 1 : -1));
    std::size_t loops = 0, wrong = 0;
    for (int x0 = 1; x0 <= 32; ++x0)
      for (int x1 = x0 + 1; x1 <= 32; ++x1)
        for (int y0 = 1; y0 <= 32; ++y0)
          for (int y1 = y0 + 1; y1 <= 32; ++y1) {
            const auto ring = rectangle_ring(g, x0, y0, x1, y1);
            if (std::all_of(ring.begin(), ring.end(), [&](int id) { return signs[static_cast<std::size_t>(id)] == 0; })) continue;
            std::size_t inside = 0;
            for (const auto& p : poles.plaquettes) inside += p.ix >= x0 && p.ix < x1 && p.iy >= y0 && p.iy < y1;
            ++loops;
            if (loop_sign_changes(g, signs, gauge, ring) % 2 != static_cast<int>(inside % 2)) ++wrong;
          }
    o.check(wrong == 0 && loops > 0, fmt("loop parity law on %zu rectangle loops of a 32x32 grid (%zu wrong)", loops, wrong));
  }
  return o;
}

Outcome criterion_partitions() {
  Outcome o;
  const double h = 1.0 / 128;
  const auto g = build_grid(DomainSpec::unit_square(), h);
  const auto op = assemble_laplacian(g);
  const auto s = smallest_eigenpairs(op, 4);
  for (std::size_t k : {2u, 4u}) {
    auto part = extract_partition(s.vector(k - 1), op.gauge, g);
    compute_energies(part, g);
    const double lambda = s.eigenvalues[k - 1];
    double worst = 0;
    for (double e : part.energies) worst = std::max(worst, std::abs(e / lambda - 1));
    o.check(part.k == k, fmt("u_%zu: %zu nodal domains", k, part.k));
    o.check(worst <= 0.01, fmt("u_%zu: domain energies within %.2e of lambda_%zu = %.4f", k, worst, k, lambda));
    const auto euler = euler_check(part);
    o.check(euler.pass, fmt("u_%zu: Euler #odd = %zu <= %lld%s", k, euler.odd, euler.bound, euler.vacuous ? " (vacuous)" : ""));
    double min_slack = std::numeric_limits<double>::infinity();
    bool all = true;
    for (const auto& fk : faber_krahn_domains(part, g)) {
      all = all && fk.holds;
      min_slack = std::min(min_slack, fk.slack);
    }
    o.check(all, fmt("u_%zu: Faber-Krahn on every domain, minimum slack %.4f", k, min_slack));
  }
  return o;
}

Outcome criterion_search() {
  Outcome o;
  const auto spec = DomainSpec::unit_square();
  SearchOptions so;
  so.h = 1.0 / 96;
  so.threads = worker_threads();
  so.k = 2;
  so.poles = 0;
  so.budget = 200;
  const auto two = search_minimal_partition(spec, so);
  const double target = 5 * pi * pi;
  o.check(std::abs(two.lambda_k / target - 1) <= 5e-3, fmt("k=2, l=0: %.4f vs 5 pi^2 = %.4f (%.3f%%)", two.lambda_k, target, 100 * (two.lambda_k / target - 1)));

  so.k = 3;
  so.budget = 400;
  const auto sweep = sweep_pole_counts(spec, so, {0, 1, 2});
  for (std::size_t i = 0; i < sweep.results.size(); ++i) {
    const auto& r = sweep.results[i];
    std::ostringstream poles;
    const auto grid = build_grid(spec, so.h);
    for (const auto& p : r.best.coordinates(grid)) poles << fmt(" (%.3f, %.3f)", p.x, p.y);
    const auto& e = r.partition.energies;
    const double spread = *std::max_element(e.begin(), e.end()) / *std::min_element(e.begin(), e.end());
    o.note(fmt("k=3, l=%zu: lambda_3 = %.4f, %zu domains, spread %.4f, %zu odd critical points, poles:", sweep.pole_counts[i], r.lambda_k,
               r.partition.k, spread, r.partition.odd_count()) +
           poles.str());
  }
  const auto& best = sweep.results[sweep.best];
  const std::size_t l = sweep.pole_counts[sweep.best];
  o.check(l == 2, fmt("best k=3 result at l=%zu", l));

  const double h = so.h;
  const auto grid = build_grid(spec, h);
  const auto pole_xy = best.best.coordinates(grid);
  std::size_t matched = 0;
  for (const auto& cp : best.partition.critical_points) {
    if (!cp.odd) continue;
    for (const auto& p : pole_xy)
      if (std::hypot(cp.location.x - p.x, cp.location.y - p.y) <= 2 * h) {
        ++matched;
        break;
      }
  }
  o.check(best.partition.odd_count() == 2 && matched == 2,
          fmt("best partition: %zu odd critical points, %zu within 2h of a pole (%zu free arc ends at poles)", best.partition.odd_count(), matched,
              best.partition.endpoints.size()));
  const auto& e = best.partition.energies;
  const double spread = e.empty() ? 0 : *std::max_element(e.begin(), e.end()) / *std::min_element(e.begin(), e.end());
  o.check(best.partition.k == 3 && spread < 1.05, fmt("best partition: %zu domains, energy spread %.4f", best.partition.k, spread));
  return o;
}

Outcome criterion_certificate() {
  Outcome o;
  struct Instance {
    std::string domain;
    std::vector<Point> poles;
    double multiple;
  };
  const std::vector<Instance> cases{
      {"unit_square", {}, 2},
      {"unit_square", {{0.5, 0.5}}, 5},
      {"unit_square", {{0.3, 0.3}, {0.7, 0.6}}, 10},
      {"unit_square", {{0.2, 0.7}, {0.5, 0.3}, {0.8, 0.8}}, 25},
      {"unit_square", {{0.4, 0.6}, {0.6, 0.4}}, 50},
      {"disk:1", {}, 3},
      {"disk:1", {{0.0, 0.0}}, 8},
      {"disk:1", {{0.3, 0.1}, {-0.2, -0.4}}, 15},
      {"disk:1", {{0.5, 0.0}, {-0.3, 0.4}, {0.1, -0.6}}, 30},
      {"disk:1", {{0.2, 0.2}}, 50},
  };
  std::size_t held = 0;
  for (const auto& c : cases) {
    const auto spec = DomainSpec::parse(c.domain);
    const auto g = build_grid(spec, 1.0 / 64);
    const auto poles = snap_poles(g, c.poles);
    const double l1 = smallest_eigenpairs(assemble_ab(g, poles), 1).eigenvalues[0];
    const double lambda = c.multiple * l1;
    const double t = std::min(8.0, 0.4 * std::sqrt(lambda));
    const auto tiling = tile_squares(g, poles, lambda, t);
    const auto v = check_superadditivity(g, poles, lambda, tiling);
    held += v.holds;
    o.note(fmt("%s, %zu poles, lambda = %g lambda_1: %zu squares x %zu = %zu <= %zu %s", c.domain.c_str(), poles.size(), c.multiple, tiling.kept,
               v.per_square, v.sum, v.discrete_count, v.holds ? "" : "(violated)"));
  }
  o.check(held == cases.size(), fmt("superadditivity holds on %zu of %zu instances", held, cases.size()));

  const double j2 = j01_squared(), e = eps_max(), t = analytic_t_of_eps(e);
  const std::size_t k = 1000;
  const double fk = pi * j2 * static_cast<double>(k);
  const auto z0 = evaluate_z1(k, fk, 0, t, e, 1.0);
  o.check(std::abs(z0.rhs_over_k - 1.136) <= 1e-3, fmt("Faber-Krahn equality, l=0: RHS/k = %.6f, (j^2/4)(1-eps_max) = %.6f", z0.rhs_over_k, j2 / 4 * (1 - e)));
  const auto zc = evaluate_z1(k, fk, c0_closed_form() * static_cast<double>(k), t, e, 1.0);
  o.check(std::abs(zc.rhs_over_k - 1.0) <= 1e-6, fmt("alpha = c0: RHS/k = %.10f", zc.rhs_over_k));
  return o;
}

std::map<std::string, std::string> read_payloads(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream f(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    out[std::filesystem::relative(entry.path(), dir).string()] = ss.str();
  }
  return out;
}

Outcome criterion_reproducibility() {
  Outcome o;
  const auto root = std::filesystem::temp_directory_path() / "minpart_acceptance";
  const std::vector<std::pair<std::string, std::string>> runs{
      {"constants", "constants"},
      {"weyl", "weyl --t-min 2 --t-max 50 --step 0.1"},
      {"solve", "solve --domain unit_square --h 0.0078125 --k 5 --richardson --poles 0 --seed 7"},
      {"solve_ab", "solve --domain disk:1 --h 0.03125 --k 3 --pole-at 0.1,0.2 --seed 7"},
      {"partition", "partition --domain unit_square --h 0.0078125 --k 4 --seed 7"},
      {"search", "search --domain unit_square --h 0.03125 --k 3 --pole-sweep 0,1,2 --budget 60 --seed 7"},
      {"certify", "certify --domain unit_square --h 0.03125 --k 3 --pole-at 0.5,0.5 --seed 7"},
      {"hexa", "hexa-diagnostic --h 0.03125 --entries 2:49.35,3:66.58:1,4:78.96"},
  };
  for (const auto& [name, args] : runs) {
    const auto dir = root / name;
    std::map<std::string, std::string> first;
    std::string problem;
    for (int rerun = 0; rerun < 2 && problem.empty(); ++rerun) {
      std::filesystem::remove_all(dir);
      // Different thread counts must not change the payloads either.
      const std::string cmd = std::string(MINPART_CLI) + " " + args + " --out " + dir.string() + " --threads " + (rerun ? "1" : "4") + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        problem = "command failed: " + cmd;
        break;
      }
      auto files = read_payloads(dir);
      if (rerun == 0) {
        first = std::move(files);
        if (first.empty()) problem = "no output files";
      } else if (files != first) {
        problem = "payloads differ between reruns";
      }
    }
    o.check(problem.empty(), problem.empty() ? fmt("%s: %zu files byte-identical across reruns", name.c_str(), first.size()) : name + ": " + problem);
  }
  std::filesystem::remove_all(root);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
    double limit_seconds;
  };
  const double none = std::numeric_limits<double>::infinity();
  const std::vector<Criterion> criteria{
      {"1 constant ledger", criterion_constants, 1},
      {"2 Weyl oracle", criterion_weyl, 120},
      {"3 spectral accuracy", criterion_spectral, 300},
      {"4 magnetic invariants", criterion_magnetic, none},
      {"5 partition pipeline", criterion_partitions, none},
      {"6 minimal-partition search", criterion_search, 1800},
      {"7 certificate", criterion_certificate, none},
      {"8 reproducibility", criterion_reproducibility, none},
  };
  int failed = 0;
  for (const auto& [name, run, limit] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (std::isfinite(limit)) o.check(secs < limit, fmt("runtime %.1f s within %.0f s", secs, limit));
    std::cout << (o.pass ? "PASS " : "FAIL ") << "criterion " << name << fmt(" (%.1f s)", secs) << "\n";
    for (const auto& d : o.details) std::cout << "    " << d << "\n";
    std::cout.flush();
    failed += !o.pass;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
