#pragma once

// Heuristic search for minimal k-partitions through the magnetic
// characterisation: maximise the k-th eigenvalue of the real Aharonov-Bohm
// operator over pole positions, then take the nodal partition of the k-th
// eigenfunction at the best configuration found.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "minpart/eigensolver.hpp"
#include "minpart/geometry.hpp"
#include "minpart/magnetic_operator.hpp"
#include "minpart/partition_analysis.hpp"

namespace minpart {

inline PoleConfig canonical(PoleConfig poles) {
  std::sort(poles.plaquettes.begin(), poles.plaquettes.end());
  return poles;
}

/// lambda_k of the real AB operator as a function of the pole set, memoised
/// on the (sorted) snapped configuration. Safe for concurrent calls.
class LambdaObjective {
 public:
  LambdaObjective(const Grid& grid, std::size_t k, EigenOptions opt = {}) : grid_(grid), k_(k), opt_(opt) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  }

  double operator()(const PoleConfig& poles) {
    const auto key = canonical(poles).plaquettes;
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) {
        ++hits_;
        return it->second;
      }
    }
    const auto op = assemble_ab(grid_, PoleConfig{key});
    const double value = smallest_eigenpairs(op, k_, opt_).eigenvalues.back();
    std::lock_guard lock(mutex_);
    auto [it, inserted] = cache_.emplace(key, value);
    if (inserted) ++misses_;
    return it->second;
  }

  bool cached(const PoleConfig& poles) const {
    std::lock_guard lock(mutex_);
    return cache_.count(canonical(poles).plaquettes) > 0;
  }

  std::size_t evaluations() const {
    std::lock_guard lock(mutex_);
    return misses_;
  }
  std::size_t cache_hits() const {
    std::lock_guard lock(mutex_);
    return hits_;
  }
  const Grid& grid() const { return grid_; }
  std::size_t k() const { return k_; }

 private:
  struct KeyLess {
    bool operator()(const std::vector<LatticeIndex>& a, const std::vector<LatticeIndex>& b) const {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
  };

  const Grid& grid_;
  std::size_t k_;
  EigenOptions opt_;
  mutable std::mutex mutex_;
  std::map<std::vector<LatticeIndex>, double, KeyLess> cache_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// One objective evaluation from continuous pole positions (snapped).
inline double objective_lambda_k(const DomainSpec& spec, std::size_t k, const std::vector<Point>& poles, double h,
                                 const EigenOptions& opt = {}) {
  const auto grid = build_grid(spec, h);
  LambdaObjective f(grid, k, opt);
  return f(snap_poles(grid, poles));
}

struct SearchOptions {
  std::size_t k = 1;
  std::size_t poles = 0;
  double h = 1.0 / 64;
  std::size_t budget = 200;
  std::uint64_t seed = kDefaultSeed;
  double tol = kDefaultTol;
  double zero_tol = kDefaultZeroTol;
  unsigned threads = 1;
};

struct TraceEntry {
  std::size_t evaluation = 0;
  std::size_t restart = 0;
  double value = 0.0;
  double incumbent = 0.0;
  std::vector<LatticeIndex> poles;
};

struct SearchResult {
  PoleConfig best;
  double lambda_k = 0.0;
  Spectrum spectrum;
  NodalPartition partition;
  BasisChoice basis;
  double energy_estimate = 0.0;
  EulerVerdict euler;
  std::vector<TraceEntry> trace;
  std::size_t evaluations = 0;
  std::size_t restarts = 0;
  std::vector<std::string> warnings;
};

namespace detail {

/// Seeded Kronecker sequence in [0,1)^d: frac(offset + n * alpha) with
/// alpha_i the fractional part of sqrt(prime_i).
class KroneckerSequence {
 public:
  KroneckerSequence(std::size_t dim, std::uint64_t seed) {
    static constexpr std::array<int, 16> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (std::size_t i = 0; i < dim; ++i) {
      const double s = std::sqrt(static_cast<double>(primes[i % primes.size()] + 60 * static_cast<int>(i / primes.size())));
      alpha_.push_back(s - std::floor(s));
      offset_.push_back(uni(rng));
    }
  }

  std::vector<double> next() {
    ++n_;
    std::vector<double> x(alpha_.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = offset_[i] + static_cast<double>(n_) * alpha_[i];
      x[i] = v - std::floor(v);
    }
    return x;
  }

 private:
  std::vector<double> alpha_, offset_;
  std::uint64_t n_ = 0;
};

}  // namespace detail

/// Multi-start pattern search on plaquette indices. Each start polls +-step
/// moves of every pole coordinate, moves to the best strict improvement, and
/// halves the step when none exists; a step below one plaquette ends the
/// start. The budget counts distinct (uncached) objective evaluations.
inline SearchResult search_minimal_partition(const DomainSpec& spec, const SearchOptions& o) {
  if (o.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (o.budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  if (o.k >= 2 && o.poles > 2 * o.k - 4)
    throw Error(ErrorCode::InvalidPoleCount, std::to_string(o.poles) + " poles exceed the Euler bound 2k-4 for k=" + std::to_string(o.k));
  if (o.k < 2 && o.poles > 0) throw Error(ErrorCode::InvalidPoleCount, "k=1 admits no poles");

  const auto grid = build_grid(spec, o.h);
  EigenOptions eopt;
  eopt.tol = o.tol;
  eopt.seed = o.seed;
  LambdaObjective objective(grid, o.k, eopt);
  const auto plaquettes = grid.interior_plaquettes();
  if (plaquettes.size() < o.poles) throw Error(ErrorCode::InvalidPoleCount, "not enough interior plaquettes");

  SearchResult result;
  double best = -std::numeric_limits<double>::infinity();
  PoleConfig best_cfg;
  const unsigned threads = std::max(1u, o.threads);

  auto valid = [&](const PoleConfig& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!grid.plaquette_interior(c.plaquettes[i])) return false;
      for (std::size_t j = 0; j < i; ++j)
        if (c.plaquettes[i] == c.plaquettes[j]) return false;
    }
    return true;
  };

  // Evaluates a batch in order, respecting the remaining budget. Returns
  // values aligned with the accepted prefix of the batch.
  auto evaluate = [&](const std::vector<PoleConfig>& batch, std::size_t restart) {
    std::vector<PoleConfig> todo;
    std::size_t fresh = 0;
    for (const auto& c : batch) {
      const bool hit = objective.cached(c);
      if (!hit && objective.evaluations() + fresh >= o.budget) break;
      if (!hit) ++fresh;
      todo.push_back(c);
    }
    std::vector<double> values(todo.size());
    if (threads == 1 || todo.size() < 2) {
      for (std::size_t i = 0; i < todo.size(); ++i) values[i] = objective(todo[i]);
    } else {
      for (std::size_t lo = 0; lo < todo.size(); lo += threads) {
        std::vector<std::future<double>> fut;
        for (std::size_t i = lo; i < std::min(todo.size(), lo + threads); ++i)
          fut.push_back(std::async(std::launch::async, [&, i] { return objective(todo[i]); }));
        for (std::size_t i = 0; i < fut.size(); ++i) values[lo + i] = fut[i].get();
      }
    }
    for (std::size_t i = 0; i < todo.size(); ++i) {
      if (values[i] > best) {
        best = values[i];
        best_cfg = canonical(todo[i]);
      }
      result.trace.push_back({objective.evaluations(), restart, values[i], best, canonical(todo[i]).plaquettes});
    }
    return values;
  };

  if (o.poles == 0) {
    evaluate({PoleConfig{}}, 0);
    result.restarts = 1;
  } else {
    const auto b = spec.bbox();
    detail::KroneckerSequence seq(2 * o.poles, o.seed);
    const int span = std::max(grid.nx(), grid.ny());
    std::size_t restart = 0;
    double first_value = std::numeric_limits<double>::quiet_NaN();
    while (objective.evaluations() < o.budget) {
      PoleConfig cur;
      for (int attempt = 0; attempt < 10000; ++attempt) {
        const auto x = seq.next();
        cur.plaquettes.clear();
        for (std::size_t p = 0; p < o.poles; ++p)
          cur.plaquettes.push_back(grid.plaquette_of({b.xmin + x[2 * p] * b.width(), b.ymin + x[2 * p + 1] * b.height()}));
        if (valid(cur)) break;
      }
      if (!valid(cur)) break;
      cur = canonical(cur);
      ++restart;
      auto v0 = evaluate({cur}, restart);
      if (v0.empty()) break;
      double cur_value = v0.front();
      if (std::isnan(first_value)) first_value = cur_value;
      int step = std::max(1, span / 4);
      bool out_of_budget = false;
      while (step >= 1) {
        std::vector<PoleConfig> moves;
        for (std::size_t p = 0; p < o.poles; ++p) {
          for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            PoleConfig m = cur;
            m.plaquettes[p].ix += dx * step;
            m.plaquettes[p].iy += dy * step;
            if (valid(m)) moves.push_back(canonical(m));
          }
        }
        const auto vals = evaluate(moves, restart);
        if (vals.size() < moves.size()) out_of_budget = true;
        std::size_t arg = vals.size();
        double top = cur_value;
        for (std::size_t i = 0; i < vals.size(); ++i)
          if (vals[i] > top * (1.0 + 1e-12)) {
            top = vals[i];
            arg = i;
          }
        if (arg < vals.size()) {
          cur = moves[arg];
          cur_value = top;
        } else if (out_of_budget) {
          break;
        } else {
          step /= 2;
        }
      }
      if (out_of_budget) break;
    }
    result.restarts = restart;
    if (!(best > first_value)) result.warnings.push_back("BudgetExhaustedWithoutImprovement: no configuration improved on the first start");
  }

  if (!std::isfinite(best)) throw Error(ErrorCode::BudgetExhaustedWithoutImprovement, "no configuration was evaluated");
  result.best = best_cfg;
  result.evaluations = objective.evaluations();
  const auto op = assemble_ab(grid, result.best);
  result.spectrum = smallest_eigenpairs(op, o.k + 1 <= grid.size() ? o.k + 1 : o.k, eopt);
  result.lambda_k = result.spectrum.eigenvalues[o.k - 1];
  if (result.spectrum.size() > o.k) {
    const double next = result.spectrum.eigenvalues[o.k];
    if (next - result.lambda_k <= 1e-8 * result.lambda_k)
      result.warnings.push_back("lambda_k is degenerate at the optimum; the nodal partition depends on the basis chosen");
  }
  result.partition = extract_kth_partition(result.spectrum, o.k, op.gauge, grid, o.zero_tol, result.best, &result.basis);
  if (result.basis.partner >= 0)
    result.warnings.push_back("partition taken from a combination of eigenvectors " + std::to_string(o.k) + " and " +
                              std::to_string(result.basis.partner + 1) + " of a near-degenerate pair");
  compute_energies(result.partition, grid, eopt);
  result.energy_estimate = result.partition.energy;
  result.euler = euler_check(result.partition);
  if (result.partition.k != o.k)
    result.warnings.push_back("the k-th eigenfunction at the optimum has " + std::to_string(result.partition.k) +
                              " nodal domains, not k=" + std::to_string(o.k));
  if (!result.euler.pass) result.warnings.push_back("Euler bound violated by the extracted partition");
  return result;
}

struct SweepResult {
  std::vector<std::size_t> pole_counts;
  std::vector<SearchResult> results;
  /// Index of the largest lambda_k; ties keep the smaller pole count.
  std::size_t best = 0;
};

/// One search per pole count with otherwise identical options.
inline SweepResult sweep_pole_counts(const DomainSpec& spec, SearchOptions o, const std::vector<std::size_t>& counts) {
  if (counts.empty()) throw Error(ErrorCode::InvalidArgument, "empty pole-count sweep");
  SweepResult s;
  for (auto l : counts) {
    o.poles = l;
    s.pole_counts.push_back(l);
    s.results.push_back(search_minimal_partition(spec, o));
    if (s.results.back().lambda_k > s.results[s.best].lambda_k) s.best = s.results.size() - 1;
  }
  return s;
}

inline nlohmann::json to_json(const SearchResult& r, const Grid& grid) {
  nlohmann::json j;
  j["lambda_k"] = r.lambda_k;
  j["energy_estimate"] = r.energy_estimate;
  j["poles"] = nlohmann::json::array();
  for (const auto& p : r.best.plaquettes) {
    const auto c = grid.plaquette_center(p);
    j["poles"].push_back({{"ix", p.ix}, {"iy", p.iy}, {"x", c.x}, {"y", c.y}});
  }
  j["eigenvalues"] = r.spectrum.eigenvalues;
  j["residuals"] = r.spectrum.residuals;
  j["solver_iterations"] = r.spectrum.iterations;
  j["partition"] = to_json(r.partition);
  j["evaluations"] = r.evaluations;
  j["restarts"] = r.restarts;
  j["domains"] = r.partition.k;
  j["basis"] = {{"partner", r.basis.partner < 0 ? nlohmann::json(nullptr) : nlohmann::json(r.basis.partner + 1)}, {"angle", r.basis.angle}};
  j["euler"] = {{"odd", r.euler.odd}, {"bound", r.euler.bound}, {"vacuous", r.euler.vacuous}, {"pass", r.euler.pass}};
  j["warnings"] = r.warnings;
  auto& t = j["trace"] = nlohmann::json::array();
  for (const auto& e : r.trace) {
    nlohmann::json poles = nlohmann::json::array();
    for (const auto& p : e.poles) poles.push_back({p.ix, p.iy});
    t.push_back({{"evaluation", e.evaluation}, {"restart", e.restart}, {"value", e.value}, {"incumbent", e.incumbent}, {"poles", poles}});
  }
  return j;
}

}  // namespace minpart
