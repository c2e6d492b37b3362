#pragma once

// Exact Dirichlet eigenvalue counting on the unit square by lattice
// enumeration, and checks of lower bounds on that count.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "minpart/errors.hpp"

namespace minpart {

/// #{(m,n) >= 1 : pi^2 (m^2 + n^2) < t^2}, i.e. eigenvalues of the unit
/// square strictly below t^2.
inline std::size_t n_square_exact(double t) {
  if (!(t >= 0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "t must be finite and >= 0");
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double t2 = t * t;
  auto below = [&](long long m, long long n) { return pi2 * static_cast<double>(m * m + n * n) < t2; };
  std::size_t total = 0;
  for (long long m = 1; below(m, 1); ++m) {
    auto n = static_cast<long long>(std::floor(std::sqrt(std::max(0.0, t2 / pi2 - static_cast<double>(m * m)))));
    while (n >= 1 && !below(m, n)) --n;
    while (below(m, n + 1)) ++n;
    total += static_cast<std::size_t>(n);
  }
  return total;
}

/// Lower bound with coefficients -2t/pi^2 + 1/pi^2, as quoted in the
/// literature for t >= 2.
inline double weyl_bound_quoted(double t) {
  using std::numbers::pi;
  return t * t / (4.0 * pi) - 2.0 * t / (pi * pi) + 1.0 / (pi * pi);
}

/// Quarter-disk lattice bound t^2/(4 pi) - 2t/pi + 1 (R = t/pi).
inline double weyl_bound_corrected(double t) {
  using std::numbers::pi;
  return t * t / (4.0 * pi) - 2.0 * t / pi + 1.0;
}

struct CountReport {
  double t = 0.0;
  std::size_t n_exact = 0;
  double bound_paper = 0.0;
  double bound_corrected = 0.0;
  bool satisfied_paper = false;
  bool satisfied_corrected = false;
};

inline CountReport count_report(double t) {
  CountReport r;
  r.t = t;
  r.n_exact = n_square_exact(t);
  r.bound_paper = weyl_bound_quoted(t);
  r.bound_corrected = weyl_bound_corrected(t);
  r.satisfied_paper = static_cast<double>(r.n_exact) > r.bound_paper;
  r.satisfied_corrected = static_cast<double>(r.n_exact) > r.bound_corrected;
  return r;
}

struct UniversalBoundCheck {
  std::vector<CountReport> reports;
  std::vector<double> violations_paper;
  std::vector<double> violations_corrected;
};

inline UniversalBoundCheck check_universal_bound(const std::vector<double>& t_grid) {
  UniversalBoundCheck out;
  out.reports.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t >= 2.0)) throw Error(ErrorCode::InvalidArgument, "universal bound is stated for t >= 2");
    auto r = count_report(t);
    if (!r.satisfied_paper) out.violations_paper.push_back(t);
    if (!r.satisfied_corrected) out.violations_corrected.push_back(t);
    out.reports.push_back(r);
  }
  return out;
}

/// Uniform t grid t_i = t_min + i * step, computed from the integer index.
inline std::vector<double> t_grid(double t_min, double t_max, double step) {
  if (!(step > 0) || !(t_max >= t_min)) throw Error(ErrorCode::InvalidArgument, "bad t grid");
  const auto count = static_cast<long long>(std::floor((t_max - t_min) / step + 1e-9));
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(count + 1));
  for (long long i = 0; i <= count; ++i) g.push_back(t_min + static_cast<double>(i) * step);
  return g;
}

inline void write_count_csv(std::ostream& os, const std::vector<CountReport>& rows) {
  os << "t,n_exact,bound_paper,ok_paper,bound_corrected,ok_corrected\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%zu,%.12g,%d,%.12g,%d\n", r.t, r.n_exact, r.bound_paper,
                  r.satisfied_paper ? 1 : 0, r.bound_corrected, r.satisfied_corrected ? 1 : 0);
    os << buf;
  }
}

inline bool check_wq(double eps, double t) {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
  if (!(t > 0)) throw Error(ErrorCode::InvalidArgument, "t must be positive");
  return static_cast<double>(n_square_exact(t)) >= (1.0 - eps) * t * t / (4.0 * std::numbers::pi);
}

/// Analytic choice t(eps) = max(2, 8/(eps pi)) that makes the quoted bound
/// dominate (1-eps) t^2/(4 pi).
inline double analytic_t_of_eps(double eps) { return std::max(2.0, 8.0 / (eps * std::numbers::pi)); }

/// Same construction under the corrected bound: eps t/(4 pi) >= 2/pi.
inline double corrected_t_of_eps(double eps) { return std::max(2.0, 8.0 / eps); }

struct WqThreshold {
  double empirical_t = 0.0;
  double analytic_t = 0.0;
  double step = 0.01;
};

/// Smallest grid value t (step 0.01 by default) such that check_wq holds on
/// every grid point of [t, t_max].
inline WqThreshold min_t_for_wq(double eps, double t_max, double step = 0.01) {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
  const auto top = static_cast<long long>(std::floor(t_max / step + 1e-9));
  if (top < 1) throw Error(ErrorCode::NotFound, "t_max below one grid step");
  long long first_ok = top + 1;
  for (long long i = top; i >= 1; --i) {
    if (!check_wq(eps, static_cast<double>(i) * step)) break;
    first_ok = i;
  }
  if (first_ok > top)
    throw Error(ErrorCode::NotFound, "no t <= " + std::to_string(t_max) + " satisfies the Weyl lower bound for eps=" + std::to_string(eps));
  return {static_cast<double>(first_ok) * step, analytic_t_of_eps(eps), step};
}

}  // namespace minpart
