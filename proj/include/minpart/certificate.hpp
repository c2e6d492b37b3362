#pragma once

// Finite-k counting certificate: pole-avoiding square tilings, the
// superadditivity of counting functions over the tiling, the threshold
// inequality relating k, the partition energy and the number of odd critical
// points, and the resulting lower bound nu_k >= c0 k.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "minpart/constants_ledger.hpp"
#include "minpart/eigensolver.hpp"
#include "minpart/geometry.hpp"
#include "minpart/magnetic_operator.hpp"
#include "minpart/weyl_counting.hpp"

namespace minpart {

struct TilingReport {
  double lambda = 0.0;
  double t = 0.0;
  double side = 0.0;
  std::size_t kept = 0;
  std::size_t excluded_by_pole = 0;
  std::size_t pole_count = 0;
  double domain_area = 0.0;
  double covered_area = 0.0;
  /// Area of the domain not covered by squares lying fully inside it.
  double boundary_deficit = 0.0;
  /// boundary_deficit * sqrt(lambda): the measured boundary-layer constant.
  double boundary_constant = 0.0;
  /// Lower-left corners of the kept squares.
  std::vector<Point> squares;
};

/// Squares of side t/sqrt(lambda) on the lattice anchored at the bounding-box
/// minimum; a square is kept when it lies in the closed domain and no pole lies
/// in the closed square.
inline TilingReport tile_squares(const DomainSpec& spec, const std::vector<Point>& poles, double lambda, double t) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (!(t >= 1) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "t must be >= 1");
  TilingReport r;
  r.lambda = lambda;
  r.t = t;
  r.side = t / std::sqrt(lambda);
  r.pole_count = poles.size();
  r.domain_area = spec.area();
  if (r.side > spec.diameter())
    throw Error(ErrorCode::SideTooLarge, "square side " + std::to_string(r.side) + " exceeds the domain diameter");
  const auto box = spec.bbox();
  const auto nx = static_cast<long long>(std::floor((box.xmax - box.xmin) / r.side + 1e-9));
  const auto ny = static_cast<long long>(std::floor((box.ymax - box.ymin) / r.side + 1e-9));
  std::size_t inside = 0;
  for (long long b = 0; b < ny; ++b)
    for (long long a = 0; a < nx; ++a) {
      const Point c{box.xmin + static_cast<double>(a) * r.side, box.ymin + static_cast<double>(b) * r.side};
      if (!spec.contains_square(c, r.side)) continue;
      ++inside;
      bool hit = false;
      for (const auto& p : poles)
        if (p.x >= c.x && p.x <= c.x + r.side && p.y >= c.y && p.y <= c.y + r.side) hit = true;
      if (hit) {
        ++r.excluded_by_pole;
        continue;
      }
      r.squares.push_back(c);
    }
  r.kept = r.squares.size();
  r.covered_area = static_cast<double>(r.kept) * r.side * r.side;
  r.boundary_deficit = std::max(0.0, r.domain_area - static_cast<double>(inside) * r.side * r.side);
  r.boundary_constant = r.boundary_deficit * std::sqrt(lambda);
  return r;
}

inline TilingReport tile_squares(const Grid& grid, const PoleConfig& poles, double lambda, double t) {
  return tile_squares(grid.domain(), poles.coordinates(grid), lambda, t);
}

struct SuperadditivityVerdict {
  /// Count of each kept square, n(t) on the unit square by dilation.
  std::size_t per_square = 0;
  std::size_t sum = 0;
  std::size_t discrete_count = 0;
  std::size_t slack = 0;
  bool holds = false;
  long long margin = 0;
};

/// Compares the summed square counts with the discrete count of the
/// Aharonov-Bohm operator on the whole grid below lambda. Squares are pole
/// free, so each contributes the Dirichlet count of a plain square.
inline SuperadditivityVerdict check_superadditivity(const Grid& grid, const PoleConfig& poles, double lambda,
                                                    const TilingReport& tiling, std::size_t slack = 0) {
  if (tiling.lambda != lambda) throw Error(ErrorCode::InvalidArgument, "tiling was built for a different lambda");
  SuperadditivityVerdict v;
  v.per_square = n_square_exact(tiling.side * std::sqrt(lambda));
  v.sum = tiling.kept * v.per_square;
  v.discrete_count = count_below(assemble_ab(grid, poles), lambda);
  v.slack = slack;
  v.margin = static_cast<long long>(v.discrete_count) - static_cast<long long>(v.sum);
  v.holds = v.sum <= v.discrete_count + slack;
  return v;
}

struct Z1Report {
  std::size_t k = 0;
  double energy = 0.0;
  double poles = 0.0;
  double t = 0.0;
  double eps = 0.0;
  double area = 0.0;
  double o1 = 0.0;
  double rhs = 0.0;
  double rhs_over_k = 0.0;
  /// The threshold inequality k >= rhs fails: such data cannot come from a
  /// minimal partition.
  bool contradiction = false;
  double faber_krahn_lhs = 0.0;
  double faber_krahn_constant = 0.0;
  double alpha = 0.0;
  double alpha_threshold = 0.0;
  /// alpha_threshold * k, the lower bound on the number of odd critical points.
  double lower_bound = 0.0;
  bool bound_satisfied = false;
  double t_analytic = 0.0;
  bool t_admissible = false;
  double c0_times_k = 0.0;
};

/// Right-hand side (1/4pi)(1-eps) t^2 (A - l t^2/L + o1)(L/t^2) of the
/// threshold inequality, with the comparison against k and the bound it
/// implies for l.
inline Z1Report evaluate_z1(std::size_t k, double energy, double poles, double t, double eps, double area, double o1 = 0.0,
                            double j2 = j01_squared()) {
  if (!(eps > 0 && eps < interval_end(j2)))
    throw Error(ErrorCode::InadmissibleEps, "eps=" + std::to_string(eps) + " outside (0, " + std::to_string(interval_end(j2)) + ")");
  if (k == 0 || !(energy > 0) || !(t > 0) || !(area > 0) || !(poles >= 0))
    throw Error(ErrorCode::InvalidArgument, "k, energy, t and area must be positive, poles non-negative");
  using std::numbers::pi;
  Z1Report z;
  z.k = k;
  z.energy = energy;
  z.poles = poles;
  z.t = t;
  z.eps = eps;
  z.area = area;
  z.o1 = o1;
  z.rhs = (1.0 - eps) * t * t / (4.0 * pi) * (area - poles * t * t / energy + o1) * (energy / (t * t));
  const double kd = static_cast<double>(k);
  z.rhs_over_k = z.rhs / kd;
  z.contradiction = z.rhs > kd;
  z.faber_krahn_lhs = area * energy / kd;
  z.faber_krahn_constant = faber_krahn_constant(j2);
  z.alpha = poles / kd;
  z.alpha_threshold = alpha_threshold(eps, t, j2);
  z.lower_bound = z.alpha_threshold * kd;
  z.bound_satisfied = poles >= z.lower_bound;
  z.t_analytic = analytic_t_of_eps(eps);
  z.t_admissible = t >= z.t_analytic;
  z.c0_times_k = c0_of_eps(eps, j2) * kd;
  return z;
}

struct NuBound {
  std::size_t k = 0;
  double c0 = 0.0;
  double c0_corrected = 0.0;
  double value = 0.0;
  double value_corrected = 0.0;
  std::size_t ceiling = 0;
  std::size_t ceiling_corrected = 0;
  bool vacuous = false;
  bool vacuous_corrected = false;
  std::size_t conjectured = 0;
  std::size_t euler_upper = 0;
};

inline NuBound nu_lower_bound(std::size_t k, double j2 = j01_squared()) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  NuBound b;
  b.k = k;
  b.c0 = c0_closed_form(j2);
  b.c0_corrected = c0_corrected_of_eps(eps_max(j2), j2);
  b.value = b.c0 * static_cast<double>(k);
  b.value_corrected = b.c0_corrected * static_cast<double>(k);
  b.ceiling = static_cast<std::size_t>(std::ceil(b.value));
  b.ceiling_corrected = static_cast<std::size_t>(std::ceil(b.value_corrected));
  b.vacuous = b.value < 1.0;
  b.vacuous_corrected = b.value_corrected < 1.0;
  b.conjectured = 2 * k;
  b.euler_upper = k >= 2 ? 2 * k - 4 : 0;
  return b;
}

struct BoundReport {
  std::size_t k = 0;
  double energy = 0.0;
  std::size_t poles = 0;
  std::optional<TilingReport> tiling;
  std::optional<SuperadditivityVerdict> superadditivity;
  std::string tiling_skipped;
  /// Boundary deficit of the tiling at the z1 parameter t; the whole area
  /// when no square of that side fits.
  double z1_deficit = 0.0;
  Z1Report z1;
  NuBound nu;
};

/// Recomputes every inequality of a report from its raw fields; throws
/// InvariantViolation on any mismatch and on a superadditivity breach.
inline void recheck(const BoundReport& r) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvariantViolation, what); };
  const auto& z = r.z1;
  const double kd = static_cast<double>(z.k);
  if ((z.rhs > kd) != z.contradiction) fail("z1 contradiction flag disagrees with its fields");
  if ((z.poles >= z.lower_bound) != z.bound_satisfied) fail("lower-bound flag disagrees with its fields");
  if ((z.t >= z.t_analytic) != z.t_admissible) fail("t admissibility flag disagrees with its fields");
  if (std::abs(z.faber_krahn_lhs - z.area * z.energy / kd) > 1e-12 * std::abs(z.faber_krahn_lhs))
    fail("Faber-Krahn value disagrees with its fields");
  if (r.tiling) {
    const auto& T = *r.tiling;
    if (T.kept != T.squares.size()) fail("tiling count disagrees with its squares");
    if (std::abs(T.covered_area - static_cast<double>(T.kept) * T.side * T.side) > 1e-12 * std::max(1.0, T.domain_area))
      fail("covered area disagrees with the kept squares");
    const double lower = T.domain_area - static_cast<double>(T.excluded_by_pole) * T.side * T.side - T.boundary_deficit;
    if (T.covered_area < lower - 1e-12 * std::max(1.0, T.domain_area)) fail("covered area below the measured bound");
  }
  if (r.superadditivity) {
    const auto& s = *r.superadditivity;
    if (s.sum != r.tiling->kept * s.per_square) fail("square count sum disagrees with its fields");
    if ((s.sum <= s.discrete_count + s.slack) != s.holds) fail("superadditivity flag disagrees with its fields");
    if (!s.holds)
      fail("superadditivity violated: sum " + std::to_string(s.sum) + " > discrete count " + std::to_string(s.discrete_count));
  }
}

struct CertifyOptions {
  double eps = 0.0;  // 0 selects eps_max
  double t_z1 = 0.0;  // 0 selects t(eps)
  double t_tile = 5.0;
  std::size_t slack = 0;
};

/// Full certificate for a k-partition with energy `energy` whose odd critical
/// points are `poles`. The tiling uses the partition energy as lambda and its
/// measured boundary deficit enters the threshold inequality as the o(1) term.
inline BoundReport certify(const Grid& grid, const PoleConfig& poles, std::size_t k, double energy, const CertifyOptions& o = {}) {
  BoundReport r;
  r.k = k;
  r.energy = energy;
  r.poles = poles.plaquettes.size();
  const double eps = o.eps > 0 ? o.eps : eps_max();
  const double t = o.t_z1 > 0 ? o.t_z1 : analytic_t_of_eps(eps);
  try {
    r.tiling = tile_squares(grid, poles, energy, o.t_tile);
    r.superadditivity = check_superadditivity(grid, poles, energy, *r.tiling, o.slack);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SideTooLarge) throw;
    r.tiling.reset();
    r.tiling_skipped = e.what();
  }
  r.z1_deficit = grid.domain().area();
  try {
    r.z1_deficit = tile_squares(grid, poles, energy, t).boundary_deficit;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SideTooLarge) throw;
  }
  r.z1 = evaluate_z1(k, energy, static_cast<double>(r.poles), t, eps, grid.domain().area(), -r.z1_deficit);
  r.nu = nu_lower_bound(k);
  recheck(r);
  return r;
}

inline nlohmann::json to_json(const TilingReport& t) {
  nlohmann::json j;
  j["lambda"] = t.lambda;
  j["t"] = t.t;
  j["side"] = t.side;
  j["kept"] = t.kept;
  j["excluded_by_pole"] = t.excluded_by_pole;
  j["pole_count"] = t.pole_count;
  j["domain_area"] = t.domain_area;
  j["covered_area"] = t.covered_area;
  j["boundary_deficit"] = t.boundary_deficit;
  j["boundary_constant"] = t.boundary_constant;
  return j;
}

inline nlohmann::json to_json(const SuperadditivityVerdict& v) {
  return {{"per_square_count", v.per_square}, {"sum", v.sum},       {"discrete_count", v.discrete_count},
          {"slack", v.slack},                 {"holds", v.holds},   {"margin", v.margin}};
}

inline nlohmann::json to_json(const Z1Report& z) {
  nlohmann::json j;
  j["k"] = z.k;
  j["energy"] = z.energy;
  j["odd_points"] = z.poles;
  j["t"] = z.t;
  j["t_analytic"] = z.t_analytic;
  j["t_admissible"] = z.t_admissible;
  j["eps"] = z.eps;
  j["area"] = z.area;
  j["o1"] = z.o1;
  j["rhs"] = z.rhs;
  j["rhs_over_k"] = z.rhs_over_k;
  j["contradiction"] = z.contradiction;
  j["faber_krahn_lhs"] = z.faber_krahn_lhs;
  j["faber_krahn_constant"] = z.faber_krahn_constant;
  j["alpha"] = z.alpha;
  j["alpha_threshold"] = z.alpha_threshold;
  j["lower_bound"] = z.lower_bound;
  j["bound_satisfied"] = z.bound_satisfied;
  j["c0_times_k"] = z.c0_times_k;
  return j;
}

inline nlohmann::json to_json(const NuBound& b) {
  return {{"k", b.k},
          {"c0", b.c0},
          {"c0_corrected", b.c0_corrected},
          {"value", b.value},
          {"value_corrected", b.value_corrected},
          {"ceiling", b.ceiling},
          {"ceiling_corrected", b.ceiling_corrected},
          {"vacuous", b.vacuous},
          {"vacuous_corrected", b.vacuous_corrected},
          {"conjectured", b.conjectured},
          {"euler_upper", b.euler_upper}};
}

inline nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["k"] = r.k;
  j["energy"] = r.energy;
  j["odd_points"] = r.poles;
  j["tiling"] = r.tiling ? to_json(*r.tiling) : nlohmann::json(nullptr);
  if (!r.tiling_skipped.empty()) j["tiling_skipped"] = r.tiling_skipped;
  j["z1_boundary_deficit"] = r.z1_deficit;
  j["superadditivity"] = r.superadditivity ? to_json(*r.superadditivity) : nlohmann::json(nullptr);
  j["z1"] = to_json(r.z1);
  j["nu_lower_bound"] = to_json(r.nu);
  return j;
}

}  // namespace minpart
