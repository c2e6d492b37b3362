#pragma once

// Nodal partitions of (possibly K_X-real) eigenvectors: sign-consistent flood
// fill, per-domain Dirichlet energies, critical points with arity and the
// Euler bound on odd critical points.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "minpart/constants_ledger.hpp"
#include "minpart/eigensolver.hpp"
#include "minpart/geometry.hpp"
#include "minpart/magnetic_operator.hpp"

namespace minpart {

inline constexpr int kBoundaryLabel = -1;
inline constexpr double kDefaultZeroTol = 1e-6;

struct CriticalPoint {
  Point location;
  LatticeIndex plaquette;
  int arity = 0;
  bool odd = false;
  /// Index of the pole matched to this point, or -1.
  int pole = -1;
};

struct NodalPartition {
  /// Per grid point: domain label in [0, k) or kBoundaryLabel.
  std::vector<int> labels;
  /// Per grid point: -1, 0 (below the zero tolerance) or +1.
  std::vector<std::int8_t> signs;
  /// Per grid point |u_i|; empty for partitions not built from a vector.
  std::vector<double> magnitudes;
  GaugeField gauge;
  std::size_t k = 0;
  std::vector<std::vector<int>> domains;
  /// Filled by compute_energies.
  std::vector<double> energies;
  std::vector<double> staircase_energies;
  double energy = 0.0;
  /// Interior points where at least 3 nodal arcs meet.
  std::vector<CriticalPoint> critical_points;
  /// Free ends of nodal arcs (a single arc, only possible at a pole).
  std::vector<CriticalPoint> endpoints;
  /// Per pole: index into critical_points, or -1 when no point lies within 2h.
  std::vector<int> pole_match;
  /// Per pole: index into endpoints, or -1.
  std::vector<int> pole_endpoint;

  std::size_t odd_count() const {
    return static_cast<std::size_t>(std::count_if(critical_points.begin(), critical_points.end(), [](const auto& c) { return c.odd; }));
  }
};

/// Sign changes around a closed lattice loop (consecutive ids adjacent, last
/// adjacent to first). Points with sign 0 are skipped and the gauge is
/// transported across them, so the parity always equals the parity of the
/// number of poles enclosed.
inline int loop_sign_changes(const Grid& grid, const std::vector<std::int8_t>& signs, const GaugeField& gauge,
                             const std::vector<int>& ring) {
  const std::size_t n = ring.size();
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i)
    if (signs[static_cast<std::size_t>(ring[i])] != 0) {
      start = i;
      break;
    }
  if (start == n) return 0;
  int changes = 0;
  int transported = 1;
  int last_sign = signs[static_cast<std::size_t>(ring[start])];
  for (std::size_t step = 1; step <= n; ++step) {
    const int prev = ring[(start + step - 1) % n];
    const int cur = ring[(start + step) % n];
    transported *= gauge.sigma(grid, prev, cur);
    const int s = signs[static_cast<std::size_t>(cur)];
    if (s == 0) continue;
    if (last_sign * s * transported < 0) ++changes;
    last_sign = s;
    transported = 1;
  }
  return changes;
}

/// Counter-clockwise boundary of the lattice rectangle [ix0,ix1]x[iy0,iy1];
/// empty when some boundary site is not interior.
inline std::vector<int> rectangle_ring(const Grid& grid, int ix0, int iy0, int ix1, int iy1) {
  std::vector<int> ring;
  auto push = [&](int ix, int iy) {
    const int id = grid.id_at(ix, iy);
    ring.push_back(id);
    return id >= 0;
  };
  bool ok = true;
  for (int ix = ix0; ix < ix1; ++ix) ok &= push(ix, iy0);
  for (int iy = iy0; iy < iy1; ++iy) ok &= push(ix1, iy);
  for (int ix = ix1; ix > ix0; --ix) ok &= push(ix, iy1);
  for (int iy = iy1; iy > iy0; --iy) ok &= push(ix0, iy);
  if (!ok) ring.clear();
  return ring;
}

namespace detail {

inline std::vector<CriticalPoint> detect_critical_points(const Grid& grid, const std::vector<std::int8_t>& signs,
                                                         const GaugeField& gauge) {
  struct Candidate {
    LatticeIndex p;
    int c4, c12;
  };
  std::vector<Candidate> cands;
  for (const auto& p : grid.interior_plaquettes()) {
    const auto ring12 = rectangle_ring(grid, p.ix - 1, p.iy - 1, p.ix + 2, p.iy + 2);
    if (ring12.empty()) continue;
    const int c12 = loop_sign_changes(grid, signs, gauge, ring12);
    if (c12 < 3 && c12 % 2 == 0) continue;
    const auto ring4 = rectangle_ring(grid, p.ix, p.iy, p.ix + 1, p.iy + 1);
    cands.push_back({p, loop_sign_changes(grid, signs, gauge, ring4), c12});
  }

  // 8-connected clusters of candidate plaquettes, one critical point each.
  std::vector<int> cluster(cands.size(), -1);
  std::vector<std::vector<std::size_t>> clusters;
  auto find = [&](LatticeIndex q) -> std::optional<std::size_t> {
    auto it = std::lower_bound(cands.begin(), cands.end(), q, [](const Candidate& c, LatticeIndex v) { return c.p < v; });
    if (it != cands.end() && it->p == q) return static_cast<std::size_t>(it - cands.begin());
    return std::nullopt;
  };
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cluster[i] >= 0) continue;
    const int id = static_cast<int>(clusters.size());
    clusters.emplace_back();
    std::queue<std::size_t> q;
    q.push(i);
    cluster[i] = id;
    while (!q.empty()) {
      const auto c = q.front();
      q.pop();
      clusters.back().push_back(c);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (auto j = find({cands[c].p.ix + dx, cands[c].p.iy + dy}); j && cluster[*j] < 0) {
            cluster[*j] = id;
            q.push(*j);
          }
        }
    }
  }

  std::vector<CriticalPoint> out;
  for (const auto& members : clusters) {
    double cx = 0, cy = 0;
    for (auto m : members) {
      cx += cands[m].p.ix;
      cy += cands[m].p.iy;
    }
    cx /= static_cast<double>(members.size());
    cy /= static_cast<double>(members.size());
    auto key = [&](const Candidate& c) {
      const double d2 = (c.p.ix - cx) * (c.p.ix - cx) + (c.p.iy - cy) * (c.p.iy - cy);
      return std::make_tuple(c.c4 % 2, c.c4, c.c12, -d2);
    };
    std::size_t best = members.front();
    for (auto m : members)
      if (key(cands[m]) > key(cands[best])) best = m;
    CriticalPoint cp;
    cp.plaquette = cands[best].p;
    cp.location = grid.plaquette_center(cp.plaquette);
    cp.arity = cands[best].c12;
    cp.odd = cp.arity % 2 == 1;
    out.push_back(cp);
  }
  return out;
}

}  // namespace detail

/// Dual-lattice picture of the boundary set: plaquettes whose corners carry
/// at least two labels (kBoundaryLabel counts as a label), with arity equal
/// to the number of label changes around the plaquette.
struct BoundaryGraph {
  std::vector<LatticeIndex> vertices;
  std::vector<int> arity;
  std::vector<std::pair<int, int>> arcs;
};

inline BoundaryGraph boundary_graph(const NodalPartition& part, const Grid& grid) {
  BoundaryGraph g;
  std::vector<int> vid;
  const auto plaqs = grid.interior_plaquettes();
  auto slot = [&](LatticeIndex p) { return static_cast<std::size_t>(p.iy) * grid.nx() + p.ix; };
  vid.assign(static_cast<std::size_t>(grid.nx()) * grid.ny(), -1);
  for (const auto& p : plaqs) {
    const auto c = grid.plaquette_corners(p);
    int changes = 0;
    for (int e = 0; e < 4; ++e)
      if (part.labels[static_cast<std::size_t>(c[e])] != part.labels[static_cast<std::size_t>(c[(e + 1) % 4])]) ++changes;
    if (changes == 0) continue;
    vid[slot(p)] = static_cast<int>(g.vertices.size());
    g.vertices.push_back(p);
    g.arity.push_back(changes);
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto p = g.vertices[v];
    // Right neighbour shares the edge (ix+1,iy)-(ix+1,iy+1); upper shares (ix,iy+1)-(ix+1,iy+1).
    const LatticeIndex right{p.ix + 1, p.iy}, up{p.ix, p.iy + 1};
    if (right.ix + 1 < grid.nx() && vid[slot(right)] >= 0) {
      const int a = grid.id_at(p.ix + 1, p.iy), b = grid.id_at(p.ix + 1, p.iy + 1);
      if (part.labels[static_cast<std::size_t>(a)] != part.labels[static_cast<std::size_t>(b)])
        g.arcs.emplace_back(static_cast<int>(v), vid[slot(right)]);
    }
    if (up.iy + 1 < grid.ny() && vid[slot(up)] >= 0) {
      const int a = grid.id_at(p.ix, p.iy + 1), b = grid.id_at(p.ix + 1, p.iy + 1);
      if (part.labels[static_cast<std::size_t>(a)] != part.labels[static_cast<std::size_t>(b)])
        g.arcs.emplace_back(static_cast<int>(v), vid[slot(up)]);
    }
  }
  return g;
}

/// Singular points of the nodal set: dual vertices whose enclosing 12-point
/// ring (around the 3x3 plaquette block) is crossed by at least 3 arcs or by
/// an odd number of arcs. Clusters of adjacent hits are reported once.
/// Arity 1 marks a free arc end, arity >= 3 a critical point.
inline std::vector<CriticalPoint> singular_points(const NodalPartition& part, const Grid& grid) {
  return detail::detect_critical_points(grid, part.signs, part.gauge);
}

inline std::vector<CriticalPoint> critical_points(const NodalPartition& part, const Grid& grid) {
  auto all = singular_points(part, grid);
  std::erase_if(all, [](const CriticalPoint& c) { return c.arity < 3; });
  return all;
}

namespace detail {

inline void match_nearest(std::vector<int>& match, std::vector<CriticalPoint>& points, const Grid& grid, const PoleConfig& poles) {
  match.assign(poles.size(), -1);
  for (auto& c : points) c.pole = -1;
  const double radius = 2.0 * grid.h() * (1.0 + 1e-9);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const auto q = grid.plaquette_center(poles.plaquettes[i]);
    double best = radius;
    for (std::size_t c = 0; c < points.size(); ++c) {
      const auto& l = points[c].location;
      const double d = std::hypot(l.x - q.x, l.y - q.y);
      if (d <= best) {
        best = d;
        match[i] = static_cast<int>(c);
      }
    }
    if (match[i] >= 0) points[static_cast<std::size_t>(match[i])].pole = static_cast<int>(i);
  }
}

}  // namespace detail

/// Matches each pole to the nearest critical point and the nearest arc end
/// within 2h.
inline void match_poles(NodalPartition& part, const Grid& grid, const PoleConfig& poles) {
  detail::match_nearest(part.pole_match, part.critical_points, grid, poles);
  detail::match_nearest(part.pole_endpoint, part.endpoints, grid, poles);
}

/// Two adjacent points share a label when both exceed zero_tol * max|u| and
/// u_i u_j sigma_ij > 0; labels are the connected components of that graph,
/// numbered by their lowest point id.
inline NodalPartition extract_partition(const Eigen::VectorXd& u, const GaugeField& gauge, const Grid& grid,
                                        double zero_tol = kDefaultZeroTol, const PoleConfig& poles = {}) {
  if (static_cast<std::size_t>(u.size()) != grid.size()) throw Error(ErrorCode::InvalidArgument, "vector size does not match the grid");
  if (!(zero_tol > 0 && zero_tol < 0.1)) throw Error(ErrorCode::InvalidArgument, "zero_tol must lie in (0, 0.1)");
  const double umax = u.cwiseAbs().maxCoeff();
  if (!(umax > 0)) throw Error(ErrorCode::AllZero, "eigenvector vanishes identically");
  const double thr = zero_tol * umax;

  NodalPartition part;
  part.gauge = gauge;
  const std::size_t n = grid.size();
  part.signs.resize(n);
  part.magnitudes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = u[static_cast<Eigen::Index>(i)];
    part.magnitudes[i] = std::abs(v);
    part.signs[i] = static_cast<std::int8_t>(std::abs(v) <= thr ? 0 : (v > 0 ? 1 : -1));
  }
  part.labels.assign(n, kBoundaryLabel);
  for (std::size_t s = 0; s < n; ++s) {
    if (part.signs[s] == 0 || part.labels[s] != kBoundaryLabel) continue;
    const int label = static_cast<int>(part.domains.size());
    part.domains.emplace_back();
    std::queue<int> q;
    q.push(static_cast<int>(s));
    part.labels[s] = label;
    while (!q.empty()) {
      const int i = q.front();
      q.pop();
      part.domains.back().push_back(i);
      for (int j : grid.neighbors(i)) {
        if (j < 0) continue;
        const auto uj = static_cast<std::size_t>(j);
        if (part.labels[uj] != kBoundaryLabel || part.signs[uj] == 0) continue;
        if (part.signs[static_cast<std::size_t>(i)] * part.signs[uj] * gauge.sigma(grid, i, j) > 0) {
          part.labels[uj] = label;
          q.push(j);
        }
      }
    }
    std::sort(part.domains.back().begin(), part.domains.back().end());
  }
  part.k = part.domains.size();
  for (auto& c : singular_points(part, grid)) (c.arity >= 3 ? part.critical_points : part.endpoints).push_back(c);
  match_poles(part, grid, poles);
  return part;
}

/// Which vector of a spectrum a partition was taken from: the k-th
/// eigenvector itself (partner < 0) or cos(angle) u_k + sin(angle) u_partner
/// for a partner eigenvalue in the same near-degenerate cluster. Indices are
/// zero-based.
struct BasisChoice {
  int partner = -1;
  double angle = 0.0;
};

/// Nodal partition of the k-th eigenfunction. When that vector does not have k
/// nodal domains and a neighbouring eigenvalue lies within cluster_gap
/// (relative), the two-dimensional span is scanned in steps of pi/180 and the
/// first combination with exactly k domains is used instead.
inline NodalPartition extract_kth_partition(const Spectrum& s, std::size_t k, const GaugeField& gauge, const Grid& grid,
                                            double zero_tol = kDefaultZeroTol, const PoleConfig& poles = {},
                                            BasisChoice* choice = nullptr, double cluster_gap = 1e-3) {
  if (k < 1 || k > s.size()) throw Error(ErrorCode::InvalidArgument, "k outside the computed spectrum");
  if (choice) *choice = {};
  const auto uk = s.vector(k - 1);
  auto part = extract_partition(uk, gauge, grid, zero_tol, poles);
  if (part.k == k) return part;
  const double lk = s.eigenvalues[k - 1];
  for (std::size_t j : {k, k - 2}) {
    if (j >= s.size() || j == k - 1) continue;
    if (std::abs(s.eigenvalues[j] - lk) > cluster_gap * std::abs(lk)) continue;
    const auto uj = s.vector(j);
    for (int step = 1; step < 180; ++step) {
      const double a = step * std::numbers::pi / 180;
      const Eigen::VectorXd u = std::cos(a) * uk + std::sin(a) * uj;
      auto mixed = extract_partition(u, gauge, grid, zero_tol, poles);
      if (mixed.k != k) continue;
      if (choice) *choice = {static_cast<int>(j), a};
      return mixed;
    }
  }
  return part;
}

/// How the Dirichlet condition is imposed where a domain meets the nodal set.
enum class InterfaceTreatment {
  /// Plain restriction of the five-point Laplacian to the domain's points:
  /// the boundary sits on the first excluded lattice site.
  Staircase,
  /// Ghost-point treatment: across every edge leaving the domain the zero is
  /// placed by linear interpolation of |u|, at fraction
  /// theta = |u_i| / (|u_i| + |u_j|) of the edge, which adds (1/theta - 1)/h^2
  /// to the diagonal. Edges to exterior sites keep theta = 1.
  Fitted,
};

namespace detail {

inline double domain_ground_energy(const NodalPartition* part, const std::vector<int>& points, const Grid& grid,
                                   InterfaceTreatment mode, const EigenOptions& opt) {
  if (points.empty()) throw Error(ErrorCode::EmptyDomain, "domain has no points");
  const bool fitted = mode == InterfaceTreatment::Fitted && part && !part->magnitudes.empty();
  std::vector<int> local(grid.size(), -1);
  for (std::size_t i = 0; i < points.size(); ++i) local[static_cast<std::size_t>(points[i])] = static_cast<int>(i);
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int gi = points[i];
    const int li = static_cast<int>(i);
    double diag = 4.0 * inv_h2;
    for (int j : grid.neighbors(gi)) {
      if (j < 0) continue;
      const int lj = local[static_cast<std::size_t>(j)];
      bool coupled = lj >= 0;
      if (fitted) {
        coupled = coupled && part->signs[static_cast<std::size_t>(gi)] * part->signs[static_cast<std::size_t>(j)] *
                                     part->gauge.sigma(grid, gi, j) > 0;
        if (!coupled) {
          const double ui = part->magnitudes[static_cast<std::size_t>(gi)];
          const double uj = part->magnitudes[static_cast<std::size_t>(j)];
          const double theta = std::clamp(ui / (ui + uj), 1e-6, 1.0);
          diag += (1.0 / theta - 1.0) * inv_h2;
        }
      }
      if (coupled && gi < j) {
        t.emplace_back(li, lj, -inv_h2);
        t.emplace_back(lj, li, -inv_h2);
      }
    }
    t.emplace_back(li, li, diag);
  }
  SparseOperator op;
  const auto n = static_cast<Eigen::Index>(points.size());
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(t.begin(), t.end());
  op.h = grid.h();
  return smallest_eigenpairs(op, 1, opt).eigenvalues.front();
}

}  // namespace detail

/// Ground energy of the plain Dirichlet Laplacian on a set of grid points.
inline double dirichlet_energy(const std::vector<int>& points, const Grid& grid, const EigenOptions& opt = {}) {
  return detail::domain_ground_energy(nullptr, points, grid, InterfaceTreatment::Staircase, opt);
}

/// Ground energy of domain i without gauge: poles lie on domain boundaries,
/// so the magnetic potential can be gauged away inside each domain.
inline double domain_energy(const NodalPartition& part, std::size_t i, const Grid& grid,
                            InterfaceTreatment mode = InterfaceTreatment::Fitted, const EigenOptions& opt = {}) {
  if (i >= part.domains.size() || part.domains[i].empty()) throw Error(ErrorCode::EmptyDomain, "no domain " + std::to_string(i));
  return detail::domain_ground_energy(&part, part.domains[i], grid, mode, opt);
}

/// Fills per-domain energies (fitted interface, plus the staircase variant)
/// and the partition energy, the maximum of the fitted ones.
inline void compute_energies(NodalPartition& part, const Grid& grid, const EigenOptions& opt = {}) {
  part.energies.clear();
  part.staircase_energies.clear();
  for (std::size_t i = 0; i < part.domains.size(); ++i) {
    part.energies.push_back(domain_energy(part, i, grid, InterfaceTreatment::Fitted, opt));
    part.staircase_energies.push_back(domain_energy(part, i, grid, InterfaceTreatment::Staircase, opt));
  }
  part.energy = part.energies.empty() ? 0.0 : *std::max_element(part.energies.begin(), part.energies.end());
}

struct EulerVerdict {
  std::size_t k = 0;
  std::size_t odd = 0;
  long long bound = 0;
  bool vacuous = false;
  bool pass = false;
};

/// #X^odd <= 2k - 4; for k <= 2 the bound carries no information beyond
/// "no odd points" and is flagged vacuous.
inline EulerVerdict euler_check(std::size_t k, std::size_t odd) {
  EulerVerdict v;
  v.k = k;
  v.odd = odd;
  v.bound = 2 * static_cast<long long>(k) - 4;
  v.vacuous = k <= 2;
  v.pass = k < 2 || static_cast<long long>(odd) <= v.bound;
  return v;
}

inline EulerVerdict euler_check(const NodalPartition& part) { return euler_check(part.k, part.odd_count()); }

struct DomainFaberKrahn {
  std::size_t domain = 0;
  /// Point count times h^2.
  double area = 0.0;
  double product = 0.0;
  double slack = 0.0;
  bool holds = false;
};

/// A(D) lambda(D) >= pi j^2 per domain, using the fitted energies.
inline std::vector<DomainFaberKrahn> faber_krahn_domains(const NodalPartition& part, const Grid& grid) {
  if (part.energies.size() != part.domains.size()) throw Error(ErrorCode::InvalidArgument, "energies not computed");
  std::vector<DomainFaberKrahn> out;
  const double cell = grid.h() * grid.h();
  for (std::size_t i = 0; i < part.domains.size(); ++i) {
    DomainFaberKrahn d;
    d.domain = i;
    d.area = static_cast<double>(part.domains[i].size()) * cell;
    const auto fk = faber_krahn_lhs(d.area, part.energies[i], 1.0);
    d.product = fk.value;
    d.slack = fk.value - fk.constant;
    d.holds = fk.satisfied;
    out.push_back(d);
  }
  return out;
}

inline nlohmann::json to_json(const std::vector<DomainFaberKrahn>& v) {
  auto out = nlohmann::json::array();
  for (const auto& d : v)
    out.push_back({{"domain", d.domain}, {"area", d.area}, {"area_times_energy", d.product}, {"slack", d.slack}, {"holds", d.holds}});
  return out;
}

/// Ground energy of the regular hexagon of unit area, Richardson-extrapolated
/// from spacings h and h/2.
inline double hexagon_reference_energy(double h = 1.0 / 128) {
  const auto hex = DomainSpec::regular_polygon(6, 1.0);
  const double coarse = smallest_eigenpairs(assemble_laplacian(build_grid(hex, h)), 1).eigenvalues.front();
  const double fine = smallest_eigenpairs(assemble_laplacian(build_grid(hex, h / 2)), 1).eigenvalues.front();
  return richardson(coarse, fine);
}

struct HexagonalRow {
  std::size_t k = 0;
  double energy = 0.0;
  double scaled_energy = 0.0;  // A L_k / k
  std::optional<double> odd_per_k;
  bool faber_krahn_ok = false;
};

struct HexagonalReport {
  double area = 0.0;
  double hexagon_energy = 0.0;
  double faber_krahn = 0.0;
  double conjectured_odd_per_k = 2.0;
  std::vector<HexagonalRow> rows;
};

struct PartitionEnergyEntry {
  std::size_t k = 0;
  double energy = 0.0;
  std::optional<std::size_t> odd_points;
};

inline HexagonalReport hexagonal_diagnostic(const std::vector<PartitionEnergyEntry>& entries, double area, double hexagon_energy) {
  if (entries.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two (k, L_k) entries");
  HexagonalReport r;
  r.area = area;
  r.hexagon_energy = hexagon_energy;
  r.faber_krahn = faber_krahn_constant();
  for (const auto& e : entries) {
    HexagonalRow row;
    row.k = e.k;
    row.energy = e.energy;
    const auto fk = faber_krahn_lhs(area, e.energy, static_cast<double>(e.k));
    row.scaled_energy = fk.value;
    row.faber_krahn_ok = fk.satisfied;
    if (e.odd_points) row.odd_per_k = static_cast<double>(*e.odd_points) / static_cast<double>(e.k);
    r.rows.push_back(row);
  }
  return r;
}

inline nlohmann::json to_json(const HexagonalReport& r) {
  nlohmann::json j;
  j["area"] = r.area;
  j["hexagon_energy"] = r.hexagon_energy;
  j["pi_j_squared"] = r.faber_krahn;
  j["conjectured_odd_per_k"] = r.conjectured_odd_per_k;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json x{{"k", row.k}, {"L_k", row.energy}, {"area_L_over_k", row.scaled_energy}, {"faber_krahn_ok", row.faber_krahn_ok}};
    x["odd_per_k"] = row.odd_per_k ? nlohmann::json(*row.odd_per_k) : nlohmann::json(nullptr);
    j["rows"].push_back(x);
  }
  return j;
}

inline nlohmann::json to_json(const NodalPartition& p) {
  nlohmann::json j;
  j["k"] = p.k;
  j["energy"] = p.energy;
  j["energies"] = p.energies;
  j["staircase_energies"] = p.staircase_energies;
  j["domain_sizes"] = nlohmann::json::array();
  for (const auto& d : p.domains) j["domain_sizes"].push_back(d.size());
  j["critical_points"] = nlohmann::json::array();
  for (const auto& c : p.critical_points)
    j["critical_points"].push_back({{"x", c.location.x}, {"y", c.location.y}, {"arity", c.arity}, {"odd", c.odd}, {"pole", c.pole}});
  j["odd_count"] = p.odd_count();
  j["pole_match"] = p.pole_match;
  j["endpoints"] = nlohmann::json::array();
  for (const auto& c : p.endpoints) j["endpoints"].push_back({{"x", c.location.x}, {"y", c.location.y}, {"pole", c.pole}});
  j["pole_endpoint"] = p.pole_endpoint;
  const auto e = euler_check(p);
  j["euler"] = {{"odd", e.odd}, {"bound", e.bound}, {"vacuous", e.vacuous}, {"pass", e.pass}};
  return j;
}

/// Plain PGM (P2) of the labels, top row first; kBoundaryLabel and exterior
/// sites are 0, domains get evenly spaced grey levels.
inline void write_pgm(std::ostream& os, const NodalPartition& p, const Grid& grid) {
  os << "P2\n" << grid.nx() << ' ' << grid.ny() << "\n255\n";
  const std::size_t k = std::max<std::size_t>(p.k, 1);
  for (int iy = grid.ny() - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int id = grid.id_at(ix, iy);
      int level = 0;
      if (id >= 0 && p.labels[static_cast<std::size_t>(id)] >= 0)
        level = 40 + static_cast<int>((215 * static_cast<std::size_t>(p.labels[static_cast<std::size_t>(id)] + 1)) / k);
      os << std::min(level, 255) << (ix + 1 < grid.nx() ? ' ' : '\n');
    }
  }
}

}  // namespace minpart
