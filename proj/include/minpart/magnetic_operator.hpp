#pragma once

// Discrete Dirichlet Laplacian and the real (K_X-real) Aharonov-Bohm
// Hamiltonian with flux pi per pole, realised by flipping the sign of every
// lattice edge crossed by an odd number of branch cuts.

#include <cstdint>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "minpart/geometry.hpp"

namespace minpart {

/// Edge signs stored per point for its right and up edges (+1 when the edge
/// is absent).
class GaugeField {
 public:
  GaugeField() = default;
  explicit GaugeField(std::size_t n) : right_(n, 1), up_(n, 1) {}

  int sigma_right(int id) const { return right_[static_cast<std::size_t>(id)]; }
  int sigma_up(int id) const { return up_[static_cast<std::size_t>(id)]; }

  /// Sign of the edge between adjacent points a and b (symmetric).
  int sigma(const Grid& grid, int a, int b) const {
    const auto pa = grid.index(a), pb = grid.index(b);
    if (pa.iy == pb.iy) return sigma_right(pa.ix < pb.ix ? a : b);
    return sigma_up(pa.iy < pb.iy ? a : b);
  }

  void flip(const Grid& grid, const Edge& e) {
    const auto pa = grid.index(e.a), pb = grid.index(e.b);
    const auto lo = static_cast<std::size_t>((pa.iy == pb.iy ? (pa.ix < pb.ix) : (pa.iy < pb.iy)) ? e.a : e.b);
    if (pa.iy == pb.iy)
      right_[lo] = static_cast<std::int8_t>(-right_[lo]);
    else
      up_[lo] = static_cast<std::int8_t>(-up_[lo]);
  }

  int plaquette_product(const Grid& grid, LatticeIndex p) const {
    const auto c = grid.plaquette_corners(p);
    return sigma_right(c[0]) * sigma_up(c[1]) * sigma_right(c[3]) * sigma_up(c[0]);
  }

  bool trivial() const {
    for (auto s : right_)
      if (s != 1) return false;
    for (auto s : up_)
      if (s != 1) return false;
    return true;
  }

 private:
  std::vector<std::int8_t> right_;
  std::vector<std::int8_t> up_;
};

inline GaugeField build_gauge(const Grid& grid, const CutSet& cuts) {
  GaugeField g(grid.size());
  for (const auto& path : cuts.paths)
    for (const auto& e : path.edges) g.flip(grid, e);
  return g;
}

/// Interior plaquettes whose sign product disagrees with the parity of the
/// poles they contain.
inline std::vector<LatticeIndex> flux_violations(const Grid& grid, const PoleConfig& poles, const GaugeField& gauge) {
  std::vector<LatticeIndex> bad;
  for (const auto& p : grid.interior_plaquettes()) {
    int parity = 1;
    for (const auto& q : poles.plaquettes)
      if (q == p) parity = -parity;
    if (gauge.plaquette_product(grid, p) != parity) bad.push_back(p);
  }
  return bad;
}

struct SparseOperator {
  Eigen::SparseMatrix<double> matrix;
  double h = 0.0;
  std::size_t pole_count = 0;
  std::string domain_id;
  GaugeField gauge;

  Eigen::Index dim() const { return matrix.rows(); }
};

namespace detail {

inline SparseOperator assemble(const Grid& grid, GaugeField gauge, std::size_t pole_count) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) * 5);
  for (int i = 0; i < static_cast<int>(n); ++i) {
    t.emplace_back(i, i, 4.0 * inv_h2);
    if (const int r = grid.neighbor(i, Right); r >= 0) {
      const double v = -gauge.sigma_right(i) * inv_h2;
      t.emplace_back(i, r, v);
      t.emplace_back(r, i, v);
    }
    if (const int u = grid.neighbor(i, Up); u >= 0) {
      const double v = -gauge.sigma_up(i) * inv_h2;
      t.emplace_back(i, u, v);
      t.emplace_back(u, i, v);
    }
  }
  SparseOperator op;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(t.begin(), t.end());
  op.matrix.makeCompressed();
  op.h = grid.h();
  op.pole_count = pole_count;
  op.domain_id = grid.domain().id();
  op.gauge = std::move(gauge);
  return op;
}

}  // namespace detail

/// Five-point Dirichlet Laplacian on the grid's interior points.
inline SparseOperator assemble_laplacian(const Grid& grid) {
  return detail::assemble(grid, GaugeField(grid.size()), 0);
}

inline SparseOperator assemble_ab(const Grid& grid, const PoleConfig& poles, const CutSet& cuts) {
  validate_poles(grid, poles);
  auto gauge = build_gauge(grid, cuts);
  if (const auto bad = flux_violations(grid, poles, gauge); !bad.empty())
    throw Error(ErrorCode::InconsistentCuts, std::to_string(bad.size()) + " plaquette(s) carry the wrong flux, first at (" +
                                                 std::to_string(bad[0].ix) + "," + std::to_string(bad[0].iy) + ")");
  return detail::assemble(grid, std::move(gauge), poles.size());
}

inline SparseOperator assemble_ab(const Grid& grid, const PoleConfig& poles) {
  return assemble_ab(grid, poles, default_cuts(grid, poles));
}

struct GaugeVerdict {
  bool equivalent = false;
  /// Diagonal +-1 entries d with B = D A D when equivalent.
  std::vector<int> witness;
};

/// Decides whether B = D A D for a diagonal sign matrix D by propagating
/// signs along a spanning forest of the sparsity graph.
inline GaugeVerdict gauge_equivalent(const SparseOperator& a, const SparseOperator& b) {
  const auto& A = a.matrix;
  const auto& B = b.matrix;
  if (A.rows() != B.rows() || A.cols() != B.cols() || A.nonZeros() != B.nonZeros())
    throw Error(ErrorCode::DifferentStructure, "operators have different shapes");
  for (Eigen::Index c = 0; c <= A.outerSize(); ++c)
    if (A.outerIndexPtr()[c] != B.outerIndexPtr()[c]) throw Error(ErrorCode::DifferentStructure, "sparsity patterns differ");
  for (Eigen::Index k = 0; k < A.nonZeros(); ++k)
    if (A.innerIndexPtr()[k] != B.innerIndexPtr()[k]) throw Error(ErrorCode::DifferentStructure, "sparsity patterns differ");

  const auto n = static_cast<std::size_t>(A.rows());
  GaugeVerdict v;
  v.witness.assign(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (v.witness[root] != 0) continue;
    v.witness[root] = 1;
    std::queue<Eigen::Index> q;
    q.push(static_cast<Eigen::Index>(root));
    while (!q.empty()) {
      const auto c = q.front();
      q.pop();
      for (Eigen::Index k = A.outerIndexPtr()[c]; k < A.outerIndexPtr()[c + 1]; ++k) {
        const auto r = A.innerIndexPtr()[k];
        if (r == c || v.witness[static_cast<std::size_t>(r)] != 0) continue;
        const double av = A.valuePtr()[k], bv = B.valuePtr()[k];
        if (av == 0.0 || bv == 0.0) continue;
        v.witness[static_cast<std::size_t>(r)] = v.witness[static_cast<std::size_t>(c)] * ((av > 0) == (bv > 0) ? 1 : -1);
        q.push(r);
      }
    }
  }
  for (Eigen::Index c = 0; c < A.outerSize(); ++c) {
    for (Eigen::Index k = A.outerIndexPtr()[c]; k < A.outerIndexPtr()[c + 1]; ++k) {
      const auto r = A.innerIndexPtr()[k];
      const double expect = v.witness[static_cast<std::size_t>(r)] * v.witness[static_cast<std::size_t>(c)] * A.valuePtr()[k];
      if (expect != B.valuePtr()[k]) {
        v.equivalent = false;
        return v;
      }
    }
  }
  v.equivalent = true;
  return v;
}

/// Coordinate dump: one "row col value" line per stored entry, 0-based,
/// sorted by row then column.
inline void write_coordinate(std::ostream& os, const SparseOperator& op) {
  // Column-major storage of a symmetric matrix lists row c's entries in
  // ascending column order when read as (c, r).
  const auto& M = op.matrix;
  char buf[64];
  for (Eigen::Index c = 0; c < M.outerSize(); ++c) {
    for (Eigen::Index k = M.outerIndexPtr()[c]; k < M.outerIndexPtr()[c + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", M.valuePtr()[k]);
      os << c << ' ' << M.innerIndexPtr()[k] << ' ' << buf << '\n';
    }
  }
}

}  // namespace minpart
