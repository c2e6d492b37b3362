#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "minpart/geometry.hpp"

using namespace minpart;

TEST(Grid, UnitSquareHalfSpacingHasOnlyTheCenter) {
  const auto g = build_grid(DomainSpec::unit_square(), 0.5);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_DOUBLE_EQ(g.coord(0).x, 0.5);
  EXPECT_DOUBLE_EQ(g.coord(0).y, 0.5);
  for (int n : g.neighbors(0)) EXPECT_LT(n, 0);
}

TEST(Grid, UnitSquareThirdSpacingIsTwoByTwo) {
  const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 3);
  ASSERT_EQ(g.size(), 4u);
  std::set<std::pair<long, long>> seen;
  for (int i = 0; i < 4; ++i) seen.insert({std::lround(g.coord(i).x * 3), std::lround(g.coord(i).y * 3)});
  EXPECT_EQ(seen, (std::set<std::pair<long, long>>{{1, 1}, {1, 2}, {2, 1}, {2, 2}}));
}

TEST(Grid, DiskCountMatchesDirectEnumeration) {
  const double h = 0.05;
  const auto g = build_grid(DomainSpec::disk(1.0), h);
  // Oracle: lattice x = -1 + i h, kept when the distance to the circle is >= h/2.
  std::size_t count = 0;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) {
      const double x = -1 + i * h, y = -1 + j * h;
      if (1.0 - std::hypot(x, y) >= 0.5 * h * (1 - 1e-12)) ++count;
    }
  EXPECT_EQ(g.size(), count);
  const double corrected = std::numbers::pi * (1 - h / 2) * (1 - h / 2) / (h * h);
  EXPECT_NEAR(static_cast<double>(g.size()) / corrected, 1.0, 0.02);
}

TEST(Grid, PointDensityScalesWithArea) {
  const std::vector<DomainSpec> domains{DomainSpec::unit_square(), DomainSpec::disk(1.0), DomainSpec::rectangle(2.0, 1.0),
                                        DomainSpec::regular_polygon(6, 1.0), DomainSpec::regular_polygon(5, 2.0)};
  for (const auto& d : domains)
    for (double frac : {1.0 / 20, 1.0 / 40, 1.0 / 80}) {
      const double h = d.diameter() * frac;
      const auto g = build_grid(d, h);
      const double ratio = static_cast<double>(g.size()) * h * h / d.area();
      EXPECT_GE(ratio, 0.8) << d.id() << " h=" << h;
      EXPECT_LE(ratio, 1.2) << d.id() << " h=" << h;
    }
}

TEST(Grid, AdjacencyIsSymmetricAndIdsContiguous) {
  const auto g = build_grid(DomainSpec::regular_polygon(6, 1.0), 1.0 / 24);
  for (int id = 0; id < static_cast<int>(g.size()); ++id) {
    const auto p = g.index(id);
    EXPECT_EQ(g.id_at(p.ix, p.iy), id);
    int count = 0;
    for (int d = 0; d < 4; ++d) {
      const int n = g.neighbor(id, static_cast<Direction>(d));
      if (n < 0) continue;
      ++count;
      EXPECT_EQ(g.neighbor(n, static_cast<Direction>((d + 2) % 4)), id);
    }
    EXPECT_LE(count, 4);
    if (id > 0) EXPECT_TRUE(g.index(id - 1) < p);
  }
}

TEST(Grid, SerializationIsDeterministic) {
  const auto a = build_grid(DomainSpec::disk(1.0), 0.1).to_json().dump();
  const auto b = build_grid(DomainSpec::disk(1.0), 0.1).to_json().dump();
  EXPECT_EQ(a, b);
}

TEST(Grid, RejectsBadSpacing) {
  EXPECT_THROW(build_grid(DomainSpec::unit_square(), 0.0), Error);
  EXPECT_THROW(build_grid(DomainSpec::unit_square(), 0.8), Error);
  try {
    build_grid(DomainSpec::rectangle(1.0, 0.01), 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyGrid);
  }
}

TEST(Domain, RegularPolygonVerticesFollowFromArea) {
  for (int n : {3, 5, 6, 9}) {
    const auto d = DomainSpec::regular_polygon(n, 1.7);
    EXPECT_NEAR(d.area(), 1.7, 1e-12);
    // Circumradius from A = (n/2) R^2 sin(2 pi / n); vertex i at angle 2 pi i / n.
    const double R = std::sqrt(2 * 1.7 / (n * std::sin(2 * std::numbers::pi / n)));
    for (int i = 0; i < n; ++i) {
      const double a = 2 * std::numbers::pi * i / n;
      EXPECT_TRUE(d.contains({0.999 * R * std::cos(a), 0.999 * R * std::sin(a)}));
      EXPECT_FALSE(d.contains({1.001 * R * std::cos(a), 1.001 * R * std::sin(a)}));
    }
    // Longest diagonal spans floor(n/2) edges.
    EXPECT_NEAR(d.diameter(), 2 * R * std::sin((n / 2) * std::numbers::pi / n), 1e-12);
  }
}

TEST(Domain, PolygonValidation) {
  try {
    (void)DomainSpec::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadPolygon);
  }
  const auto cw = DomainSpec::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  EXPECT_NEAR(cw.area(), 1.0, 1e-15);
  EXPECT_TRUE(cw.contains({0.5, 0.5}));
  EXPECT_TRUE(cw.contains({1.0, 0.5}));
  EXPECT_FALSE(cw.contains({1.01, 0.5}));
  EXPECT_NEAR(cw.clearance({0.5, 0.25}), 0.25, 1e-15);
}

TEST(Domain, ParseShortNamesAndJson) {
  EXPECT_EQ(DomainSpec::parse("unit_square").area(), 1.0);
  EXPECT_NEAR(DomainSpec::parse("disk:2").area(), 4 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(DomainSpec::parse("rectangle:2x3").area(), 6.0, 1e-12);
  EXPECT_NEAR(DomainSpec::parse("hexagon").area(), 1.0, 1e-12);
  EXPECT_NEAR(DomainSpec::parse(R"({"shape":"polygon","vertices":[[0,0],[2,0],[0,2]]})").area(), 2.0, 1e-12);
  EXPECT_THROW(DomainSpec::parse("blob"), Error);
  EXPECT_THROW(DomainSpec::parse("rectangle:2"), Error);
  const auto d = DomainSpec::regular_polygon(7, 2.5);
  EXPECT_EQ(DomainSpec::from_json(d.to_json()).to_json(), d.to_json());
}

TEST(Poles, SnapToPlaquetteCentersExactly) {
  const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 16);
  const auto poles = snap_poles(g, {{0.5, 0.5}, {0.21, 0.77}});
  for (const auto& p : poles.coordinates(g)) {
    const double fx = p.x / g.h() - std::floor(p.x / g.h());
    const double fy = p.y / g.h() - std::floor(p.y / g.h());
    EXPECT_NEAR(fx, 0.5, 1e-12);
    EXPECT_NEAR(fy, 0.5, 1e-12);
  }
  EXPECT_NEAR(poles.coordinates(g)[1].x, 0.21875, 1e-15);
}

TEST(Poles, RejectsOutsideAndDuplicates) {
  const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 16);
  try {
    snap_poles(g, {{0.01, 0.5}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PoleOutsideDomain);
  }
  EXPECT_THROW(snap_poles(g, {{0.5, 0.5}, {0.51, 0.51}}), Error);
}

TEST(Cuts, NoPolesGiveNoPaths) {
  const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 8);
  EXPECT_TRUE(default_cuts(g, {}).paths.empty());
}

TEST(Cuts, CenterPoleCutsTheColumnBelow) {
  const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 9);
  const auto poles = snap_poles(g, {{0.5, 0.5}});
  const auto cuts = default_cuts(g, poles);
  ASSERT_EQ(cuts.paths.size(), 1u);
  const auto pole = poles.plaquettes[0];
  // Horizontal edges (ix, j)-(ix+1, j) for every interior row j at or below the pole.
  std::size_t expected = 0;
  for (int j = 0; j <= pole.iy; ++j)
    if (g.id_at(pole.ix, j) >= 0 && g.id_at(pole.ix + 1, j) >= 0) ++expected;
  ASSERT_EQ(cuts.paths[0].edges.size(), expected);
  for (const auto& e : cuts.paths[0].edges) {
    const auto a = g.index(e.a), b = g.index(e.b);
    EXPECT_EQ(a.iy, b.iy);
    EXPECT_LE(a.iy, pole.iy);
    EXPECT_EQ(std::min(a.ix, b.ix), pole.ix);
  }
}

TEST(Cuts, TwoPolesInOneColumnShareEdges) {
  const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 12);
  const auto poles = snap_poles(g, {{0.45, 0.3}, {0.45, 0.7}});
  const auto cuts = default_cuts(g, poles);
  std::size_t shared = 0;
  for (const auto& e : cuts.paths[0].edges)
    for (const auto& f : cuts.paths[1].edges)
      if (e == f) ++shared;
  EXPECT_EQ(shared, std::min(cuts.paths[0].edges.size(), cuts.paths[1].edges.size()));
}
