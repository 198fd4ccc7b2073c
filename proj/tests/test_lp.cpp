#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "trifermi/lp.hpp"

using namespace trifermi;

namespace {

std::vector<Halfspace> box(std::size_t d, double lo, double hi) {
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> e(d, 0.0);
    e[i] = 1.0;
    hs.push_back({e, hi, "hi"});
    e[i] = -1.0;
    hs.push_back({e, -lo, "lo"});
  }
  return hs;
}

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST(Simplex, SmallKnownOptimum) {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0  ->  (8/5, 6/5)
  LinearProgram lp{{-1, -1}, {{{1, 2}, 4, "a"}, {{3, 1}, 6, "b"}, {{-1, 0}, 0, "x"}, {{0, -1}, 0, "y"}}, {}};
  const auto s = simplex_minimize(lp);
  EXPECT_NEAR(s.value, -2.8, 1e-12);
  EXPECT_NEAR(s.point[0], 1.6, 1e-12);
  EXPECT_NEAR(s.point[1], 1.2, 1e-12);
}

TEST(Simplex, FreeVariablesAndBounds) {
  LinearProgram lp{{1, -2}, {{{1, 1}, 1, "s"}}, {std::pair{-5.0, 5.0}, std::pair{-5.0, 5.0}}};
  const auto s = simplex_minimize(lp);
  // y as large as possible subject to x + y <= 1, x >= -5 -> (-5, 5): 1*(-5) - 2*5 = -15
  EXPECT_NEAR(s.value, -15.0, 1e-12);
}

TEST(Simplex, DegenerateCyclingExampleTerminates) {
  // Classic cycling instance for the largest-coefficient rule; optimum -5/4.
  LinearProgram lp;
  lp.objective = {-0.75, 20, -0.5, 6};
  lp.halfspaces = {{{0.25, -8, -1, 9}, 0, "r1"}, {{0.5, -12, -0.5, 3}, 0, "r2"}, {{0, 0, 1, 0}, 1, "r3"}};
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<double> e(4, 0.0);
    e[i] = -1.0;
    lp.halfspaces.push_back({e, 0.0, "nn"});
  }
  const auto s = simplex_minimize(lp);
  EXPECT_NEAR(s.value, -1.25, 1e-12);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  LinearProgram inf{{1}, {{{1}, -1, "x<=-1"}, {{-1}, -1, "x>=1"}}, {}};
  try {
    simplex_minimize(inf);
    FAIL() << "expected infeasible";
  } catch (const LpError& e) {
    EXPECT_EQ(e.kind(), LpError::Kind::Infeasible);
  }
  LinearProgram unb{{-1, 0}, {{{-1, 0}, 0, "x>=0"}, {{0, 1}, 1, "y<=1"}, {{0, -1}, 0, "y>=0"}}, {}};
  try {
    simplex_minimize(unb);
    FAIL() << "expected unbounded";
  } catch (const LpError& e) {
    EXPECT_EQ(e.kind(), LpError::Kind::Unbounded);
  }
}

TEST(Simplex, RandomPolytopesAgreeWithSampling) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 40; ++trial) {
    auto hs = box(2, -1, 1);
    for (int k = 0; k < 6; ++k) hs.push_back({{u(rng), u(rng)}, 0.2 + 0.5 * std::abs(u(rng)), "cut"});
    const std::vector<double> c{u(rng), u(rng)};
    const auto s = simplex_minimize({c, hs, {}});
    EXPECT_TRUE(satisfies(hs, s.point));
    double best = 1e9;
    for (int i = 0; i < 400; ++i)
      for (int j = 0; j < 400; ++j) {
        const std::vector<double> x{-1 + 2 * (i + 0.5) / 400, -1 + 2 * (j + 0.5) / 400};
        if (satisfies(hs, x, 0.0)) best = std::min(best, dotv(c, x));
      }
    EXPECT_LE(s.value, best + 1e-12);
    EXPECT_GE(s.value, best - 0.02);
  }
}

TEST(Vertices, CubeAndSimplex) {
  EXPECT_EQ(enumerate_vertices(box(3, 0, 1)).vertices.size(), 8u);
  auto hs = box(3, 0, 1);
  hs.push_back({{1, 1, 1}, 1, "sum"});
  const auto p = enumerate_vertices(hs);
  ASSERT_EQ(p.vertices.size(), 4u);
  EXPECT_TRUE(in_convex_hull({0.2, 0.2, 0.2}, p.vertices));
  EXPECT_FALSE(in_convex_hull({0.5, 0.5, 0.5}, p.vertices));
  EXPECT_THROW(enumerate_vertices({{{1, 0}, 1, "x"}}), InvalidInput);
}

TEST(Vertices, ProjectorRegionHasFourteenListedVertices) {
  const std::vector<std::vector<double>> expected{
      {0, 0, 0, 0},       {3, 0, 0, 0},       {3, 0, 0, 0.375},   {3, 0, 0.75, 0},    {3, 0.75, 0, 0},
      {0, 3, 0, 0},       {0, 3, 0, 0.375},   {0, 3, 0.75, 0},    {0.75, 3, 0, 0},    {0, 0, 3, 0},
      {0, 0, 3, 0.375},   {0, 0.75, 3, 0},    {0.75, 0, 3, 0},    {0, 0, 0, 1.875}};
  const auto p = region_polytope(RegionSystem::GhzProjector);
  ASSERT_EQ(p.vertices.size(), expected.size());
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& v : p.vertices) {
      double d = 0;
      for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(v[k] - e[k]));
      found = found || d < 1e-8;
    }
    EXPECT_TRUE(found) << e[0] << "," << e[1] << "," << e[2] << "," << e[3];
  }
}

TEST(Vertices, OtherRegions) {
  EXPECT_EQ(region_polytope(RegionSystem::SpinChain).vertices.size(), 14u);
  EXPECT_EQ(region_polytope(RegionSystem::StabilizerB).vertices.size(), 12u);
  EXPECT_EQ(region_polytope(RegionSystem::StabilizerW).vertices.size(), 12u);
  EXPECT_EQ(region_system_from_name("ghz-projector"), RegionSystem::GhzProjector);
  EXPECT_FALSE(region_system_from_name("nope"));
}

TEST(Vertices, RowsFromVerticesCertifyWitnesses) {
  // A witness value w0 + w.v over the region is minimized at a vertex.
  const auto poly = region_polytope(RegionSystem::SpinChain);
  const auto rows = rows_from_vertices(poly, "spin");
  const std::vector<double> wsp0{1 + std::sqrt(8.0), 1, 1, -1};
  EXPECT_TRUE(satisfies(rows, wsp0, 1e-12));
  const std::vector<double> shifted{std::sqrt(8.0), 1, 1, -1};
  EXPECT_FALSE(satisfies(rows, shifted, 1e-12));
}

TEST(Tables, RowCountsAndTags) {
  EXPECT_EQ(spin_chain_w_table().size(), 14u);
  EXPECT_EQ(ghz_projector_table().size(), 14u);
  EXPECT_EQ(stabilizer_w_table().size(), 20u);
  EXPECT_EQ(stabilizer_ghz_table().size(), 20u);
  EXPECT_EQ(ghz_projector_table()[8].tag, "ghz-projector/r09(completed)");
  EXPECT_THROW(constraint_set(WitnessFamily::GhzProjector, ClassTarget::W_EW), InvalidInput);
}

TEST(Tables, SpinChainRowsAreWitnessValuesAtRegionVertices) {
  // Each row a0 + a.v >= 0 corresponds to a vertex v of the spin-chain region.
  const auto poly = region_polytope(RegionSystem::SpinChain);
  for (const auto& row : spin_chain_w_table()) {
    std::vector<double> v{-row.normal[1], -row.normal[2], -row.normal[3]};
    bool found = false;
    for (const auto& p : poly.vertices) {
      double d = 0;
      for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(p[k] - v[k]));
      found = found || d < 1e-12;
    }
    EXPECT_TRUE(found) << row.tag;
  }
}

TEST(Tables, ProjectorRowsAreRegionVertices) {
  const auto poly = region_polytope(RegionSystem::GhzProjector);
  for (const auto& row : ghz_projector_table()) {
    std::vector<double> v{-row.normal[1], -row.normal[2], -row.normal[3], -row.normal[4]};
    bool found = false;
    for (const auto& p : poly.vertices) {
      double d = 0;
      for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(p[k] - v[k]));
      found = found || d < 1e-12;
    }
    EXPECT_TRUE(found) << row.tag;
  }
}

TEST(Tables, DumpLoadRoundTrip) {
  const auto rows = stabilizer_ghz_table();
  std::stringstream ss;
  dump_table(ss, rows);
  const auto back = load_table(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].normal, rows[i].normal);
    EXPECT_EQ(back[i].offset, rows[i].offset);
    EXPECT_EQ(back[i].tag, rows[i].tag);
  }
  std::stringstream bad("1 2 x3 tag\n");
  EXPECT_THROW(load_table(bad), InvalidInput);
  std::stringstream ragged("1 2 0 a\n1 2 3 0 b\n");
  EXPECT_THROW(load_table(ragged), InvalidInput);
}

TEST(Validation, SpinChainAndProjectorCanonicalWitnesses) {
  const auto sp = validate_witness(canonical::w_spin0());
  EXPECT_TRUE(sp.rows_ok);
  EXPECT_TRUE(sp.has_negative_eigenvalue);
  EXPECT_TRUE(sp.valid);
  const auto gd = validate_witness(canonical::ghz_d0());
  EXPECT_TRUE(gd.rows_ok);
  EXPECT_TRUE(gd.valid);
  // Rows are reported with their slack value.
  for (const auto& r : sp.rows) EXPECT_EQ(r.pass, r.value >= -1e-12);
}

TEST(Validation, WGenIsOutsideTheSpinChainTable) {
  const auto rep = validate_witness(canonical::w_gen());
  EXPECT_FALSE(rep.rows_ok);
  EXPECT_FALSE(rep.valid);
}

TEST(Validation, PositivePatternsHaveNoNegativeEigenvalue) {
  const auto pats = stabilizer_positive_patterns();
  ASSERT_EQ(pats.size(), 4u);
  for (const auto& p : pats) {
    const auto rep = validate_witness(p);
    EXPECT_FALSE(rep.has_negative_eigenvalue) << p.name;
    EXPECT_GE(hermitian_eigs(witness_operator(p)).min(), -1e-10) << p.name;
  }
}

TEST(Bounds, SpinCombinationsOnBiseparableStates) {
  for (const char* n : {"-P12-P13+P23", "-P12+P13-P23", "P12-P13-P23"}) {
    const auto op = combo_by_name(n);
    ASSERT_TRUE(op);
    const auto rep = verify_bound(*op, StateFamily::Biseparable, 1 + std::sqrt(8.0), 6000, 3);
    EXPECT_TRUE(rep.never_exceeds) << n << " " << rep.empirical_max;
    EXPECT_GT(rep.empirical_max, 1 + std::sqrt(8.0) - 0.05) << n;
    EXPECT_NEAR(verify_bound(*op, StateFamily::All, 5.0, 0, 0).empirical_max, 5.0, 1e-10);
  }
  EXPECT_EQ(named_combos().size(), 11u);
  EXPECT_FALSE(combo_by_name("S1"));
}
