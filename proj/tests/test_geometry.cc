#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "nlperim/covariogram.h"
#include "oracles.h"

using namespace nlperim;

TEST(CovariogramExact, UnitInterval) {
  const auto g = covariogram_exact(Shape{make_interval_union({{0, 1}})});
  for (double y : {-1.5, -0.7, 0.0, 0.25, 0.999, 1.0, 3.0}) {
    EXPECT_NEAR(g.value({y}), std::max(0.0, 1 - std::abs(y)), 1e-15);
  }
}

TEST(CovariogramExact, IntervalUnionMatchesPairwiseOverlaps) {
  const oracle::Intervals e{{0, 0.5}, {0.75, 2}, {3, 3.1}};
  const auto g = covariogram_exact(Shape{make_interval_union(e)});
  for (double y = -4; y <= 4; y += 0.037) EXPECT_NEAR(g.value({y}), oracle::interval_cov(e, y), 1e-13);
}

TEST(CovariogramExact, UnitSquare) {
  const auto g = covariogram_exact(Shape{make_box(2, {0, 0, 0}, {1, 1, 0})});
  for (double a : {-0.3, 0.0, 0.6}) {
    for (double b : {-1.2, 0.1, 0.5}) {
      EXPECT_NEAR(g.value({a, b}), std::max(0.0, 1 - std::abs(a)) * std::max(0.0, 1 - std::abs(b)), 1e-15);
    }
  }
}

TEST(CovariogramExact, DiskLensAtUnitDistance) {
  const auto g = covariogram_exact(Shape{make_ball(2, 1.0)});
  const double lens = 2 * std::acos(0.5) - 0.5 * std::sqrt(3.0);
  EXPECT_NEAR(lens, 1.2284, 1e-4);
  EXPECT_NEAR(g.value({1, 0}), lens, 1e-14);
  EXPECT_NEAR(g.value({0.6, 0.8}), lens, 1e-14);
  const auto grid = covariogram_grid(rasterize(Shape{make_ball(2, 1.0)}, 1.0 / 512));
  EXPECT_NEAR(grid.value({1, 0}), lens, 3.0 / 512);
}

TEST(CovariogramExact, BallsInOneAndThreeDimensions) {
  const auto g1 = covariogram_exact(Shape{make_ball(1, 0.5)});
  EXPECT_NEAR(g1.value({0.3}), 0.7, 1e-15);
  const auto g3 = covariogram_exact(Shape{make_ball(3, 1.0)});
  // |B ∩ (B + s e)| = pi/12 (4 + s)(2 - s)^2
  for (double s : {0.0, 0.5, 1.7}) {
    EXPECT_NEAR(g3.value({0, s, 0}), oracle::pi / 12 * (4 + s) * (2 - s) * (2 - s), 1e-13);
  }
}

TEST(CovariogramExact, PolygonUnsupported) {
  EXPECT_THROW(covariogram_exact(Shape{make_polygon({{0, 0}, {1, 0}, {0, 1}})}), UnsupportedError);
}

namespace {

VoxelSet cells_1d(std::vector<std::uint8_t> m) {
  VoxelSet v;
  v.d = 1;
  v.dims = {static_cast<int>(m.size()), 1, 1};
  v.h = 1.0;
  v.mask = std::move(m);
  return v;
}

}  // namespace

TEST(CovariogramGrid, SingleCell) {
  VoxelSet v;
  v.d = 2;
  v.dims = {3, 3, 1};
  v.mask = {0, 0, 0, 0, 1, 0, 0, 0, 0};
  const auto g = covariogram_grid(v);
  EXPECT_DOUBLE_EQ(g.value({0, 0}), 1.0);
  for (Point y : {Point{1, 0, 0}, Point{-1, 0, 0}, Point{0, 1, 0}, Point{0, -1, 0}}) {
    EXPECT_DOUBLE_EQ(g.value(y), 0.0);
  }
}

TEST(CovariogramGrid, TwoAdjacentCells) {
  const auto g = covariogram_grid(cells_1d({0, 1, 1, 0}));
  EXPECT_DOUBLE_EQ(g.value({0}), 2.0);
  EXPECT_DOUBLE_EQ(g.value({1}), 1.0);
  EXPECT_DOUBLE_EQ(g.value({-1}), 1.0);
  EXPECT_DOUBLE_EQ(g.value({2}), 0.0);
  EXPECT_DOUBLE_EQ(g.value({-2}), 0.0);
}

TEST(CovariogramGrid, FftAndDirectAgreeWithBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const int nx = 7 + trial, ny = 5 + 2 * trial;
    std::vector<std::uint8_t> m(nx * ny);
    for (auto& c : m) c = rng() % 3 == 0;
    const auto ref = oracle::brute_autocorr_2d(m, nx, ny);
    const auto fft = autocorrelation_counts(m, {nx, ny, 1}, 2, AutocorrelationMethod::fft);
    const auto dir = autocorrelation_counts(m, {nx, ny, 1}, 2, AutocorrelationMethod::direct);
    ASSERT_EQ(fft.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_EQ(dir[i], ref[i]);
      EXPECT_NEAR(fft[i], ref[i], 1e-9);
    }
  }
}

TEST(CovariogramGrid, RasterizedDiskWithinThreeCells) {
  const double h = 1.0 / 256;
  const auto grid = covariogram_grid(rasterize(Shape{make_ball(2, 1.0)}, h));
  const auto exact = covariogram_exact(Shape{make_ball(2, 1.0)});
  double worst = 0.0;
  for (double s = 0.0; s <= 2.2; s += 0.05) {
    for (double t : {0.0, 0.4, 1.1}) {
      const Point y{s * std::cos(t), s * std::sin(t), 0};
      worst = std::max(worst, std::abs(grid.value(y) - exact.value(y)));
    }
  }
  EXPECT_LE(worst, 3 * h);
}

TEST(CovariogramGrid, MemoryBoundSuggestsCoarserGrid) {
  GridOptions o;
  o.max_cells = 1000;
  try {
    covariogram_grid(rasterize(Shape{make_ball(2, 1.0)}, 1.0 / 64), o);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("coarser"), std::string::npos) << e.what();
  }
}

TEST(CovariogramGrid, FirstOrderConvergenceUnderRefinement) {
  // A square whose sides sit a fixed fraction of a cell off the grid, so the
  // rasterization error in each side is a constant multiple of h.
  std::vector<double> err;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const double off = 0.3 * h;
    const Shape sq{make_box(2, {off, off, 0}, {1 + off + 0.45 * h, 1 + off + 0.45 * h, 0})};
    const auto grid = covariogram_grid(rasterize(sq, h));
    const auto exact = covariogram_exact(sq);
    double worst = 0.0;
    for (double a = 0; a <= 1.2; a += 0.1) {
      for (double b = 0; b <= 1.2; b += 0.1) {
        worst = std::max(worst, std::abs(grid.value({a, b}) - exact.value({a, b})));
      }
    }
    err.push_back(worst);
  }
  EXPECT_NEAR(err[0] / err[1], 2.0, 0.3);
  EXPECT_NEAR(err[1] / err[2], 2.0, 0.3);
}

TEST(CovariogramGrid, VoxelRoundTrip) {
  const auto v = rasterize(Shape{make_ball(2, 0.5)}, 1.0 / 16);
  const auto path = std::filesystem::temp_directory_path() / "nlperim_roundtrip.vox";
  write_voxels(v, path.string());
  const auto w = read_voxels(path.string());
  EXPECT_EQ(w.dims, v.dims);
  EXPECT_EQ(w.mask, v.mask);
  EXPECT_DOUBLE_EQ(w.h, v.h);
  std::filesystem::remove(path);
}

TEST(ClassicalPerimeter, Examples) {
  EXPECT_DOUBLE_EQ(classical_perimeter(make_interval_union({{0, 1}})), 2.0);
  EXPECT_DOUBLE_EQ(classical_perimeter(make_interval_union({{0, 1}, {2, 3}, {5, 6}})), 6.0);
  EXPECT_NEAR(classical_perimeter(make_ball(2, 1.0)), 2 * oracle::pi, 1e-14);
  EXPECT_NEAR(classical_perimeter(make_ball(3, 1.0)), 4 * oracle::pi, 1e-14);
  EXPECT_DOUBLE_EQ(classical_perimeter(make_box(2, {0, 0, 0}, {1, 1, 0})), 4.0);
  EXPECT_DOUBLE_EQ(classical_perimeter(make_box(3, {0, 0, 0}, {1, 2, 3})), 2 * (6 + 3 + 2));
  EXPECT_NEAR(classical_perimeter(make_polygon({{0, 0}, {1, 0}, {0, 1}})), 2 + std::sqrt(2.0), 1e-14);
}

TEST(ClassicalPerimeter, BallFormulaAcrossDimensions) {
  for (int d = 1; d <= 3; ++d) {
    for (double r : {0.5, 2.0}) {
      EXPECT_NEAR(classical_perimeter(make_ball(d, r)), d * oracle::ball_volume(d) * std::pow(r, d - 1),
                  1e-13);
      EXPECT_NEAR(volume(make_ball(d, r)), oracle::ball_volume(d) * std::pow(r, d), 1e-13);
    }
  }
}

TEST(BoundaryDecomposition, UnitSquare) {
  const auto f = boundary_decomposition(make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  ASSERT_EQ(f.size(), 4u);
  int found = 0;
  for (const auto& e : f) {
    EXPECT_DOUBLE_EQ(e.measure, 1.0);
    EXPECT_NEAR(std::abs(e.normal[0]) + std::abs(e.normal[1]), 1.0, 1e-15);
    found += e.normal[1] < -0.5 ? 1 : e.normal[0] > 0.5 ? 2 : e.normal[1] > 0.5 ? 4 : 8;
  }
  EXPECT_EQ(found, 15);
}

TEST(BoundaryDecomposition, RightTriangleHypotenuse) {
  const auto f = boundary_decomposition(make_polygon({{0, 0}, {1, 0}, {0, 1}}));
  ASSERT_EQ(f.size(), 3u);
  EXPECT_NEAR(f[1].measure, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(f[1].normal[0], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(f[1].normal[1], 1 / std::sqrt(2.0), 1e-15);
}

TEST(BoundaryDecomposition, Closedness) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.3, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 9;
    std::vector<std::array<double, 2>> v;
    for (int i = 0; i < n; ++i) {
      const double t = 2 * oracle::pi * i / n, r = u(rng);
      v.push_back({r * std::cos(t), r * std::sin(t)});
    }
    double sx = 0, sy = 0;
    for (const auto& e : boundary_decomposition(make_polygon(v))) {
      sx += e.measure * e.normal[0];
      sy += e.measure * e.normal[1];
    }
    EXPECT_NEAR(sx, 0.0, 1e-12);
    EXPECT_NEAR(sy, 0.0, 1e-12);
  }
}

TEST(BoundaryDecomposition, DegenerateInputRejected) {
  EXPECT_THROW(make_polygon({{0, 0}, {0, 0}, {1, 0}, {0, 1}}), ValidationError);
  EXPECT_THROW(make_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), ValidationError);  // bow tie
  EXPECT_THROW(make_interval_union({{0, 1}, {0.5, 2}}), ValidationError);
}
