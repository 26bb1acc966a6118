#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "akgrav/connections.hpp"
#include "akgrav/scenario.hpp"

using namespace akgrav;

namespace {
const Chart chart = Chart::standard();

std::vector<Point> box_points(int count, unsigned seed = 13) {
  SampleDomain d = SampleDomain::cube(4, -0.7, 0.7);
  d.intervals[2] = {0.3, 1.5};
  d.intervals[3] = {0.3, 1.5};
  return halton_points(d, count, seed, 2);
}

DMetric exp_lagrange() {
  return lagrange_dmetric(parse_expr("exp(x1)*(y3^2+y4^2)", chart), chart);
}

ScenarioObjects schwarzschild() { return realize(catalog_scenario("schwarzschild")); }
}  // namespace

TEST_CASE("normal d-connection of the Euclidean splitting vanishes") {
  DMetric dm = lagrange_dmetric(parse_expr("y3^2 + y4^2", chart), chart);
  NormalDc ndc = normal_dconnection(dm, box_points(5));
  CHECK(ndc.mode == NormalDcMode::Identified);
  for (const Expr& e : full_gamma(ndc.dc)) CHECK(simplify(e).is_number(0.0));
}

TEST_CASE("normal d-connection of the exponential generating function") {
  DMetric dm = exp_lagrange();
  NormalDc ndc = normal_dconnection(dm, box_points(5));
  // L^1_{11} = 1/2 everywhere
  Point p{0.4, -0.3, 0.8, 1.2};
  CHECK(eval(ndc.dc.lh(0, 0, 0), p) == doctest::Approx(0.5).epsilon(1e-13));
  // v-blocks are the shifted copies
  CHECK(structurally_equal(simplify(ndc.dc.lv(0, 0, 0)), simplify(ndc.dc.lh(0, 0, 0))));
  CHECK(structurally_equal(simplify(ndc.dc.cv(1, 0, 1)), simplify(ndc.dc.ch(1, 0, 1))));
}

TEST_CASE("metric compatibility of the normal d-connection") {
  for (const char* l : {"y3^2 + y4^2", "exp(x1)*(y3^2+y4^2)",
                        "exp(x1)*(y3^2+y4^2) + x2*y3*y4"}) {
    DMetric dm = lagrange_dmetric(parse_expr(l, chart), chart);
    std::vector<Point> pts = box_points(30);
    NormalDc ndc = normal_dconnection(dm, pts);
    TensorField theta_dummy(chart,
                            {{SlotSpace::Full, Variance::Down}, {SlotSpace::Full, Variance::Down}},
                            FrameTag::NAdapted);
    CompatibilityResiduals comp = compatibility_residuals(dm, ndc.dc, theta_dummy, pts);
    CHECK(comp.dg.max_residual < 1e-10);
    CHECK(comp.dg.skipped == 0);
  }
}

TEST_CASE("corrupted connection coefficients break compatibility loudly") {
  DMetric dm = exp_lagrange();
  std::vector<Point> pts = box_points(20);
  NormalDc ndc = normal_dconnection(dm, pts);
  ndc.dc.lh(0, 0, 0) = ndc.dc.lh(0, 0, 0) + Expr::number(0.1);
  TensorField theta_dummy(chart,
                          {{SlotSpace::Full, Variance::Down}, {SlotSpace::Full, Variance::Down}},
                          FrameTag::NAdapted);
  CompatibilityResiduals comp = compatibility_residuals(dm, ndc.dc, theta_dummy, pts);
  CHECK(comp.dg.max_residual > 1e-3);
}

TEST_CASE("identification is required unless N vanishes") {
  DMetric dm;
  dm.chart = chart;
  dm.g = ExprMatrix::identity(2);
  dm.h = ExprMatrix::identity(2);
  dm.h.at(0, 0) = Expr::number(4.0);
  dm.ncon = NConnection::zero(chart);
  dm.ncon.N.at(0, 0) = parse_expr("y3", chart);
  CHECK_THROWS_AS(normal_dconnection(dm, box_points(5)), IdentificationViolatedError);

  dm.ncon = NConnection::zero(chart);
  NormalDc ndc = normal_dconnection(dm, box_points(5));
  CHECK(ndc.mode == NormalDcMode::BlockDiagonalN0);
}

TEST_CASE("Levi-Civita connection of flat and Schwarzschild metrics") {
  ExprMatrix flat = ExprMatrix::identity(4);
  ChristoffelField lc_flat = levi_civita(flat, chart);
  for (const Expr& e : lc_flat.gamma) CHECK(simplify(e).is_number(0.0));

  ScenarioObjects so = schwarzschild();
  ExprMatrix G = assemble_coordinate_metric(so.dm);
  ChristoffelField lc = levi_civita(G, so.scenario.chart);
  // Gamma^r_{tt} = M (r - 2M) / r^3 with M = 1; coordinates (t,r,th,ph)
  for (double r : {3.0, 4.5, 7.0, 9.5}) {
    Point p{0.3, r, 1.2, 2.0};
    double expect = (r - 2.0) / (r * r * r);
    CHECK(eval(lc.at(1, 0, 0), p) == doctest::Approx(expect).epsilon(1e-10));
  }
  // lower-pair symmetry is structural
  Point p{0.1, 5.0, 1.0, 2.0};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        CHECK(eval(lc.at(a, b, c), p) == eval(lc.at(a, c, b), p));
}

TEST_CASE("finite-difference cross-check of conformal Christoffel symbols") {
  ExprMatrix G(4, 4);
  for (int i = 0; i < 4; ++i) G.at(i, i) = parse_expr("exp(x1)", chart);
  ChristoffelField lc = levi_civita(G, chart);
  Point p{0.3, -0.2, 0.9, 1.1};
  double h = 1e-6;
  EvalCache cache(p);
  Mat g0 = eval_matrix(G, cache);
  Mat ginv = num_inverse(g0);
  auto fd_dg = [&](int l, int m, int dir) {
    Point hi = p, lo = p;
    hi[static_cast<std::size_t>(dir)] += h;
    lo[static_cast<std::size_t>(dir)] -= h;
    return (eval(G.at(l, m), hi) - eval(G.at(l, m), lo)) / (2.0 * h);
  };
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s)
      for (int m = 0; m < 4; ++m) {
        double fd = 0.0;
        for (int l = 0; l < 4; ++l)
          fd += 0.5 * ginv.at(r, l) * (fd_dg(l, m, s) + fd_dg(l, s, m) - fd_dg(s, m, l));
        CHECK(std::abs(fd - eval(lc.at(r, s, m), cache)) < 1e-8);
      }
}

TEST_CASE("distortion vanishing blocks are structural") {
  DMetric dm = exp_lagrange();
  NormalDc ndc = normal_dconnection(dm, box_points(5));
  Distortion dist = distortion(dm, ndc.dc);
  int n = chart.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        CHECK(simplify(dist.Z.at({i, j, k})).is_number(0.0));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        CHECK(simplify(dist.Z.at({n + a, n + b, n + c})).is_number(0.0));
}

TEST_CASE("distortion of the Euclidean splitting vanishes entirely") {
  DMetric dm = lagrange_dmetric(parse_expr("y3^2 + y4^2", chart), chart);
  NormalDc ndc = normal_dconnection(dm, box_points(5));
  Distortion dist = distortion(dm, ndc.dc);
  for (const Expr& e : dist.Z.components()) CHECK(simplify(e).is_number(0.0));
}

TEST_CASE("distortion intermediates match their definitions") {
  DMetric dm = exp_lagrange();
  std::vector<Point> pts = box_points(5);
  NormalDc ndc = normal_dconnection(dm, pts);
  Distortion dist = distortion(dm, ndc.dc);
  Point p = pts.front();
  EvalCache c(p);
  ExprMatrix ginv = sym_inverse(dm.g);
  // Xi^{ih}_{jk} = (d^i_j d^h_k - g_jk g^{ih}) / 2
  for (int i = 0; i < 2; ++i)
    for (int h = 0; h < 2; ++h)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          double expect = 0.5 * ((i == j && h == k ? 1.0 : 0.0) -
                                 eval(dm.g.at(j, k), c) * eval(ginv.at(i, h), c));
          CHECK(eval(dist.parts.xi_h[static_cast<std::size_t>(((i * 2 + h) * 2 + j) * 2 + k)], c) ==
                doctest::Approx(expect).epsilon(1e-12));
        }
  // oL^c_{aj} = L^c_{aj} - dN^c_j/dy^a
  for (int cc = 0; cc < 2; ++cc)
    for (int a = 0; a < 2; ++a)
      for (int j = 0; j < 2; ++j) {
        double expect = eval(ndc.dc.lv(cc, a, j), c) -
                        eval(deriv(dm.ncon.N.at(cc, j), 2 + a), c);
        CHECK(eval(dist.parts.l_ring[static_cast<std::size_t>((cc * 2 + a) * 2 + j)], c) ==
              doctest::Approx(expect).epsilon(1e-12));
      }
}

TEST_CASE("connection deformation reconciles for the catalog scenarios") {
  std::vector<Point> pts = box_points(50);

  {  // Euclidean: exact zero
    DMetric dm = lagrange_dmetric(parse_expr("y3^2 + y4^2", chart), chart);
    NormalDc ndc = normal_dconnection(dm, pts);
    ChristoffelField lc = levi_civita(assemble_coordinate_metric(dm), chart);
    DeflcResult res = reconcile_deflc(lc, ndc.dc, dm, pts);
    CHECK(res.sweep.max_residual == 0.0);
    CHECK_FALSE(res.fell_back);
  }
  {  // exponential generating function
    DMetric dm = exp_lagrange();
    NormalDc ndc = normal_dconnection(dm, pts);
    ChristoffelField lc = levi_civita(assemble_coordinate_metric(dm), chart);
    DeflcResult res = reconcile_deflc(lc, ndc.dc, dm, pts);
    CHECK(res.sweep.max_residual < 1e-9);
    CHECK(res.reading == DeftSlotReading::TransposedMixed);
  }
  {  // Schwarzschild through the N = 0 reduction
    ScenarioObjects so = schwarzschild();
    NormalDc ndc = normal_dconnection(so.dm, so.points);
    CHECK(ndc.mode == NormalDcMode::BlockDiagonalN0);
    ChristoffelField lc =
        levi_civita(assemble_coordinate_metric(so.dm), so.scenario.chart);
    DeflcResult res = reconcile_deflc(lc, ndc.dc, so.dm, so.points);
    CHECK(res.sweep.max_residual < 1e-9);
    CHECK(res.sweep.evaluated >= 50);
  }
}

TEST_CASE("printed-slot distortion reading fails the oracle where the blocks differ") {
  // the mixed oL-blocks are nonzero for Schwarzschild, so the two readings
  // separate there; the reconcile fallback must still land on the good one
  ScenarioObjects so = schwarzschild();
  NormalDc ndc = normal_dconnection(so.dm, so.points);
  std::vector<Expr> lc_frame = lc_adapted_coefficients(
      levi_civita(assemble_coordinate_metric(so.dm), so.scenario.chart), so.dm.ncon);
  Distortion printed = distortion(so.dm, ndc.dc, DeftSlotReading::PrintedMixed);
  std::vector<Expr> gamma = full_gamma(ndc.dc);
  double worst = 0.0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    Expr r = simplify(lc_frame[i] - gamma[i] - printed.Z.components()[i]);
    for (std::size_t k = 0; k < 10; ++k) worst = std::max(worst, std::abs(eval(r, so.points[k])));
  }
  CHECK(worst > 1e-3);

  ChristoffelField lc =
      levi_civita(assemble_coordinate_metric(so.dm), so.scenario.chart);
  DeflcResult res = reconcile_deflc(lc, ndc.dc, so.dm, so.points);
  CHECK(res.reading == DeftSlotReading::TransposedMixed);
  CHECK_FALSE(res.fell_back);
}

TEST_CASE("torsion component table") {
  // Euclidean: all zero
  DMetric de = lagrange_dmetric(parse_expr("y3^2 + y4^2", chart), chart);
  NormalDc ne = normal_dconnection(de, box_points(5));
  TensorField Te = torsion(ne.dc, de.ncon);
  for (const Expr& e : Te.components()) CHECK(simplify(e).is_number(0.0));

  // structural zeros and the Omega block for every catalog connection
  DMetric dm = exp_lagrange();
  NormalDc ndc = normal_dconnection(dm, box_points(5));
  TensorField T = torsion(ndc.dc, dm.ncon);
  TensorField omega = ncurvature(dm.ncon);
  int n = 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) CHECK(simplify(T.at({i, j, k})).is_number(0.0));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        CHECK(simplify(T.at({n + a, n + b, n + c})).is_number(0.0));
  Point p{0.2, 0.4, 1.0, 0.7};
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(eval(T.at({n + a, i, j}), p) ==
              doctest::Approx(eval(omega.at({a, i, j}), p)).epsilon(1e-13));
}

TEST_CASE("first Cartan structure equation reproduces the torsion") {
  std::vector<Point> pts = box_points(30);
  for (const char* l : {"y3^2 + y4^2", "exp(x1)*(y3^2+y4^2)",
                        "exp(x1)*(y3^2+y4^2) + x2*y3*y4"}) {
    DMetric dm = lagrange_dmetric(parse_expr(l, chart), chart);
    NormalDc ndc = normal_dconnection(dm, pts);
    SweepResult res = cart1_residual(ndc.dc, dm.ncon, pts);
    CHECK(res.max_residual < 1e-10);
  }
  ScenarioObjects so = schwarzschild();
  NormalDc ndc = normal_dconnection(so.dm, so.points);
  CHECK(cart1_residual(ndc.dc, so.dm.ncon, so.points).max_residual < 1e-10);
}

TEST_CASE("symplectic compatibility of the normal d-connection") {
  DMetric dm = exp_lagrange();
  std::vector<Point> pts = box_points(30);
  NormalDc ndc = normal_dconnection(dm, pts);
  TensorField J = almost_complex(dm.ncon);
  TensorField theta = symplectic_candidate(dm, J);
  CompatibilityResiduals comp = compatibility_residuals(dm, ndc.dc, theta, pts);
  CHECK(comp.dtheta.max_residual < 1e-10);
}
