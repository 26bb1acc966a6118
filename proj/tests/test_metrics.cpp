#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "akgrav/metrics.hpp"
#include "akgrav/sampling.hpp"

using namespace akgrav;

namespace {
const Chart chart = Chart::standard();

std::vector<Point> box_points(int count, unsigned seed = 5) {
  SampleDomain d = SampleDomain::cube(4, -1.0, 1.0);
  d.intervals[2] = {0.3, 1.5};
  d.intervals[3] = {0.3, 1.5};
  return halton_points(d, count, seed, 2);
}
}  // namespace

TEST_CASE("lagrange d-metric from the catalog generating functions") {
  DMetric dm = lagrange_dmetric(parse_expr("y3^2 + y4^2", chart), chart);
  CHECK(dm.g.at(0, 0).is_number(1.0));
  CHECK(dm.h.at(1, 1).is_number(1.0));
  CHECK(dm.g.at(0, 1).is_number(0.0));
  CHECK(dm.ncon.is_structurally_zero());
  CHECK(dm.identification_holds(box_points(10)));

  DMetric de = lagrange_dmetric(parse_expr("exp(x1)*(y3^2+y4^2)", chart), chart);
  Point p{0.4, 0, 1, 1};
  CHECK(eval(de.g.at(0, 0), p) == doctest::Approx(std::exp(0.4)).epsilon(1e-14));
  CHECK(eval(de.h.at(0, 0), p) == doctest::Approx(std::exp(0.4)).epsilon(1e-14));
  CHECK_FALSE(de.ncon.is_structurally_zero());

  // pseudo-signature accepted
  DMetric dp = lagrange_dmetric(parse_expr("-y3^2 + y4^2", chart), chart);
  CHECK(dp.g.at(0, 0).is_number(-1.0));
  CHECK(dp.h.at(1, 1).is_number(1.0));
  CHECK_NOTHROW(check_nondegenerate(dp, box_points(10)));
}

TEST_CASE("assembled coordinate metric layout") {
  DMetric dm;
  dm.chart = chart;
  dm.g = ExprMatrix::identity(2);
  dm.h = ExprMatrix::identity(2);
  dm.ncon = NConnection::zero(chart);

  ExprMatrix g0 = assemble_coordinate_metric(dm);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(simplify(g0.at(i, j)).is_number(i == j ? 1.0 : 0.0));

  dm.ncon.N.at(0, 0) = Expr::number(1.0);  // N^3_1 = 1
  ExprMatrix g1 = assemble_coordinate_metric(dm);
  CHECK(simplify(g1.at(0, 0)).is_number(2.0));
  CHECK(simplify(g1.at(0, 2)).is_number(1.0));
  CHECK(simplify(g1.at(2, 0)).is_number(1.0));
  CHECK(simplify(g1.at(1, 1)).is_number(1.0));
  CHECK(simplify(g1.at(2, 2)).is_number(1.0));

  // symmetric identically
  Point p{0.1, 0.2, 0.5, 0.9};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(eval(g1.at(i, j), p) == eval(g1.at(j, i), p));

  NConnection back = extract_nconnection(g1, chart);
  CHECK(simplify(back.N.at(0, 0)).is_number(1.0));
  CHECK(simplify(back.N.at(0, 1)).is_number(0.0));
  CHECK(simplify(back.N.at(1, 0)).is_number(0.0));
}

TEST_CASE("extraction from block-diagonal metrics gives N = 0") {
  Chart sch({"t", "r"}, {"th", "ph"});
  ExprMatrix G(4, 4);
  G.at(0, 0) = parse_expr("-(1 - 2/r)", sch);
  G.at(1, 1) = parse_expr("1/(1 - 2/r)", sch);
  G.at(2, 2) = parse_expr("r^2", sch);
  G.at(3, 3) = parse_expr("r^2*sin(th)^2", sch);
  NConnection n = extract_nconnection(G, sch);
  CHECK(n.is_structurally_zero());
}

TEST_CASE("assemble then extract is the identity on random d-metrics") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> coef(-0.4, 0.4);
  std::vector<Point> pts = box_points(20);
  for (int trial = 0; trial < 8; ++trial) {
    DMetric dm;
    dm.chart = chart;
    dm.g = ExprMatrix::identity(2);
    dm.h = ExprMatrix::identity(2);
    dm.ncon = NConnection::zero(chart);
    // smooth random polynomial entries; diagonally dominant v-block
    auto rand_poly = [&] {
      return Expr::number(coef(rng)) * Expr::variable(0) +
             Expr::number(coef(rng)) * Expr::variable(2) * Expr::variable(3) +
             Expr::number(coef(rng));
    };
    dm.g.at(0, 1) = rand_poly();
    dm.g.at(1, 0) = dm.g.at(0, 1);
    dm.h.at(0, 0) = Expr::number(2.0) + Expr::number(coef(rng)) * Expr::variable(2);
    dm.h.at(1, 1) = Expr::number(2.0) + Expr::number(coef(rng)) * Expr::variable(3);
    dm.h.at(0, 1) = rand_poly();
    dm.h.at(1, 0) = dm.h.at(0, 1);
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < 2; ++i) dm.ncon.N.at(a, i) = rand_poly();

    ExprMatrix G = assemble_coordinate_metric(dm);
    NConnection back = extract_nconnection(G, chart);
    for (const Point& p : pts) {
      EvalCache cache(p);
      for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i)
          CHECK(std::abs(eval(back.N.at(a, i), cache) - eval(dm.ncon.N.at(a, i), cache)) <
                1e-10);
    }
  }
}

TEST_CASE("frame matching: identity, scaling, and the conformal example") {
  DMetric dm = lagrange_dmetric(parse_expr("exp(x1)*(y3^2+y4^2)", chart), chart);
  Point p{0.3, -0.2, 0.9, 1.1};

  Vierbein id = frame_match_solve(dm, dm, p);
  CHECK(frame_match_residual(dm, dm, p, id) < 1e-9);
  for (int i = 0; i < 4; ++i) CHECK(id.e.at(i, i) == doctest::Approx(1.0).epsilon(1e-10));

  // target = 4 * source: any returned vierbein must satisfy the residual bound
  DMetric scaled = dm;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      scaled.g.at(i, j) = Expr::number(4.0) * dm.g.at(i, j);
      scaled.h.at(i, j) = Expr::number(4.0) * dm.h.at(i, j);
    }
  Vierbein vs = frame_match_solve(scaled, dm, p);
  CHECK(frame_match_residual(scaled, dm, p, vs) < 1e-9);
  CHECK(vs.e.at(0, 0) == doctest::Approx(0.5).epsilon(1e-10));

  // Euclidean target, conformal source at x1 = ln 4: e = 2 I solves exactly
  DMetric target;
  target.chart = chart;
  target.g = ExprMatrix::identity(2);
  target.h = ExprMatrix::identity(2);
  target.ncon = NConnection::zero(chart);
  Point q{std::log(4.0), 0.0, 0.8, 0.9};
  Vierbein vc = frame_match_solve(target, dm, q);
  CHECK(frame_match_residual(target, dm, q, vc) < 1e-9);
  for (int i = 0; i < 4; ++i) CHECK(vc.e.at(i, i) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("frame matching propagates the induced N-connection") {
  DMetric dm = lagrange_dmetric(parse_expr("exp(x1)*(y3^2+y4^2)", chart), chart);
  Point p{0.0, 0.0, 1.0, 2.0};
  DMetric scaled = dm;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      scaled.g.at(i, j) = Expr::number(4.0) * dm.g.at(i, j);
      scaled.h.at(i, j) = Expr::number(4.0) * dm.h.at(i, j);
    }
  Vierbein v = frame_match_solve(scaled, dm, p);
  // block-diagonal e = I/2: N' = E_v N E_h^{-1} = N
  CHECK(v.nprime.at(0, 0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(v.nprime.at(0, 1) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(v.nprime.at(1, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(v.nprime.at(1, 1) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("frame matching rejects signature mismatches") {
  DMetric lorentz;
  lorentz.chart = chart;
  lorentz.g = ExprMatrix::identity(2);
  lorentz.g.at(0, 0) = Expr::number(-1.0);
  lorentz.h = ExprMatrix::identity(2);
  lorentz.ncon = NConnection::zero(chart);

  DMetric euclid;
  euclid.chart = chart;
  euclid.g = ExprMatrix::identity(2);
  euclid.h = ExprMatrix::identity(2);
  euclid.ncon = NConnection::zero(chart);

  Point p{0, 0, 1, 1};
  CHECK_THROWS_AS(frame_match_solve(lorentz, euclid, p), SignatureMismatchError);
  // same pseudo-signature works
  DMetric lorentz2 = lorentz;
  lorentz2.g.at(0, 0) = Expr::number(-2.0);
  Vierbein v = frame_match_solve(lorentz2, lorentz, p);
  CHECK(frame_match_residual(lorentz2, lorentz, p, v) < 1e-9);
}

TEST_CASE("frame matching residual bound holds across catalog-style samples") {
  DMetric dm = lagrange_dmetric(parse_expr("exp(x1)*(y3^2+y4^2)", chart), chart);
  for (const Point& p : box_points(20)) {
    Vierbein v = frame_match_solve(dm, dm, p);
    CHECK(frame_match_residual(dm, dm, p, v) < 1e-9);
  }
}

TEST_CASE("degenerate metrics are reported") {
  DMetric dm;
  dm.chart = chart;
  dm.g = ExprMatrix(2, 2);
  dm.g.at(0, 0) = Expr::variable(0);  // vanishes inside the box
  dm.g.at(1, 1) = Expr::number(1.0);
  dm.h = ExprMatrix::identity(2);
  dm.ncon = NConnection::zero(chart);
  std::vector<Point> pts{{0.0, 0.0, 1.0, 1.0}};
  CHECK_THROWS_AS(check_nondegenerate(dm, pts), DegenerateMetricError);
}
