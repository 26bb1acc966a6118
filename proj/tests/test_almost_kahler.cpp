#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "akgrav/almost_kahler.hpp"
#include "akgrav/pipeline.hpp"
#include "akgrav/sampling.hpp"

using namespace akgrav;

namespace {
const Chart chart = Chart::standard();

std::vector<Point> box_points(int count, unsigned seed = 9) {
  SampleDomain d = SampleDomain::cube(4, -0.8, 0.8);
  d.intervals[2] = {0.3, 1.5};
  d.intervals[3] = {0.3, 1.5};
  return halton_points(d, count, seed, 2);
}

NConnection nconn_of(const Expr& L) { return lagrange_dmetric(L, chart).ncon; }
}  // namespace

TEST_CASE("J has the constant pairing blocks and squares to -I") {
  NConnection n = nconn_of(parse_expr("exp(x1)*(y3^2+y4^2)", chart));
  TensorField J = almost_complex(n);
  // adapted-basis blocks: upper-right +I, lower-left -I
  CHECK(J.at({0, 2}).is_number(1.0));
  CHECK(J.at({1, 3}).is_number(1.0));
  CHECK(J.at({2, 0}).is_number(-1.0));
  CHECK(J.at({3, 1}).is_number(-1.0));
  CHECK(J.at({0, 0}).is_number(0.0));

  // exact in the frame representation
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      std::vector<Expr> terms;
      for (int g = 0; g < 4; ++g) terms.push_back(J.at({a, g}) * J.at({g, b}));
      if (a == b) terms.push_back(Expr::number(1.0));
      CHECK(simplify(Expr::sum(std::move(terms))).is_number(0.0));
    }
}

TEST_CASE("coordinate-basis J of a trivial N equals the frame blocks") {
  NConnection zero = NConnection::zero(chart);
  TensorField J = almost_complex(zero);
  TensorField Jc = to_coordinate(J, zero);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(structurally_equal(simplify(Jc.at({a, b})), simplify(J.at({a, b}))));
}

TEST_CASE("coordinate-basis J keeps J^2 = -I with N-dependent entries") {
  NConnection n = nconn_of(parse_expr("exp(x1)*(y3^2+y4^2)", chart));
  TensorField Jc = to_coordinate(almost_complex(n), n);
  Point p{0, 0, 1, 2};
  // genuinely N-dependent coordinate components
  bool has_var = false;
  for (const Expr& e : Jc.components())
    if (!is_constant(e)) has_var = true;
  CHECK(has_var);
  EvalCache cache(p);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (int g = 0; g < 4; ++g)
        s += eval(Jc.at({a, g}), cache) * eval(Jc.at({g, b}), cache);
      CHECK(std::abs(s + (a == b ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("J requires a paired splitting") {
  Chart c31({"x1", "x2", "x3"}, {"y4"});
  NConnection n = NConnection::zero(c31);
  CHECK_THROWS_AS(almost_complex(n), DimensionMismatchError);
}

TEST_CASE("symplectic form of the Euclidean generating function") {
  DMetric dm = lagrange_dmetric(parse_expr("y3^2 + y4^2", chart), chart);
  TensorField J = almost_complex(dm.ncon);
  DifferentialForm theta = symplectic_form(dm, J, box_points(5));
  // theta = e^3 ^ dx^1 + e^4 ^ dx^2 pattern: theta(e_3, e_1) = 1 = -theta(e_1, e_3)
  CHECK(simplify(theta.at({2, 0})).is_number(1.0));
  CHECK(simplify(theta.at({0, 2})).is_number(-1.0));
  CHECK(simplify(theta.at({3, 1})).is_number(1.0));
  CHECK(simplify(theta.at({0, 1})).is_number(0.0));
  CHECK(simplify(theta.at({2, 3})).is_number(0.0));
}

TEST_CASE("symplectic form coefficients follow the h-block") {
  DMetric dm = lagrange_dmetric(parse_expr("exp(x1)*(y3^2+y4^2)", chart), chart);
  TensorField J = almost_complex(dm.ncon);
  DifferentialForm theta = symplectic_form(dm, J, box_points(5));
  Point p{1, 0, 0.5, 0.5};
  CHECK(eval(theta.at({2, 0}), p) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
  // antisymmetry identically
  Point q{0.2, -0.1, 1.2, 0.4};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(eval(theta.at({a, b}), q) == doctest::Approx(-eval(theta.at({b, a}), q)).epsilon(1e-14));
}

TEST_CASE("symplectic candidate without the identification is rejected as a form") {
  DMetric dm;
  dm.chart = chart;
  dm.g = ExprMatrix::identity(2);
  dm.h = ExprMatrix::identity(2);
  dm.h.at(0, 0) = Expr::number(4.0);
  dm.ncon = NConnection::zero(chart);
  TensorField J = almost_complex(dm.ncon);
  CHECK_THROWS_AS(symplectic_form(dm, J, box_points(5)), IdentificationViolatedError);
}

TEST_CASE("Liouville potential and theta = d(omega)") {
  Expr L = parse_expr("y3^2 + y4^2", chart);
  DifferentialForm omega = liouville_potential(L, chart);
  CHECK(structurally_equal(simplify(omega.at({0})), parse_expr("y3", chart)));
  CHECK(structurally_equal(simplify(omega.at({1})), parse_expr("y4", chart)));
  CHECK(simplify(omega.at({2})).is_number(0.0));

  for (const char* l : {"y3^2 + y4^2", "exp(x1)*(y3^2+y4^2)",
                        "exp(x1)*(y3^2+y4^2) + x2*y3*y4"}) {
    Expr Lx = parse_expr(l, chart);
    DMetric dm = lagrange_dmetric(Lx, chart);
    TensorField J = almost_complex(dm.ncon);
    DifferentialForm theta = symplectic_form(dm, J, box_points(5));
    DifferentialForm dom = form_to_adapted(
        exterior_derivative(liouville_potential(Lx, chart)), dm.ncon);
    for (const Point& p : box_points(20)) {
      EvalCache c(p);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          CHECK(std::abs(eval(dom.at({a, b}), c) - eval(theta.at({a, b}), c)) < 1e-10);
    }
  }
}

TEST_CASE("x-independent quadratic generating function gives exactly closed theta") {
  Expr L = parse_expr("y3^2 + y4^2", chart);
  DMetric dm = lagrange_dmetric(L, chart);
  AnholonomyCoefficients w = anholonomy(dm.ncon);
  DifferentialForm theta = symplectic_form(dm, almost_complex(dm.ncon), box_points(5));
  DifferentialForm dtheta = exterior_derivative(theta, dm.ncon, w);
  for (const Expr& e : dtheta.components()) CHECK(simplify(e).is_number(0.0));
}

TEST_CASE("theta is closed for every catalog generating function") {
  for (const char* l : {"y3^2 + y4^2", "exp(x1)*(y3^2+y4^2)"}) {
    DMetric dm = lagrange_dmetric(parse_expr(l, chart), chart);
    AnholonomyCoefficients w = anholonomy(dm.ncon);
    DifferentialForm theta = symplectic_form(dm, almost_complex(dm.ncon), box_points(5));
    DifferentialForm dtheta = exterior_derivative(theta, dm.ncon, w);
    for (const Point& p : box_points(30)) {
      EvalCache c(p);
      for (const Expr& e : dtheta.components()) CHECK(std::abs(eval(e, c)) < 1e-10);
    }
  }
}

TEST_CASE("exterior derivative of the coframe encodes the anholonomy") {
  NConnection n = NConnection::zero(chart);
  n.N.at(0, 0) = parse_expr("y3", chart);  // N^3_1 = y3
  AnholonomyCoefficients w = anholonomy(n);

  DifferentialForm dx1(chart, 1, FrameTag::NAdapted);
  dx1.at({0}) = Expr::number(1.0);
  DifferentialForm ddx1 = exterior_derivative(dx1, n, w);
  for (const Expr& e : ddx1.components()) CHECK(simplify(e).is_number(0.0));

  DifferentialForm e3(chart, 1, FrameTag::NAdapted);
  e3.at({2}) = Expr::number(1.0);
  DifferentialForm de3 = exterior_derivative(e3, n, w);
  // d e^a picks up -w^a_{alpha beta}; only w^3_{13} = 1 is nonzero here
  CHECK(simplify(de3.at({0, 2})).is_number(-1.0));
  CHECK(simplify(de3.at({2, 0})).is_number(1.0));
  CHECK(simplify(de3.at({0, 1})).is_number(0.0));
}

TEST_CASE("d of d vanishes on random scalars in the anholonomic frame") {
  NConnection n = nconn_of(parse_expr("exp(x1)*(y3^2+y4^2)", chart));
  AnholonomyCoefficients w = anholonomy(n);
  ExprGen gen(chart, 1234);
  std::vector<Point> pts = box_points(15);
  for (int i = 0; i < 20; ++i) {
    DifferentialForm f(chart, 0, FrameTag::NAdapted);
    f.components()[0] = gen.next(2);
    DifferentialForm dd = exterior_derivative(exterior_derivative(f, n, w), n, w);
    for (const Point& p : pts) {
      EvalCache c(p);
      for (const Expr& e : dd.components()) CHECK(std::abs(eval(e, c)) < 1e-10);
    }
  }
}

TEST_CASE("Neijenhuis tensor vanishes in the integrable cases") {
  // trivial N
  NConnection zero = NConnection::zero(chart);
  TensorField nj0 = neijenhuis(almost_complex(zero), zero);
  for (const Expr& e : nj0.components()) CHECK(simplify(e).is_number(0.0));

  // constant N: Omega = 0 and dN/dy = 0
  NConnection constn = NConnection::zero(chart);
  constn.N.at(0, 1) = Expr::number(2.5);
  TensorField njc = neijenhuis(almost_complex(constn), constn);
  for (const Expr& e : njc.components()) CHECK(simplify(e).is_number(0.0));

  // N^3_1 = y3: Omega = 0 and dN^a_j/dy^(i) symmetric -> integrable
  NConnection diag = NConnection::zero(chart);
  diag.N.at(0, 0) = parse_expr("y3", chart);
  TensorField njd = neijenhuis(almost_complex(diag), diag);
  Point p{0.1, 0.2, 0.7, 1.3};
  for (const Expr& e : njd.components()) CHECK(std::abs(eval(e, p)) < 1e-13);
}

TEST_CASE("Neijenhuis tensor detects non-integrable N") {
  // N^3_1 = y4 has an antisymmetric dN/dy part
  NConnection n = NConnection::zero(chart);
  n.N.at(0, 0) = parse_expr("y4", chart);
  TensorField nj = neijenhuis(almost_complex(n), n);
  Point p{0.1, 0.2, 0.7, 1.3};
  double mx = 0.0;
  for (const Expr& e : nj.components()) mx = std::max(mx, std::abs(eval(e, p)));
  CHECK(mx > 0.5);

  // antisymmetry in the lower pair on a non-integrable example
  for (int g = 0; g < 4; ++g)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        CHECK(eval(nj.at({g, a, b}), p) ==
              doctest::Approx(-eval(nj.at({g, b, a}), p)).epsilon(1e-13));
}

TEST_CASE("the exponential generating function induces an integrable structure") {
  // its canonical N has Omega = 0 and a symmetric fiber Jacobian, so the
  // Neijenhuis tensor must vanish even though N itself does not
  NConnection ne = nconn_of(parse_expr("exp(x1)*(y3^2+y4^2)", chart));
  CHECK_FALSE(ne.is_structurally_zero());
  TensorField om = ncurvature(ne);
  Point p{0.1, 0.2, 0.7, 1.3};
  for (const Expr& e : om.components()) CHECK(std::abs(eval(e, p)) < 1e-13);
  TensorField nje = neijenhuis(almost_complex(ne), ne);
  for (const Expr& e : nje.components()) CHECK(std::abs(eval(e, p)) < 1e-13);
}

TEST_CASE("form frame conversions invert each other") {
  NConnection n = nconn_of(parse_expr("exp(x1)*(y3^2+y4^2)", chart));
  DifferentialForm f(chart, 2, FrameTag::NAdapted);
  f.set_antisymmetric({0, 2}, parse_expr("x1 + y3", chart));
  f.set_antisymmetric({1, 3}, parse_expr("y4^2", chart));
  DifferentialForm back = form_to_adapted(form_to_coordinate(f, n), n);
  for (const Point& p : box_points(10)) {
    EvalCache c(p);
    for (std::size_t i = 0; i < f.components().size(); ++i)
      CHECK(std::abs(eval(f.components()[i], c) - eval(back.components()[i], c)) < 1e-12);
  }
}
