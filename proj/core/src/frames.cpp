#include "akgrav/frames.hpp"

namespace akgrav {

NConnection NConnection::zero(const Chart& chart) {
  return NConnection{chart, ExprMatrix(chart.m(), chart.n())};
}

Expr& AnholonomyCoefficients::at(int g, int a, int b) {
  int d = chart.dim();
  return w[static_cast<std::size_t>((g * d + a) * d + b)];
}

const Expr& AnholonomyCoefficients::at(int g, int a, int b) const {
  int d = chart.dim();
  return w[static_cast<std::size_t>((g * d + a) * d + b)];
}

ExprMatrix hessian(const Expr& L, const Chart& chart) {
  int n = chart.n(), m = chart.m();
  ExprMatrix h(m, m);
  for (int a = 0; a < m; ++a) {
    Expr da = simplify(deriv(L, n + a));
    for (int b = a; b < m; ++b) {
      Expr hab = simplify(Expr::number(0.5) * deriv(da, n + b));
      h.at(a, b) = hab;
      h.at(b, a) = hab;
    }
  }
  return h;
}

std::pair<SprayCoefficients, NConnection> canonical_nconnection(const Expr& L,
                                                                const Chart& chart) {
  int n = chart.n(), m = chart.m();
  if (n != m)
    throw DimensionMismatchError("canonical N-connection needs n == m (got " +
                                 std::to_string(n) + "+" + std::to_string(m) + ")");
  ExprMatrix h = hessian(L, chart);
  if (simplify(sym_det(h)).is_number(0.0))
    throw DegenerateMetricError("Hessian of the generating function is identically degenerate");
  ExprMatrix hinv = sym_inverse(h);

  // bracket_i = sum_k d^2L/dy^(i)dx^k * y^(k) - dL/dx^i, with (i) = n+i
  std::vector<Expr> bracket(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<Expr> terms;
    Expr dLdyi = deriv(L, n + i);
    for (int k = 0; k < n; ++k)
      terms.push_back(deriv(dLdyi, k) * Expr::variable(n + k));
    terms.push_back(-deriv(L, i));
    bracket[static_cast<std::size_t>(i)] = simplify(Expr::sum(std::move(terms)));
  }

  SprayCoefficients spray{chart, {}};
  spray.G.resize(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    std::vector<Expr> terms;
    for (int i = 0; i < n; ++i)
      terms.push_back(hinv.at(a, i) * bracket[static_cast<std::size_t>(i)]);
    spray.G[static_cast<std::size_t>(a)] =
        simplify(Expr::number(0.25) * Expr::sum(std::move(terms)));
  }

  NConnection ncon{chart, ExprMatrix(m, n)};
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i)
      ncon.N.at(a, i) = simplify(deriv(spray.G[static_cast<std::size_t>(a)], n + i));
  return {std::move(spray), std::move(ncon)};
}

Expr adapted_derivative(const NConnection& ncon, const Expr& f, int slot) {
  const Chart& chart = ncon.chart;
  if (!chart.is_v(slot)) {
    std::vector<Expr> terms;
    terms.push_back(deriv(f, slot));
    for (int a = 0; a < chart.m(); ++a)
      terms.push_back(-(ncon.N.at(a, slot) * deriv(f, chart.n() + a)));
    return simplify(Expr::sum(std::move(terms)));
  }
  return simplify(deriv(f, slot));
}

AnholonomyCoefficients anholonomy(const NConnection& ncon) {
  const Chart& chart = ncon.chart;
  int n = chart.n(), m = chart.m(), d = chart.dim();
  AnholonomyCoefficients w{chart, std::vector<Expr>(static_cast<std::size_t>(d * d * d))};
  // [e_i, e_a] = dN^b_i/dy^a e_b
  for (int b = 0; b < m; ++b)
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < m; ++a) {
        Expr v = simplify(deriv(ncon.N.at(b, i), n + a));
        w.at(n + b, i, n + a) = v;
        w.at(n + b, n + a, i) = simplify(-v);
      }
  // [e_i, e_j] = Omega^a_{ij} e_a
  TensorField omega = ncurvature(ncon);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        w.at(n + a, i, j) = omega.at({a, i, j});
  return w;
}

TensorField ncurvature(const NConnection& ncon) {
  const Chart& chart = ncon.chart;
  int n = chart.n(), m = chart.m();
  TensorField omega(chart,
                    {{SlotSpace::V, Variance::Up},
                     {SlotSpace::H, Variance::Down},
                     {SlotSpace::H, Variance::Down}},
                    FrameTag::NAdapted);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        std::vector<Expr> terms;
        terms.push_back(deriv(ncon.N.at(a, i), j));
        terms.push_back(-deriv(ncon.N.at(a, j), i));
        for (int b = 0; b < m; ++b) {
          terms.push_back(ncon.N.at(b, i) * deriv(ncon.N.at(a, j), n + b));
          terms.push_back(-(ncon.N.at(b, j) * deriv(ncon.N.at(a, i), n + b)));
        }
        Expr v = simplify(Expr::sum(std::move(terms)));
        omega.at({a, i, j}) = v;
        omega.at({a, j, i}) = simplify(-v);
      }
  return omega;
}

TensorField ncurvature_via_frames(const NConnection& ncon) {
  const Chart& chart = ncon.chart;
  int n = chart.n(), m = chart.m();
  TensorField omega(chart,
                    {{SlotSpace::V, Variance::Up},
                     {SlotSpace::H, Variance::Down},
                     {SlotSpace::H, Variance::Down}},
                    FrameTag::NAdapted);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        omega.at({a, i, j}) =
            simplify(adapted_derivative(ncon, ncon.N.at(a, i), j) -
                     adapted_derivative(ncon, ncon.N.at(a, j), i));
  return omega;
}

ExprMatrix frame_matrix(const NConnection& ncon) {
  const Chart& chart = ncon.chart;
  int n = chart.n(), m = chart.m(), d = chart.dim();
  ExprMatrix A(d, d);
  for (int i = 0; i < n; ++i) A.at(i, i) = Expr::number(1.0);
  for (int a = 0; a < m; ++a) A.at(n + a, n + a) = Expr::number(1.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) A.at(i, n + a) = simplify(-ncon.N.at(a, i));
  return A;
}

ExprMatrix coframe_matrix(const NConnection& ncon) {
  const Chart& chart = ncon.chart;
  int n = chart.n(), m = chart.m(), d = chart.dim();
  ExprMatrix B(d, d);
  for (int i = 0; i < n; ++i) B.at(i, i) = Expr::number(1.0);
  for (int a = 0; a < m; ++a) B.at(n + a, n + a) = Expr::number(1.0);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i) B.at(n + a, i) = ncon.N.at(a, i);
  return B;
}

}  // namespace akgrav
