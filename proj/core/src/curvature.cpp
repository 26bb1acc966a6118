#include "akgrav/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace akgrav {

namespace {

inline std::size_t idx3(int a, int b, int c, int db, int dc) {
  return static_cast<std::size_t>((a * db + b) * dc + c);
}

inline std::size_t idx4(int a, int b, int c, int e, int db, int dc, int de) {
  return static_cast<std::size_t>(((a * db + b) * dc + c) * de + e);
}

}  // namespace

Expr& CurvatureBundle::rhhh(int i, int h, int j, int k) {
  int n = chart.n();
  return Rhhh[idx4(i, h, j, k, n, n, n)];
}
Expr& CurvatureBundle::phva(int i, int j, int k, int a) {
  int n = chart.n(), m = chart.m();
  return Phva[idx4(i, j, k, a, n, n, m)];
}
Expr& CurvatureBundle::svvv(int a, int b, int c, int d) {
  int m = chart.m();
  return Svvv[idx4(a, b, c, d, m, m, m)];
}
const Expr& CurvatureBundle::rhhh(int i, int h, int j, int k) const {
  int n = chart.n();
  return Rhhh[idx4(i, h, j, k, n, n, n)];
}
const Expr& CurvatureBundle::phva(int i, int j, int k, int a) const {
  int n = chart.n(), m = chart.m();
  return Phva[idx4(i, j, k, a, n, n, m)];
}
const Expr& CurvatureBundle::svvv(int a, int b, int c, int d) const {
  int m = chart.m();
  return Svvv[idx4(a, b, c, d, m, m, m)];
}
Expr& CurvatureBundle::full_at(int up, int row, int d1, int d2) {
  int d = chart.dim();
  return full[idx4(up, row, d1, d2, d, d, d)];
}
const Expr& CurvatureBundle::full_at(int up, int row, int d1, int d2) const {
  int d = chart.dim();
  return full[idx4(up, row, d1, d2, d, d, d)];
}

std::vector<Expr> frame_curvature(const std::vector<Expr>& gamma,
                                  const NConnection& ncon) {
  const Chart& chart = ncon.chart;
  int d = chart.dim();
  AnholonomyCoefficients w = anholonomy(ncon);
  auto gm = [&](int up, int row, int dir) -> const Expr& {
    return gamma[idx3(up, row, dir, d, d)];
  };
  std::vector<Expr> R(static_cast<std::size_t>(d) * d * d * d, Expr::number(0.0));
  for (int up = 0; up < d; ++up)
    for (int row = 0; row < d; ++row)
      for (int b = 0; b < d; ++b)
        for (int g = b + 1; g < d; ++g) {
          std::vector<Expr> terms;
          terms.push_back(adapted_derivative(ncon, gm(up, row, g), b));
          terms.push_back(-adapted_derivative(ncon, gm(up, row, b), g));
          for (int e = 0; e < d; ++e) {
            terms.push_back(gm(e, row, g) * gm(up, e, b));
            terms.push_back(-(gm(e, row, b) * gm(up, e, g)));
            const Expr& web = w.at(e, b, g);
            if (!web.is_number(0.0)) terms.push_back(-(web * gm(up, row, e)));
          }
          Expr v = simplify(Expr::sum(std::move(terms)));
          R[idx4(up, row, b, g, d, d, d)] = v;
          R[idx4(up, row, g, b, d, d, d)] = simplify(-v);
        }
  return R;
}

CurvatureBundle dcurvature(const DConnection& dc, const NConnection& ncon) {
  const Chart& chart = dc.chart;
  int n = chart.n(), m = chart.m();
  CurvatureBundle cb;
  cb.chart = chart;
  cb.Rhhh.assign(static_cast<std::size_t>(n) * n * n * n, Expr::number(0.0));
  cb.Phva.assign(static_cast<std::size_t>(n) * n * n * m, Expr::number(0.0));
  cb.Svvv.assign(static_cast<std::size_t>(m) * m * m * m, Expr::number(0.0));

  TensorField omega = ncurvature(ncon);

  // R^i_{hjk} = e_k L^i_{hj} - e_j L^i_{hk} + L^m_{hj} L^i_{mk} - L^m_{hk} L^i_{mj}
  //             - C^i_{ha} Omega^a_{kj}
  for (int i = 0; i < n; ++i)
    for (int h = 0; h < n; ++h)
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          std::vector<Expr> terms;
          terms.push_back(adapted_derivative(ncon, dc.lh(i, h, j), k));
          terms.push_back(-adapted_derivative(ncon, dc.lh(i, h, k), j));
          for (int mm = 0; mm < n; ++mm) {
            terms.push_back(dc.lh(mm, h, j) * dc.lh(i, mm, k));
            terms.push_back(-(dc.lh(mm, h, k) * dc.lh(i, mm, j)));
          }
          for (int a = 0; a < m; ++a)
            terms.push_back(-(dc.ch(i, h, a) * omega.at({a, k, j})));
          Expr v = simplify(Expr::sum(std::move(terms)));
          cb.rhhh(i, h, j, k) = v;
          cb.rhhh(i, h, k, j) = simplify(-v);
        }

  // P^i_{jka} = e_a L^i_{jk} - D_k C^i_{ja}
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < m; ++a) {
          std::vector<Expr> dk_terms;
          dk_terms.push_back(adapted_derivative(ncon, dc.ch(i, j, a), k));
          for (int mm = 0; mm < n; ++mm) {
            dk_terms.push_back(dc.lh(i, mm, k) * dc.ch(mm, j, a));
            dk_terms.push_back(-(dc.lh(mm, j, k) * dc.ch(i, mm, a)));
          }
          for (int c = 0; c < m; ++c)
            dk_terms.push_back(-(dc.lv(c, a, k) * dc.ch(i, j, c)));
          cb.phva(i, j, k, a) = simplify(deriv(dc.lh(i, j, k), n + a) -
                                         Expr::sum(std::move(dk_terms)));
        }

  // S^a_{bcd} = e_d C^a_{bc} - e_c C^a_{bd} + C^e_{bc} C^a_{ed} - C^e_{bd} C^a_{ec}
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d2 = c + 1; d2 < m; ++d2) {
          std::vector<Expr> terms;
          terms.push_back(deriv(dc.cv(a, b, c), n + d2));
          terms.push_back(-deriv(dc.cv(a, b, d2), n + c));
          for (int e = 0; e < m; ++e) {
            terms.push_back(dc.cv(e, b, c) * dc.cv(a, e, d2));
            terms.push_back(-(dc.cv(e, b, d2) * dc.cv(a, e, c)));
          }
          Expr v = simplify(Expr::sum(std::move(terms)));
          cb.svvv(a, b, c, d2) = v;
          cb.svvv(a, b, d2, c) = simplify(-v);
        }

  cb.full = frame_curvature(full_gamma(dc), ncon);
  return cb;
}

TensorField dricci(const CurvatureBundle& cb) {
  const Chart& chart = cb.chart;
  int d = chart.dim();
  TensorField ric(chart,
                  {{SlotSpace::Full, Variance::Down}, {SlotSpace::Full, Variance::Down}},
                  FrameTag::NAdapted);
  for (int b = 0; b < d; ++b)
    for (int g = 0; g < d; ++g) {
      std::vector<Expr> terms;
      for (int a = 0; a < d; ++a) terms.push_back(cb.full_at(a, b, a, g));
      ric.at({b, g}) = simplify(Expr::sum(std::move(terms)));
    }
  return ric;
}

Expr dscalar(const DMetric& dm, const TensorField& ricci) {
  const Chart& chart = dm.chart;
  int n = chart.n(), m = chart.m();
  ExprMatrix ginv = sym_inverse(dm.g);
  ExprMatrix hinv = sym_inverse(dm.h);
  std::vector<Expr> terms;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) terms.push_back(ginv.at(i, j) * ricci.at({i, j}));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      terms.push_back(hinv.at(a, b) * ricci.at({n + a, n + b}));
  return simplify(Expr::sum(std::move(terms)));
}

LcCurvature lc_riemann(const ExprMatrix& g_full, const Chart& chart) {
  int d = chart.dim();
  LcCurvature out;
  out.christoffel = levi_civita(g_full, chart);
  const ChristoffelField& G = out.christoffel;
  out.riemann.assign(static_cast<std::size_t>(d) * d * d * d, Expr::number(0.0));
  for (int r = 0; r < d; ++r)
    for (int s = 0; s < d; ++s)
      for (int mu = 0; mu < d; ++mu)
        for (int nu = mu + 1; nu < d; ++nu) {
          std::vector<Expr> terms;
          terms.push_back(deriv(G.at(r, nu, s), mu));
          terms.push_back(-deriv(G.at(r, mu, s), nu));
          for (int l = 0; l < d; ++l) {
            terms.push_back(G.at(r, mu, l) * G.at(l, nu, s));
            terms.push_back(-(G.at(r, nu, l) * G.at(l, mu, s)));
          }
          Expr v = simplify(Expr::sum(std::move(terms)));
          out.riemann[idx4(r, s, mu, nu, d, d, d)] = v;
          out.riemann[idx4(r, s, nu, mu, d, d, d)] = simplify(-v);
        }
  out.ricci = ExprMatrix(d, d);
  for (int s = 0; s < d; ++s)
    for (int nu = 0; nu < d; ++nu) {
      std::vector<Expr> terms;
      for (int mu = 0; mu < d; ++mu)
        terms.push_back(out.riemann[idx4(mu, s, mu, nu, d, d, d)]);
      out.ricci.at(s, nu) = simplify(Expr::sum(std::move(terms)));
    }
  ExprMatrix ginv = sym_inverse(g_full);
  std::vector<Expr> terms;
  for (int s = 0; s < d; ++s)
    for (int nu = 0; nu < d; ++nu) terms.push_back(ginv.at(s, nu) * out.ricci.at(s, nu));
  out.scalar = simplify(Expr::sum(std::move(terms)));
  return out;
}

SweepResult cart2_residual(const DConnection& dc, const NConnection& ncon,
                           const CurvatureBundle& cb, const std::vector<Point>& pts) {
  const Chart& chart = dc.chart;
  int n = chart.n(), m = chart.m(), d = chart.dim();
  AnholonomyCoefficients w = anholonomy(ncon);
  std::vector<Expr> gamma = full_gamma(dc);
  auto gm = [&](int up, int row, int dir) -> const Expr& {
    return gamma[idx3(up, row, dir, d, d)];
  };

  // 2-form F^up_row = d Gamma^up_row + Gamma^up_e ^ Gamma^e_row; the displayed
  // coefficients satisfy F_{ab} = full[up][row][a][b] with
  // R^i_{hjk} = F^i_h(e_k, e_j) etc. Compare the structure-equation forms
  // against the component blocks.
  std::vector<Expr> residuals;
  auto structure_form = [&](int up, int row) {
    DifferentialForm conn(chart, 1, FrameTag::NAdapted);
    for (int g = 0; g < d; ++g) conn.at({g}) = gm(up, row, g);
    DifferentialForm F = exterior_derivative(conn, ncon, w);
    for (int e = 0; e < d; ++e) {
      DifferentialForm left(chart, 1, FrameTag::NAdapted);
      DifferentialForm right(chart, 1, FrameTag::NAdapted);
      for (int g = 0; g < d; ++g) {
        left.at({g}) = gm(up, e, g);
        right.at({g}) = gm(e, row, g);
      }
      DifferentialForm wedge_term = wedge(left, right);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          F.at({a, b}) = simplify(F.at({a, b}) + wedge_term.at({a, b}));
    }
    return F;
  };

  for (int i = 0; i < n; ++i)
    for (int h = 0; h < n; ++h) {
      DifferentialForm F = structure_form(i, h);
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          residuals.push_back(simplify(F.at({k, j}) - cb.rhhh(i, h, j, k)));
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < m; ++a)
          residuals.push_back(simplify(F.at({n + a, k}) - cb.phva(i, h, k, a)));
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      DifferentialForm F = structure_form(n + a, n + b);
      for (int c = 0; c < m; ++c)
        for (int e = c + 1; e < m; ++e)
          residuals.push_back(simplify(F.at({n + e, n + c}) - cb.svvv(a, b, c, e)));
    }
  return sweep_max(pts, [&](const Point& p) { return max_abs_at(residuals, p); });
}

double EinsteinBlockResiduals::max_residual() const {
  return std::max(std::max(hh.max_residual, hv.max_residual),
                  std::max(vh.max_residual, vv.max_residual));
}

EinsteinBlockResiduals einstein_residual(const DMetric& dm, const EinsteinInputs& inputs,
                                         ConnectionChoice choice,
                                         const std::vector<Point>& pts) {
  const Chart& chart = dm.chart;
  int n = chart.n(), d = chart.dim();

  std::vector<Expr> residual(static_cast<std::size_t>(d) * d, Expr::number(0.0));
  auto res_at = [&](int b, int g) -> Expr& {
    return residual[static_cast<std::size_t>(b * d + g)];
  };

  if (choice == ConnectionChoice::LeviCivita) {
    ExprMatrix G = assemble_coordinate_metric(dm);
    LcCurvature lc = lc_riemann(G, chart);
    for (int b = 0; b < d; ++b)
      for (int g = 0; g < d; ++g) {
        Expr t = inputs.has_stress ? inputs.stress.at({b, g}) : Expr::number(0.0);
        res_at(b, g) = simplify(
            lc.ricci.at(b, g) -
            Expr::number(0.5) * (lc.scalar + Expr::number(inputs.lambda)) * G.at(b, g) -
            Expr::number(8.0 * 3.14159265358979323846 * inputs.newton_g) * t);
      }
  } else {
    NormalDc ndc = normal_dconnection(dm, pts);
    CurvatureBundle cb = dcurvature(ndc.dc, dm.ncon);
    TensorField ric = dricci(cb);
    Expr scalar = dscalar(dm, ric);
    TensorField g = frame_metric(dm);
    for (int b = 0; b < d; ++b)
      for (int g2 = 0; g2 < d; ++g2) {
        Expr t = inputs.has_stress ? inputs.stress.at({b, g2}) : Expr::number(0.0);
        res_at(b, g2) = simplify(
            ric.at({b, g2}) -
            Expr::number(0.5) * (scalar + Expr::number(inputs.lambda)) * g.at({b, g2}) -
            Expr::number(8.0 * 3.14159265358979323846 * inputs.newton_g) * t);
      }
  }

  auto sweep_block = [&](int b0, int b1, int g0, int g1) {
    std::vector<Expr> block;
    for (int b = b0; b < b1; ++b)
      for (int g = g0; g < g1; ++g) block.push_back(res_at(b, g));
    return sweep_max(pts, [&](const Point& p) { return max_abs_at(block, p); });
  };
  EinsteinBlockResiduals out;
  out.hh = sweep_block(0, n, 0, n);
  out.hv = sweep_block(0, n, n, d);
  out.vh = sweep_block(n, d, 0, n);
  out.vv = sweep_block(n, d, n, d);
  return out;
}

}  // namespace akgrav
