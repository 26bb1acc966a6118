#include "akgrav/connections.hpp"

#include <cmath>

namespace akgrav {

namespace {

inline std::size_t idx3(int a, int b, int c, int db, int dc) {
  return static_cast<std::size_t>((a * db + b) * dc + c);
}

}  // namespace

DConnection DConnection::zeros(const Chart& chart) {
  DConnection dc;
  dc.chart = chart;
  int n = chart.n(), m = chart.m();
  dc.Lh.assign(static_cast<std::size_t>(n) * n * n, Expr::number(0.0));
  dc.Lv.assign(static_cast<std::size_t>(m) * m * n, Expr::number(0.0));
  dc.Ch.assign(static_cast<std::size_t>(n) * n * m, Expr::number(0.0));
  dc.Cv.assign(static_cast<std::size_t>(m) * m * m, Expr::number(0.0));
  return dc;
}

Expr& DConnection::lh(int i, int j, int k) { return Lh[idx3(i, j, k, chart.n(), chart.n())]; }
Expr& DConnection::lv(int a, int b, int k) { return Lv[idx3(a, b, k, chart.m(), chart.n())]; }
Expr& DConnection::ch(int i, int j, int c) { return Ch[idx3(i, j, c, chart.n(), chart.m())]; }
Expr& DConnection::cv(int a, int b, int c) { return Cv[idx3(a, b, c, chart.m(), chart.m())]; }
const Expr& DConnection::lh(int i, int j, int k) const { return Lh[idx3(i, j, k, chart.n(), chart.n())]; }
const Expr& DConnection::lv(int a, int b, int k) const { return Lv[idx3(a, b, k, chart.m(), chart.n())]; }
const Expr& DConnection::ch(int i, int j, int c) const { return Ch[idx3(i, j, c, chart.n(), chart.m())]; }
const Expr& DConnection::cv(int a, int b, int c) const { return Cv[idx3(a, b, c, chart.m(), chart.m())]; }

std::vector<Expr> full_gamma(const DConnection& dc) {
  const Chart& chart = dc.chart;
  int n = chart.n(), m = chart.m(), d = chart.dim();
  std::vector<Expr> g(static_cast<std::size_t>(d) * d * d, Expr::number(0.0));
  auto at = [&](int up, int row, int dir) -> Expr& {
    return g[idx3(up, row, dir, d, d)];
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) at(i, j, k) = dc.lh(i, j, k);
      for (int c = 0; c < m; ++c) at(i, j, n + c) = dc.ch(i, j, c);
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      for (int k = 0; k < n; ++k) at(n + a, n + b, k) = dc.lv(a, b, k);
      for (int c = 0; c < m; ++c) at(n + a, n + b, n + c) = dc.cv(a, b, c);
    }
  return g;
}

NormalDc normal_dconnection(const DMetric& dm, const std::vector<Point>& probe,
                            double ident_tol) {
  const Chart& chart = dm.chart;
  int n = chart.n(), m = chart.m();
  const NConnection& ncon = dm.ncon;

  bool identified = chart.n() == chart.m() && dm.identification_holds(probe, ident_tol);
  if (!identified && !ncon.is_structurally_zero())
    throw IdentificationViolatedError(
        "normal d-connection needs g_ij = h_(i)(j) (residual " +
        std::to_string(dm.identification_residual(probe)) +
        ") or a vanishing N-connection");

  NormalDc out;
  out.dc = DConnection::zeros(chart);
  out.mode = identified ? NormalDcMode::Identified : NormalDcMode::BlockDiagonalN0;
  DConnection& dc = out.dc;

  ExprMatrix ginv = sym_inverse(dm.g);

  // L^i_{jk} = 1/2 g^{ih} (e_k g_jh + e_j g_hk - e_h g_jk)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::vector<Expr> terms;
        for (int h = 0; h < n; ++h) {
          Expr paren = adapted_derivative(ncon, dm.g.at(j, h), k) +
                       adapted_derivative(ncon, dm.g.at(h, k), j) -
                       adapted_derivative(ncon, dm.g.at(j, k), h);
          terms.push_back(ginv.at(i, h) * paren);
        }
        dc.lh(i, j, k) = simplify(Expr::number(0.5) * Expr::sum(std::move(terms)));
      }

  if (identified) {
    // C^i_{jk} = 1/2 g^{ih} (dg_jh/dy^(k) + dg_hk/dy^(j) - dg_jk/dy^(h)),
    // v-blocks are the shifted copies of the h-blocks.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < m; ++c) {
          std::vector<Expr> terms;
          for (int h = 0; h < n; ++h) {
            Expr paren = deriv(dm.g.at(j, h), n + c) + deriv(dm.g.at(h, c), n + j) -
                         deriv(dm.g.at(j, c), n + h);
            terms.push_back(ginv.at(i, h) * paren);
          }
          dc.ch(i, j, c) = simplify(Expr::number(0.5) * Expr::sum(std::move(terms)));
        }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        for (int k = 0; k < n; ++k) dc.lv(a, b, k) = dc.lh(a, b, k);
        for (int c = 0; c < m; ++c) dc.cv(a, b, c) = dc.ch(a, b, c);
      }
    return out;
  }

  // N = 0 reduction for block metrics without the identification.
  ExprMatrix hinv = sym_inverse(dm.h);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k) {
        std::vector<Expr> terms;
        for (int c = 0; c < m; ++c) terms.push_back(hinv.at(a, c) * deriv(dm.h.at(b, c), k));
        dc.lv(a, b, k) = simplify(Expr::number(0.5) * Expr::sum(std::move(terms)));
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < m; ++c) {
        std::vector<Expr> terms;
        for (int h = 0; h < n; ++h)
          terms.push_back(ginv.at(i, h) * deriv(dm.g.at(j, h), n + c));
        dc.ch(i, j, c) = simplify(Expr::number(0.5) * Expr::sum(std::move(terms)));
      }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        std::vector<Expr> terms;
        for (int e = 0; e < m; ++e) {
          Expr paren = deriv(dm.h.at(b, e), n + c) + deriv(dm.h.at(e, c), n + b) -
                       deriv(dm.h.at(b, c), n + e);
          terms.push_back(hinv.at(a, e) * paren);
        }
        dc.cv(a, b, c) = simplify(Expr::number(0.5) * Expr::sum(std::move(terms)));
      }
  return out;
}

Expr& ChristoffelField::at(int r, int s, int m) {
  int d = chart.dim();
  return gamma[idx3(r, s, m, d, d)];
}

const Expr& ChristoffelField::at(int r, int s, int m) const {
  int d = chart.dim();
  return gamma[idx3(r, s, m, d, d)];
}

ChristoffelField levi_civita(const ExprMatrix& g_full, const Chart& chart) {
  int d = chart.dim();
  ChristoffelField lc;
  lc.chart = chart;
  lc.gamma.assign(static_cast<std::size_t>(d) * d * d, Expr::number(0.0));
  ExprMatrix ginv = sym_inverse(g_full);
  for (int r = 0; r < d; ++r)
    for (int s = 0; s < d; ++s)
      for (int m = s; m < d; ++m) {
        std::vector<Expr> terms;
        for (int l = 0; l < d; ++l) {
          Expr paren = deriv(g_full.at(l, m), s) + deriv(g_full.at(l, s), m) -
                       deriv(g_full.at(s, m), l);
          terms.push_back(ginv.at(r, l) * paren);
        }
        Expr v = simplify(Expr::number(0.5) * Expr::sum(std::move(terms)));
        lc.at(r, s, m) = v;
        lc.at(r, m, s) = v;
      }
  return lc;
}

std::vector<Expr> lc_adapted_coefficients(const ChristoffelField& lc,
                                          const NConnection& ncon) {
  const Chart& chart = ncon.chart;
  int d = chart.dim();
  ExprMatrix A = frame_matrix(ncon);
  ExprMatrix B = coframe_matrix(ncon);
  std::vector<Expr> out(static_cast<std::size_t>(d) * d * d, Expr::number(0.0));
  // Gamma^g_{ab}(frame) = B^g_s [ A_b^m d_m(A_a^s) + A_a^n A_b^m Gamma^s_{nm} ]
  for (int g = 0; g < d; ++g)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        std::vector<Expr> terms;
        for (int s = 0; s < d; ++s) {
          const Expr& Bgs = B.at(g, s);
          if (Bgs.is_number(0.0)) continue;
          for (int mu = 0; mu < d; ++mu) {
            const Expr& Abm = A.at(b, mu);
            if (Abm.is_number(0.0)) continue;
            terms.push_back(Bgs * Abm * deriv(A.at(a, s), mu));
            for (int nu = 0; nu < d; ++nu) {
              const Expr& Aan = A.at(a, nu);
              if (Aan.is_number(0.0)) continue;
              terms.push_back(Bgs * Aan * Abm * lc.at(s, nu, mu));
            }
          }
        }
        out[idx3(g, a, b, d, d)] = simplify(Expr::sum(std::move(terms)));
      }
  return out;
}

Distortion distortion(const DMetric& dm, const DConnection& dc, DeftSlotReading reading) {
  const Chart& chart = dm.chart;
  int n = chart.n(), m = chart.m(), d = chart.dim();
  ExprMatrix ginv = sym_inverse(dm.g);
  ExprMatrix hinv = sym_inverse(dm.h);
  TensorField omega = ncurvature(dm.ncon);

  Distortion out;
  out.reading = reading;
  DistortionIntermediates& parts = out.parts;

  parts.xi_h.assign(static_cast<std::size_t>(n) * n * n * n, Expr::number(0.0));
  for (int i = 0; i < n; ++i)
    for (int h = 0; h < n; ++h)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr delta = Expr::number(i == j && h == k ? 1.0 : 0.0);
          parts.xi_h[static_cast<std::size_t>(((i * n + h) * n + j) * n + k)] =
              simplify(Expr::number(0.5) * (delta - dm.g.at(j, k) * ginv.at(i, h)));
        }
  parts.xi_v_plus.assign(static_cast<std::size_t>(m) * m * m * m, Expr::number(0.0));
  parts.xi_v_minus = parts.xi_v_plus;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int e = 0; e < m; ++e) {
          Expr delta = Expr::number(a == c && b == e ? 1.0 : 0.0);
          Expr sandwich = dm.h.at(c, e) * hinv.at(a, b);
          std::size_t off = static_cast<std::size_t>(((a * m + b) * m + c) * m + e);
          parts.xi_v_plus[off] = simplify(Expr::number(0.5) * (delta + sandwich));
          parts.xi_v_minus[off] = simplify(Expr::number(0.5) * (delta - sandwich));
        }
  parts.l_ring.assign(static_cast<std::size_t>(m) * m * n, Expr::number(0.0));
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int j = 0; j < n; ++j)
        parts.l_ring[idx3(c, a, j, m, n)] =
            simplify(dc.lv(c, a, j) - deriv(dm.ncon.N.at(c, j), n + a));

  auto lring = [&](int c, int a, int j) -> const Expr& {
    return parts.l_ring[idx3(c, a, j, m, n)];
  };

  TensorField Z(chart,
                {{SlotSpace::Full, Variance::Up},
                 {SlotSpace::Full, Variance::Down},
                 {SlotSpace::Full, Variance::Down}},
                FrameTag::NAdapted);

  // Z^a_{jk} = -C^i_{jb} g_ik h^{ab} - 1/2 Omega^a_{jk}
  for (int a = 0; a < m; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::vector<Expr> terms;
        for (int i = 0; i < n; ++i)
          for (int b = 0; b < m; ++b)
            terms.push_back(-(dc.ch(i, j, b) * dm.g.at(i, k) * hinv.at(a, b)));
        terms.push_back(Expr::number(-0.5) * omega.at({a, j, k}));
        Z.at({n + a, j, k}) = simplify(Expr::sum(std::move(terms)));
      }

  // 1/2 Omega^c_{jk} h_cb g^{ji} -+ Xi^{ih}_{jk} C^j_{hb}
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k) {
        std::vector<Expr> omega_part, xic;
        for (int c = 0; c < m; ++c)
          for (int j = 0; j < n; ++j)
            omega_part.push_back(Expr::number(0.5) * omega.at({c, j, k}) * dm.h.at(c, b) *
                                 ginv.at(j, i));
        for (int j = 0; j < n; ++j)
          for (int h = 0; h < n; ++h)
            xic.push_back(parts.xi_h[static_cast<std::size_t>(((i * n + h) * n + j) * n + k)] *
                          dc.ch(j, h, b));
        Expr om = Expr::sum(std::move(omega_part));
        Expr xi = Expr::sum(std::move(xic));
        Z.at({i, n + b, k}) = simplify(om - xi);  // row b, dir k
        Z.at({i, k, n + b}) = simplify(om + xi);  // row k, dir b
      }

  // oL blocks. TransposedMixed places +Xi at (row k, dir b) and -(-Xi) at
  // (row b, dir k); PrintedMixed keeps the printed lower-pair order.
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k) {
        std::vector<Expr> plus_terms, minus_terms;
        plus_terms.push_back(Expr::number(0.5) * lring(a, b, k));
        minus_terms.push_back(Expr::number(-0.5) * lring(a, b, k));
        for (int c = 0; c < m; ++c)
          for (int e = 0; e < m; ++e) {
            Expr sandwich = Expr::number(0.5) * dm.h.at(c, b) * hinv.at(a, e) * lring(c, e, k);
            plus_terms.push_back(sandwich);
            minus_terms.push_back(sandwich);
          }
        Expr plus = simplify(Expr::sum(std::move(plus_terms)));    // +Xi^{ad}_{cb} oL^c_{dk}
        Expr minus = simplify(Expr::sum(std::move(minus_terms)));  // - -Xi^{ad}_{cb} oL^c_{dk}
        if (reading == DeftSlotReading::TransposedMixed) {
          Z.at({n + a, k, n + b}) = plus;
          Z.at({n + a, n + b, k}) = minus;
        } else {
          Z.at({n + a, n + b, k}) = plus;
          Z.at({n + a, k, n + b}) = minus;
        }
      }

  // Z^i_{ab} = -g^{ij}/2 (oL^c_{aj} h_cb + oL^c_{bj} h_ca)
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        std::vector<Expr> terms;
        for (int j = 0; j < n; ++j)
          for (int c = 0; c < m; ++c) {
            Expr paren = lring(c, a, j) * dm.h.at(c, b) + lring(c, b, j) * dm.h.at(c, a);
            terms.push_back(Expr::number(-0.5) * ginv.at(i, j) * paren);
          }
        Z.at({i, n + a, n + b}) = simplify(Expr::sum(std::move(terms)));
      }

  out.Z = std::move(Z);
  return out;
}

namespace {

double deflc_max_residual(const std::vector<Expr>& lc_frame, const DConnection& dc,
                          const TensorField& Z, const std::vector<Point>& pts,
                          SweepResult* sweep_out) {
  int d = dc.chart.dim();
  std::vector<Expr> gamma = full_gamma(dc);
  std::vector<Expr> residuals(static_cast<std::size_t>(d) * d * d);
  for (std::size_t i = 0; i < residuals.size(); ++i)
    residuals[i] = simplify(lc_frame[i] - gamma[i] - Z.components()[i]);
  SweepResult sweep = sweep_max(pts, [&](const Point& p) {
    return max_abs_at(residuals, p);
  });
  if (sweep_out) *sweep_out = sweep;
  return sweep.max_residual;
}

}  // namespace

DeflcResult reconcile_deflc(const ChristoffelField& lc, const DConnection& dc,
                            const DMetric& dm, const std::vector<Point>& pts,
                            double tol) {
  std::vector<Expr> lc_frame = lc_adapted_coefficients(lc, dm.ncon);
  DeflcResult res;
  Distortion primary = distortion(dm, dc, DeftSlotReading::TransposedMixed);
  double r1 = deflc_max_residual(lc_frame, dc, primary.Z, pts, &res.sweep);
  res.reading = DeftSlotReading::TransposedMixed;
  if (r1 > tol) {
    SweepResult alt_sweep;
    Distortion alt = distortion(dm, dc, DeftSlotReading::PrintedMixed);
    double r2 = deflc_max_residual(lc_frame, dc, alt.Z, pts, &alt_sweep);
    if (r2 < r1) {
      res.sweep = alt_sweep;
      res.reading = DeftSlotReading::PrintedMixed;
      res.fell_back = true;
    }
  }
  return res;
}

TensorField torsion(const DConnection& dc, const NConnection& ncon) {
  const Chart& chart = dc.chart;
  int n = chart.n(), m = chart.m();
  TensorField omega = ncurvature(ncon);
  TensorField T(chart,
                {{SlotSpace::Full, Variance::Up},
                 {SlotSpace::Full, Variance::Down},
                 {SlotSpace::Full, Variance::Down}},
                FrameTag::NAdapted);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < m; ++c) {
        const Expr& v = dc.ch(i, j, c);
        T.at({i, j, n + c}) = v;
        T.at({i, n + c, j}) = simplify(-v);
      }
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) T.at({n + a, i, j}) = omega.at({a, i, j});
      for (int b = 0; b < m; ++b) {
        Expr v = simplify(deriv(ncon.N.at(a, i), n + b) - dc.lv(a, b, i));
        T.at({n + a, i, n + b}) = v;
        T.at({n + a, n + b, i}) = simplify(-v);
      }
    }
  return T;
}

TensorField covariant_derivative_02(const TensorField& t, const DConnection& dc,
                                    const NConnection& ncon) {
  const Chart& chart = t.chart();
  int d = chart.dim();
  std::vector<Expr> gamma = full_gamma(dc);
  auto gm = [&](int up, int row, int dir) -> const Expr& {
    return gamma[idx3(up, row, dir, d, d)];
  };
  TensorField out(chart,
                  {{SlotSpace::Full, Variance::Down},
                   {SlotSpace::Full, Variance::Down},
                   {SlotSpace::Full, Variance::Down}},
                  FrameTag::NAdapted);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int g = 0; g < d; ++g) {
        std::vector<Expr> terms;
        terms.push_back(adapted_derivative(ncon, t.at({a, b}), g));
        for (int e = 0; e < d; ++e) {
          terms.push_back(-(gm(e, a, g) * t.at({e, b})));
          terms.push_back(-(gm(e, b, g) * t.at({a, e})));
        }
        out.at({a, b, g}) = simplify(Expr::sum(std::move(terms)));
      }
  return out;
}

TensorField frame_metric(const DMetric& dm) {
  const Chart& chart = dm.chart;
  int n = chart.n(), m = chart.m();
  TensorField g(chart,
                {{SlotSpace::Full, Variance::Down}, {SlotSpace::Full, Variance::Down}},
                FrameTag::NAdapted);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.at({i, j}) = dm.g.at(i, j);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) g.at({n + a, n + b}) = dm.h.at(a, b);
  return g;
}

CompatibilityResiduals compatibility_residuals(const DMetric& dm, const DConnection& dc,
                                               const TensorField& theta,
                                               const std::vector<Point>& pts) {
  TensorField dg = covariant_derivative_02(frame_metric(dm), dc, dm.ncon);
  TensorField dtheta = covariant_derivative_02(theta, dc, dm.ncon);
  CompatibilityResiduals out;
  out.dg = sweep_max(pts, [&](const Point& p) { return max_abs_at(dg, p); });
  out.dtheta = sweep_max(pts, [&](const Point& p) { return max_abs_at(dtheta, p); });
  return out;
}

SweepResult cart1_residual(const DConnection& dc, const NConnection& ncon,
                           const std::vector<Point>& pts) {
  const Chart& chart = dc.chart;
  int d = chart.dim();
  AnholonomyCoefficients w = anholonomy(ncon);
  std::vector<Expr> gamma = full_gamma(dc);
  TensorField T = torsion(dc, ncon);

  // residual_{ab} per coframe element g: (d e^g - e^b ^ Gamma^g_b + T^g)_{ab}
  std::vector<Expr> residuals;
  for (int g = 0; g < d; ++g) {
    DifferentialForm basis(chart, 1, FrameTag::NAdapted);
    basis.at({g}) = Expr::number(1.0);
    DifferentialForm de = exterior_derivative(basis, ncon, w);
    for (int al = 0; al < d; ++al)
      for (int be = al + 1; be < d; ++be) {
        std::vector<Expr> terms{de.at({al, be})};
        // (e^b ^ Gamma^g_b)_{al,be} = Gamma^g_{al,be} - Gamma^g_{be,al}
        terms.push_back(-gamma[idx3(g, al, be, d, d)]);
        terms.push_back(gamma[idx3(g, be, al, d, d)]);
        terms.push_back(T.at({g, al, be}));
        residuals.push_back(simplify(Expr::sum(std::move(terms))));
      }
  }
  return sweep_max(pts, [&](const Point& p) { return max_abs_at(residuals, p); });
}

}  // namespace akgrav
