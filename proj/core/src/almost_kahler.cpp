#include "akgrav/almost_kahler.hpp"

#include <algorithm>
#include <cmath>

namespace akgrav {

DifferentialForm::DifferentialForm(Chart chart, int degree, FrameTag frame)
    : chart_(std::move(chart)), degree_(degree), frame_(frame) {
  std::size_t total = 1;
  for (int i = 0; i < degree_; ++i) total *= static_cast<std::size_t>(chart_.dim());
  comp_.assign(std::max<std::size_t>(total, 1), Expr::number(0.0));
}

std::size_t DifferentialForm::offset(std::initializer_list<int> idx) const {
  std::size_t off = 0;
  for (int i : idx) off = off * static_cast<std::size_t>(chart_.dim()) + static_cast<std::size_t>(i);
  return off;
}

void DifferentialForm::set_antisymmetric(std::vector<int> idx, const Expr& v) {
  std::sort(idx.begin(), idx.end());
  do {
    // parity of the permutation taking sorted -> idx
    int inv = 0;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = i + 1; j < idx.size(); ++j)
        if (idx[i] > idx[j]) ++inv;
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(chart_.dim()) + static_cast<std::size_t>(i);
    comp_[off] = inv % 2 == 0 ? v : simplify(-v);
  } while (std::next_permutation(idx.begin(), idx.end()));
}

TensorField almost_complex(const NConnection& ncon) {
  const Chart& chart = ncon.chart;
  int n = chart.n(), m = chart.m();
  if (n != m) throw DimensionMismatchError("almost_complex needs n == m");
  TensorField J(chart,
                {{SlotSpace::Full, Variance::Up}, {SlotSpace::Full, Variance::Down}},
                FrameTag::NAdapted);
  for (int i = 0; i < n; ++i) {
    J.at({n + i, i}) = Expr::number(-1.0);  // J(e_i) = -e_(i)
    J.at({i, n + i}) = Expr::number(1.0);   // J(e_(i)) = e_i
  }
  return J;
}

namespace {

TensorField convert_frame(const TensorField& t, const NConnection& ncon, FrameTag to) {
  const Chart& chart = t.chart();
  int d = chart.dim();
  for (const Slot& s : t.slots())
    if (s.space != SlotSpace::Full)
      throw Error("frame conversion needs full-range slots");
  ExprMatrix A = frame_matrix(ncon);    // e_alpha = A_alpha^mu d_mu
  ExprMatrix B = coframe_matrix(ncon);  // e^alpha = B^alpha_mu du^mu
  // up slots: coordinate components carry A (X^mu = X^alpha A_alpha^mu),
  // down slots carry B; the inverse direction swaps the two.
  TensorField out(chart, t.slots(), to);
  int rank = t.rank();
  std::vector<int> oidx(static_cast<std::size_t>(rank), 0);
  const bool to_coord = to == FrameTag::Coordinate;
  for (;;) {
    std::vector<int> iidx(static_cast<std::size_t>(rank), 0);
    std::vector<Expr> terms;
    for (;;) {
      Expr factor = Expr::number(1.0);
      for (int s = 0; s < rank; ++s) {
        bool up = t.slots()[static_cast<std::size_t>(s)].variance == Variance::Up;
        int src = iidx[static_cast<std::size_t>(s)];
        int dst = oidx[static_cast<std::size_t>(s)];
        // to coordinate: up uses A_src^dst, down uses B^src_dst
        // to adapted:    up uses B^dst_src, down uses A_dst^src
        const Expr& c = to_coord ? (up ? A.at(src, dst) : B.at(src, dst))
                                 : (up ? B.at(dst, src) : A.at(dst, src));
        factor = factor * c;
      }
      std::size_t src_off = 0;
      for (int s = 0; s < rank; ++s)
        src_off = src_off * static_cast<std::size_t>(d) +
                  static_cast<std::size_t>(iidx[static_cast<std::size_t>(s)]);
      terms.push_back(factor * t.components()[src_off]);
      int s = rank - 1;
      for (; s >= 0; --s) {
        if (++iidx[static_cast<std::size_t>(s)] < d) break;
        iidx[static_cast<std::size_t>(s)] = 0;
      }
      if (s < 0) break;
    }
    std::size_t dst_off = 0;
    for (int s = 0; s < rank; ++s)
      dst_off = dst_off * static_cast<std::size_t>(d) +
                static_cast<std::size_t>(oidx[static_cast<std::size_t>(s)]);
    out.components()[dst_off] = simplify(Expr::sum(std::move(terms)));
    int s = rank - 1;
    for (; s >= 0; --s) {
      if (++oidx[static_cast<std::size_t>(s)] < d) break;
      oidx[static_cast<std::size_t>(s)] = 0;
    }
    if (s < 0) break;
  }
  return out;
}

}  // namespace

TensorField to_coordinate(const TensorField& t, const NConnection& ncon) {
  if (t.frame() == FrameTag::Coordinate) return t;
  return convert_frame(t, ncon, FrameTag::Coordinate);
}

TensorField to_adapted(const TensorField& t, const NConnection& ncon) {
  if (t.frame() == FrameTag::NAdapted) return t;
  return convert_frame(t, ncon, FrameTag::NAdapted);
}

namespace {

DifferentialForm convert_form(const DifferentialForm& f, const NConnection& ncon,
                              FrameTag to) {
  const Chart& chart = f.chart();
  int d = chart.dim(), k = f.degree();
  ExprMatrix A = frame_matrix(ncon);
  ExprMatrix B = coframe_matrix(ncon);
  DifferentialForm out(chart, k, to);
  const bool to_coord = to == FrameTag::Coordinate;
  std::vector<int> oidx(static_cast<std::size_t>(k), 0);
  if (k == 0) {
    out.components() = f.components();
    return out;
  }
  for (;;) {
    std::vector<int> iidx(static_cast<std::size_t>(k), 0);
    std::vector<Expr> terms;
    for (;;) {
      Expr factor = Expr::number(1.0);
      for (int s = 0; s < k; ++s) {
        int src = iidx[static_cast<std::size_t>(s)];
        int dst = oidx[static_cast<std::size_t>(s)];
        factor = factor * (to_coord ? B.at(src, dst) : A.at(dst, src));
      }
      std::size_t src_off = 0;
      for (int s = 0; s < k; ++s)
        src_off = src_off * static_cast<std::size_t>(d) +
                  static_cast<std::size_t>(iidx[static_cast<std::size_t>(s)]);
      terms.push_back(factor * f.components()[src_off]);
      int s = k - 1;
      for (; s >= 0; --s) {
        if (++iidx[static_cast<std::size_t>(s)] < d) break;
        iidx[static_cast<std::size_t>(s)] = 0;
      }
      if (s < 0) break;
    }
    std::size_t dst_off = 0;
    for (int s = 0; s < k; ++s)
      dst_off = dst_off * static_cast<std::size_t>(d) +
                static_cast<std::size_t>(oidx[static_cast<std::size_t>(s)]);
    out.components()[dst_off] = simplify(Expr::sum(std::move(terms)));
    int s = k - 1;
    for (; s >= 0; --s) {
      if (++oidx[static_cast<std::size_t>(s)] < d) break;
      oidx[static_cast<std::size_t>(s)] = 0;
    }
    if (s < 0) break;
  }
  return out;
}

}  // namespace

DifferentialForm form_to_coordinate(const DifferentialForm& f, const NConnection& ncon) {
  if (f.frame() == FrameTag::Coordinate) return f;
  return convert_form(f, ncon, FrameTag::Coordinate);
}

DifferentialForm form_to_adapted(const DifferentialForm& f, const NConnection& ncon) {
  if (f.frame() == FrameTag::NAdapted) return f;
  return convert_form(f, ncon, FrameTag::NAdapted);
}

TensorField symplectic_candidate(const DMetric& dm, const TensorField& J) {
  const Chart& chart = dm.chart;
  int n = chart.n(), d = chart.dim();
  auto g_full = [&](int a, int b) -> Expr {
    bool av = a >= n, bv = b >= n;
    if (av != bv) return Expr::number(0.0);
    return av ? dm.h.at(a - n, b - n) : dm.g.at(a, b);
  };
  TensorField theta(chart,
                    {{SlotSpace::Full, Variance::Down}, {SlotSpace::Full, Variance::Down}},
                    FrameTag::NAdapted);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::vector<Expr> terms;
      for (int g = 0; g < d; ++g) terms.push_back(g_full(g, b) * J.at({g, a}));
      theta.at({a, b}) = simplify(Expr::sum(std::move(terms)));
    }
  return theta;
}

DifferentialForm symplectic_form(const DMetric& dm, const TensorField& J,
                                 const std::vector<Point>& probe, double tol) {
  TensorField theta = symplectic_candidate(dm, J);
  const Chart& chart = dm.chart;
  int d = chart.dim();
  double asym = 0.0;
  for (const Point& p : probe) {
    EvalCache cache(p);
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b)
        asym = std::max(asym, std::abs(eval(theta.at({a, b}), cache) +
                                       eval(theta.at({b, a}), cache)));
  }
  if (asym > tol)
    throw IdentificationViolatedError(
        "symplectic candidate not antisymmetric (residual " + std::to_string(asym) +
        "); d-metric lacks the g <-> h identification");
  DifferentialForm out(chart, 2, FrameTag::NAdapted);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out.at({a, b}) = theta.at({a, b});
  return out;
}

DifferentialForm liouville_potential(const Expr& L, const Chart& chart) {
  DifferentialForm omega(chart, 1, FrameTag::Coordinate);
  for (int i = 0; i < chart.n(); ++i)
    omega.at({i}) = simplify(Expr::number(0.5) * deriv(L, chart.n() + i));
  return omega;
}

namespace {

DifferentialForm ext_d(const DifferentialForm& f, const NConnection* ncon,
                       const AnholonomyCoefficients* w) {
  const Chart& chart = f.chart();
  int d = chart.dim(), k = f.degree();
  DifferentialForm out(chart, k + 1, f.frame());
  const bool adapted = f.frame() == FrameTag::NAdapted;

  std::vector<int> idx(static_cast<std::size_t>(k) + 1, 0);
  // iterate strictly increasing index tuples, fill antisymmetrically
  auto advance = [&]() -> bool {
    int s = k;
    for (; s >= 0; --s) {
      if (++idx[static_cast<std::size_t>(s)] <= d - 1 - (k - s)) {
        for (int t = s + 1; t <= k; ++t)
          idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
        return true;
      }
    }
    return false;
  };
  for (int s = 0; s <= k; ++s) idx[static_cast<std::size_t>(s)] = s;
  if (d < k + 1) return out;
  do {
    std::vector<Expr> terms;
    for (int j = 0; j <= k; ++j) {
      std::vector<int> rest;
      for (int s = 0; s <= k; ++s)
        if (s != j) rest.push_back(idx[static_cast<std::size_t>(s)]);
      std::size_t off = 0;
      for (int r : rest) off = off * static_cast<std::size_t>(d) + static_cast<std::size_t>(r);
      const Expr& comp = f.components()[off];
      Expr df = adapted ? adapted_derivative(*ncon, comp, idx[static_cast<std::size_t>(j)])
                        : deriv(comp, idx[static_cast<std::size_t>(j)]);
      terms.push_back(j % 2 == 0 ? df : -df);
    }
    if (adapted && k >= 1) {
      for (int j = 0; j <= k; ++j)
        for (int l = j + 1; l <= k; ++l) {
          std::vector<int> rest;
          for (int s = 0; s <= k; ++s)
            if (s != j && s != l) rest.push_back(idx[static_cast<std::size_t>(s)]);
          for (int g = 0; g < d; ++g) {
            const Expr& wv =
                w->at(g, idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(l)]);
            if (wv.is_number(0.0)) continue;
            std::size_t off = static_cast<std::size_t>(g);
            for (int r : rest) off = off * static_cast<std::size_t>(d) + static_cast<std::size_t>(r);
            Expr term = wv * f.components()[off];
            terms.push_back((j + l) % 2 == 0 ? term : -term);
          }
        }
    }
    std::vector<int> where(idx.begin(), idx.end());
    out.set_antisymmetric(where, simplify(Expr::sum(std::move(terms))));
  } while (advance());
  return out;
}

}  // namespace

DifferentialForm exterior_derivative(const DifferentialForm& f, const NConnection& ncon,
                                     const AnholonomyCoefficients& w) {
  if (f.frame() != FrameTag::NAdapted)
    throw Error("exterior_derivative: frame tag inconsistent with anholonomy data");
  return ext_d(f, &ncon, &w);
}

DifferentialForm exterior_derivative(const DifferentialForm& f) {
  if (f.frame() != FrameTag::Coordinate)
    throw Error("exterior_derivative: N-adapted form needs anholonomy coefficients");
  return ext_d(f, nullptr, nullptr);
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.degree() != 1 || b.degree() != 1) throw Error("wedge: implemented for 1-forms");
  if (a.frame() != b.frame()) throw Error("wedge: mixed frames");
  const Chart& chart = a.chart();
  int d = chart.dim();
  DifferentialForm out(chart, 2, a.frame());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out.at({i, j}) = simplify(a.at({i}) * b.at({j}) - a.at({j}) * b.at({i}));
  return out;
}

TensorField neijenhuis(const TensorField& J, const NConnection& ncon) {
  const Chart& chart = ncon.chart;
  int d = chart.dim();
  AnholonomyCoefficients w = anholonomy(ncon);
  TensorField nj(chart,
                 {{SlotSpace::Full, Variance::Up},
                  {SlotSpace::Full, Variance::Down},
                  {SlotSpace::Full, Variance::Down}},
                 FrameTag::NAdapted);
  for (int al = 0; al < d; ++al)
    for (int be = al + 1; be < d; ++be) {
      for (int de = 0; de < d; ++de) {
        std::vector<Expr> terms;
        terms.push_back(-w.at(de, al, be));
        for (int g = 0; g < d; ++g)
          for (int e = 0; e < d; ++e) {
            const Expr& jga = J.at({g, al});
            const Expr& jeb = J.at({e, be});
            if (jga.is_number(0.0) || jeb.is_number(0.0)) continue;
            terms.push_back(jga * jeb * w.at(de, g, e));
          }
        for (int e = 0; e < d; ++e) {
          const Expr& jde = J.at({de, e});
          if (jde.is_number(0.0)) continue;
          for (int g = 0; g < d; ++g) {
            terms.push_back(-(jde * J.at({g, al}) * w.at(e, g, be)));
            terms.push_back(-(jde * J.at({g, be}) * w.at(e, al, g)));
          }
        }
        Expr v = simplify(Expr::sum(std::move(terms)));
        nj.at({de, al, be}) = v;
        nj.at({de, be, al}) = simplify(-v);
      }
    }
  return nj;
}

std::vector<Expr> vf_bracket(const std::vector<Expr>& X, const std::vector<Expr>& Y,
                             const Chart& chart) {
  int d = chart.dim();
  std::vector<Expr> out(static_cast<std::size_t>(d));
  for (int nu = 0; nu < d; ++nu) {
    std::vector<Expr> terms;
    for (int mu = 0; mu < d; ++mu) {
      terms.push_back(X[static_cast<std::size_t>(mu)] * deriv(Y[static_cast<std::size_t>(nu)], mu));
      terms.push_back(-(Y[static_cast<std::size_t>(mu)] * deriv(X[static_cast<std::size_t>(nu)], mu)));
    }
    out[static_cast<std::size_t>(nu)] = simplify(Expr::sum(std::move(terms)));
  }
  return out;
}

}  // namespace akgrav
