#include "akgrav/metrics.hpp"

#include <cmath>

namespace akgrav {

double DMetric::identification_residual(const std::vector<Point>& pts) const {
  double mx = 0.0;
  for (const Point& p : pts) {
    EvalCache cache(p);
    for (int i = 0; i < chart.n(); ++i)
      for (int j = 0; j < chart.n(); ++j)
        mx = std::max(mx, std::abs(eval(g.at(i, j), cache) - eval(h.at(i, j), cache)));
  }
  return mx;
}

bool DMetric::identification_holds(const std::vector<Point>& pts, double tol) const {
  if (chart.n() != chart.m()) return false;
  return identification_residual(pts) <= tol;
}

DMetric lagrange_dmetric(const Expr& L, const Chart& chart) {
  auto [spray, ncon] = canonical_nconnection(L, chart);
  (void)spray;
  DMetric dm;
  dm.chart = chart;
  dm.h = hessian(L, chart);
  dm.g = dm.h;  // g_ij = h_{(i)(j)} under the pairing
  dm.ncon = std::move(ncon);
  return dm;
}

ExprMatrix assemble_coordinate_metric(const DMetric& dm) {
  const Chart& chart = dm.chart;
  int n = chart.n(), m = chart.m(), d = chart.dim();
  ExprMatrix G(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<Expr> terms{dm.g.at(i, j)};
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          terms.push_back(dm.ncon.N.at(a, i) * dm.ncon.N.at(b, j) * dm.h.at(a, b));
      G.at(i, j) = simplify(Expr::sum(std::move(terms)));
    }
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < m; ++a) {
      std::vector<Expr> terms;
      for (int e = 0; e < m; ++e) terms.push_back(dm.ncon.N.at(e, j) * dm.h.at(a, e));
      Expr v = simplify(Expr::sum(std::move(terms)));
      G.at(j, n + a) = v;
      G.at(n + a, j) = v;
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) G.at(n + a, n + b) = dm.h.at(a, b);
  return G;
}

NConnection extract_nconnection(const ExprMatrix& G, const Chart& chart) {
  int n = chart.n(), m = chart.m();
  ExprMatrix h(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) h.at(a, b) = G.at(n + a, n + b);
  ExprMatrix hinv = sym_inverse(h);
  NConnection ncon{chart, ExprMatrix(m, n)};
  for (int e = 0; e < m; ++e)
    for (int j = 0; j < n; ++j) {
      std::vector<Expr> terms;
      for (int b = 0; b < m; ++b) terms.push_back(hinv.at(e, b) * G.at(j, n + b));
      ncon.N.at(e, j) = simplify(Expr::sum(std::move(terms)));
    }
  return ncon;
}

namespace {

// Newton solve of E A E = B over symmetric E, seeded at the identity.
Mat solve_block(const Mat& A, const Mat& B) {
  int k = A.rows;
  if (signature_negatives(A) != signature_negatives(B))
    throw SignatureMismatchError("frame match: block signatures differ");

  int unknowns = k * (k + 1) / 2;
  auto pack = [&](const Mat& s) {
    std::vector<double> x(static_cast<std::size_t>(unknowns));
    int u = 0;
    for (int r = 0; r < k; ++r)
      for (int c = r; c < k; ++c) x[static_cast<std::size_t>(u++)] = s.at(r, c);
    return x;
  };
  auto unpack = [&](const std::vector<double>& x) {
    Mat s(k, k);
    int u = 0;
    for (int r = 0; r < k; ++r)
      for (int c = r; c < k; ++c) {
        s.at(r, c) = x[static_cast<std::size_t>(u)];
        s.at(c, r) = x[static_cast<std::size_t>(u)];
        ++u;
      }
    return s;
  };
  auto residual = [&](const Mat& E) {
    Mat r = mat_mul(mat_mul(E, A), E);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) r.at(i, j) -= B.at(i, j);
    return r;
  };

  double scale = std::max(frobenius(A), frobenius(B));
  Mat E = Mat::identity(k);
  for (int iter = 0; iter < 100; ++iter) {
    Mat F = residual(E);
    if (frobenius(F) <= 1e-13 * std::max(scale, 1.0)) return E;

    // dF[H] = H A E + E A H for symmetric H; assemble the dense Jacobian
    std::vector<double> rhs = pack(F);
    Mat J(unknowns, unknowns);
    int col = 0;
    for (int r = 0; r < k; ++r)
      for (int c = r; c < k; ++c) {
        Mat H(k, k);
        H.at(r, c) = 1.0;
        H.at(c, r) = 1.0;
        Mat dF = mat_mul(mat_mul(H, A), E);
        Mat dF2 = mat_mul(mat_mul(E, A), H);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) dF.at(i, j) += dF2.at(i, j);
        std::vector<double> colv = pack(dF);
        for (int row = 0; row < unknowns; ++row)
          J.at(row, col) = colv[static_cast<std::size_t>(row)];
        ++col;
      }
    Mat Jinv;
    try {
      Jinv = num_inverse(J);
    } catch (const DegenerateMetricError&) {
      throw NoConvergenceError("frame match: singular Newton system");
    }
    std::vector<double> x = pack(E);
    for (int r = 0; r < unknowns; ++r) {
      double step = 0.0;
      for (int c = 0; c < unknowns; ++c)
        step += Jinv.at(r, c) * rhs[static_cast<std::size_t>(c)];
      x[static_cast<std::size_t>(r)] -= step;
    }
    E = unpack(x);
  }
  throw NoConvergenceError("frame match: Newton did not converge in 100 iterations");
}

}  // namespace

Vierbein frame_match_solve(const DMetric& target, const DMetric& source, const Point& p) {
  const Chart& chart = source.chart;
  int n = chart.n(), m = chart.m(), d = chart.dim();
  EvalCache ct(p), cs(p);
  Mat gp = eval_matrix(target.g, ct);
  Mat hp = eval_matrix(target.h, ct);
  Mat gs = eval_matrix(source.g, cs);
  Mat hs = eval_matrix(source.h, cs);

  Mat Eh = solve_block(gp, gs);
  Mat Ev = solve_block(hp, hs);

  Vierbein vb;
  vb.e = Mat(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) vb.e.at(i, j) = Eh.at(i, j);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) vb.e.at(n + a, n + b) = Ev.at(a, b);

  // induced primed N: N'^{a'}_{i'} = e^{a'}_a N^a_i (e^{-1})^i_{i'}
  Mat Ns(m, n);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i) Ns.at(a, i) = eval(source.ncon.N.at(a, i), cs);
  vb.nprime = mat_mul(mat_mul(Ev, Ns), num_inverse(Eh));
  return vb;
}

double frame_match_residual(const DMetric& target, const DMetric& source,
                            const Point& p, const Vierbein& vb) {
  const Chart& chart = source.chart;
  int n = chart.n(), m = chart.m(), d = chart.dim();
  EvalCache ct(p), cs(p);
  Mat Gp(d, d), Gs(d, d);
  Mat gp = eval_matrix(target.g, ct), hp = eval_matrix(target.h, ct);
  Mat gs = eval_matrix(source.g, cs), hs = eval_matrix(source.h, cs);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Gp.at(i, j) = gp.at(i, j);
      Gs.at(i, j) = gs.at(i, j);
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Gp.at(n + a, n + b) = hp.at(a, b);
      Gs.at(n + a, n + b) = hs.at(a, b);
    }
  Mat lhs = mat_mul(mat_transpose(vb.e), mat_mul(Gp, vb.e));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lhs.at(i, j) -= Gs.at(i, j);
  return frobenius(lhs);
}

void check_nondegenerate(const DMetric& dm, const std::vector<Point>& pts) {
  for (const Point& p : pts) {
    EvalCache cache(p);
    num_inverse(eval_matrix(dm.g, cache));
    num_inverse(eval_matrix(dm.h, cache));
  }
}

}  // namespace akgrav
