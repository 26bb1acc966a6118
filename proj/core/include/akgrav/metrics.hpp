#pragma once

#include "akgrav/frames.hpp"
#include "akgrav/linalg.hpp"

namespace akgrav {

// Block d-metric: h-block g_ij, v-block h_ab, both relative to the N-adapted
// coframe (dx^i, e^a = dy^a + N^a_i dx^i).
struct DMetric {
  Chart chart = Chart::standard();
  ExprMatrix g;  // n x n, symmetric
  ExprMatrix h;  // m x m, symmetric
  NConnection ncon;

  // True when g_ij = h_{(i)(j)} holds entrywise at the sample points
  // (the pairing (i) = i shifted into the v-block).
  bool identification_holds(const std::vector<Point>& pts, double tol = 1e-10) const;

  // max |g - shifted h| over the points; 0 for structurally identified metrics
  double identification_residual(const std::vector<Point>& pts) const;
};

// Pointwise frame-matching result: block-diagonal vierbein e^{alpha'}_alpha
// and the induced primed N-connection values at the point.
struct Vierbein {
  Mat e;       // (n+m) x (n+m)
  Mat nprime;  // m x n
};

// d-metric induced by a generating function: v-block = Hessian, h-block the
// shifted copy, N canonical.
DMetric lagrange_dmetric(const Expr& L, const Chart& chart);

// Full coordinate-basis metric: upper-left g_ij + N^a_i N^b_j h_ab,
// off-diagonal N^e_j h_ae, lower-right h_ab.
ExprMatrix assemble_coordinate_metric(const DMetric& dm);

// N^e_j = h^{eb} G_{j,b} from the off-diagonal block against the inverse
// v-block; inverse of assemble_coordinate_metric on well-formed inputs.
NConnection extract_nconnection(const ExprMatrix& G, const Chart& chart);

// Solve g'_{a'b'} e^{a'}_a e^{b'}_b = g_{ab} pointwise for a block-diagonal
// vierbein with symmetric blocks (Newton, seeded at identity). `target` is
// the primed-frame d-metric, `source` the reference d-metric at the same
// point. Throws SignatureMismatchError / NoConvergenceError.
Vierbein frame_match_solve(const DMetric& target, const DMetric& source, const Point& p);

// residual |e^T G' e - G|_F at the point, for reporting
double frame_match_residual(const DMetric& target, const DMetric& source,
                            const Point& p, const Vierbein& vb);

void check_nondegenerate(const DMetric& dm, const std::vector<Point>& pts);

}  // namespace akgrav
