#pragma once

#include "akgrav/almost_kahler.hpp"
#include "akgrav/metrics.hpp"
#include "akgrav/sampling.hpp"

namespace akgrav {

// N-adapted d-connection coefficients. Index order: [up][row][direction],
// i.e. D_{e_dir} e_row = Gamma^up_{row,dir} e_up.
struct DConnection {
  Chart chart = Chart::standard();
  std::vector<Expr> Lh;  // L^i_{jk}:  n*n*n
  std::vector<Expr> Lv;  // L^a_{bk}:  m*m*n
  std::vector<Expr> Ch;  // C^i_{jc}:  n*n*m
  std::vector<Expr> Cv;  // C^a_{bc}:  m*m*m

  static DConnection zeros(const Chart& chart);

  Expr& lh(int i, int j, int k);
  Expr& lv(int a, int b, int k);
  Expr& ch(int i, int j, int c);
  Expr& cv(int a, int b, int c);
  const Expr& lh(int i, int j, int k) const;
  const Expr& lv(int a, int b, int k) const;
  const Expr& ch(int i, int j, int c) const;
  const Expr& cv(int a, int b, int c) const;
};

// Full (n+m)^3 frame coefficient array [up][row][dir]; mixed blocks zero.
std::vector<Expr> full_gamma(const DConnection& dc);

enum class NormalDcMode {
  Identified,       // g_ij = h_(i)(j): v-blocks are shifted copies of the h-blocks
  BlockDiagonalN0,  // N = 0 reduction for non-identified block metrics
};

struct NormalDc {
  DConnection dc;
  NormalDcMode mode = NormalDcMode::Identified;
};

// Normal (canonical almost-symplectic) d-connection. Identified d-metrics use
// the h-Christoffel pattern in the adapted derivatives with v-blocks copied
// through the pairing; N = 0 block metrics use the unambiguous reduction.
// Anything else: IdentificationViolatedError.
NormalDc normal_dconnection(const DMetric& dm, const std::vector<Point>& probe,
                            double ident_tol = 1e-10);

// Coordinate-basis Christoffel symbols of the second kind; symmetric lower pair.
struct ChristoffelField {
  Chart chart = Chart::standard();
  std::vector<Expr> gamma;  // (n+m)^3, [up][low][low]

  Expr& at(int r, int s, int m);
  const Expr& at(int r, int s, int m) const;
};

ChristoffelField levi_civita(const ExprMatrix& g_full, const Chart& chart);

// Levi-Civita coefficients pushed into the N-adapted frame with the standard
// inhomogeneous transformation law (the N-elongated frame matrix and its
// inverse are closed-form unit-triangular). Layout matches full_gamma.
std::vector<Expr> lc_adapted_coefficients(const ChristoffelField& lc,
                                          const NConnection& ncon);

struct DistortionIntermediates {
  std::vector<Expr> xi_h;       // Xi^{ih}_{jk} = 1/2 (d^i_j d^h_k - g_jk g^{ih}), n^4
  std::vector<Expr> xi_v_plus;  // +Xi^{ab}_{cd} = 1/2 (d^a_c d^b_d + h_cd h^{ab}), m^4
  std::vector<Expr> xi_v_minus; // -Xi^{ab}_{cd} = 1/2 (d^a_c d^b_d - h_cd h^{ab}), m^4
  std::vector<Expr> l_ring;     // oL^c_{aj} = L^c_{aj} - dN^c_j/dy^a, m*m*n
};

// Index-dress readings for the mixed distortion blocks; the lower pair of the
// two oL blocks is read either transposed against the [row][dir] layout
// (the reading the Koszul derivation selects) or as printed.
enum class DeftSlotReading { TransposedMixed, PrintedMixed };

struct Distortion {
  TensorField Z;  // (1,2) full frame array [up][row][dir]
  DistortionIntermediates parts;
  DeftSlotReading reading = DeftSlotReading::TransposedMixed;
};

Distortion distortion(const DMetric& dm, const DConnection& dc,
                      DeftSlotReading reading = DeftSlotReading::TransposedMixed);

struct DeflcResult {
  SweepResult sweep;
  DeftSlotReading reading = DeftSlotReading::TransposedMixed;
  bool fell_back = false;  // primary reading failed, alternate selected
};

// max |LC(adapted) - (normal + Z)| over points and slots; tries the primary
// slot reading and falls back to the alternate when the residual misses tol.
DeflcResult reconcile_deflc(const ChristoffelField& lc, const DConnection& dc,
                            const DMetric& dm, const std::vector<Point>& pts,
                            double tol = 1e-9);

// Torsion components of the d-connection:
//   T^i_{jk} = 0, T^i_{jc} = C^i_{jc}, T^a_{ij} = Omega^a_{ij},
//   T^a_{ib} = dN^a_i/dy^b - L^a_{bi}, T^a_{bc} = 0.
// Returned as the full antisymmetric (1,2) frame array.
TensorField torsion(const DConnection& dc, const NConnection& ncon);

// (D_gamma t)_{alpha beta}, direction slot appended last.
TensorField covariant_derivative_02(const TensorField& t, const DConnection& dc,
                                    const NConnection& ncon);

struct CompatibilityResiduals {
  SweepResult dg;
  SweepResult dtheta;
};

CompatibilityResiduals compatibility_residuals(const DMetric& dm, const DConnection& dc,
                                               const TensorField& theta,
                                               const std::vector<Point>& pts);

// First Cartan structure equation residual: the torsion 2-forms recomputed
// from d(coframe) and the connection 1-forms against the component table.
SweepResult cart1_residual(const DConnection& dc, const NConnection& ncon,
                           const std::vector<Point>& pts);

// frame (0,2) metric blockdiag(g, h) as a TensorField
TensorField frame_metric(const DMetric& dm);

}  // namespace akgrav
