#pragma once

#include "akgrav/metrics.hpp"
#include "akgrav/tensor.hpp"

namespace akgrav {

// Degree-k form stored as a fully antisymmetric dense component array over
// the (n+m)-dimensional coframe; frame tag records which coframe.
class DifferentialForm {
public:
  DifferentialForm() = default;
  DifferentialForm(Chart chart, int degree, FrameTag frame);

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  FrameTag frame() const { return frame_; }

  Expr& at(std::initializer_list<int> idx) { return comp_[offset(idx)]; }
  const Expr& at(std::initializer_list<int> idx) const { return comp_[offset(idx)]; }

  std::vector<Expr>& components() { return comp_; }
  const std::vector<Expr>& components() const { return comp_; }

  // writes v into every index permutation with alternating signs
  void set_antisymmetric(std::vector<int> idx, const Expr& v);

private:
  std::size_t offset(std::initializer_list<int> idx) const;

  Chart chart_ = Chart::standard();
  int degree_ = 0;
  FrameTag frame_ = FrameTag::NAdapted;
  std::vector<Expr> comp_;
};

// Almost-complex structure adapted to the 2+2 pairing: J(e_i) = -e_(i),
// J(e_(i)) = e_i, constant blocks [[0, I], [-I, 0]] over the ordered
// N-adapted basis (e_i, e_a). Requires n == m.
TensorField almost_complex(const NConnection& ncon);

// Conjugation into the coordinate basis with the N-elongated frame matrices.
TensorField to_coordinate(const TensorField& t, const NConnection& ncon);
TensorField to_adapted(const TensorField& t, const NConnection& ncon);

DifferentialForm form_to_coordinate(const DifferentialForm& f, const NConnection& ncon);
DifferentialForm form_to_adapted(const DifferentialForm& f, const NConnection& ncon);

// theta_{alpha beta} = g_{gamma beta} J^gamma_alpha, i.e. theta(X,Y) = g(JX,Y)
// with the first slot receiving J. Raw (0,2) components; antisymmetric iff the
// d-metric satisfies the g <-> h identification.
TensorField symplectic_candidate(const DMetric& dm, const TensorField& J);

// Same components packaged as a 2-form. Throws IdentificationViolatedError
// when the candidate fails antisymmetry at the probe points.
DifferentialForm symplectic_form(const DMetric& dm, const TensorField& J,
                                 const std::vector<Point>& probe, double tol = 1e-10);

// omega = 1/2 dL/dy^(i) dx^i on the coordinate coframe.
DifferentialForm liouville_potential(const Expr& L, const Chart& chart);

// Anholonomic-frame exterior derivative:
// (df)_{a0..ak} = sum_j (-1)^j e_{aj} f_{..aj-hat..}
//               + sum_{j<l} (-1)^{j+l} w^g_{aj al} f_{g,..aj-hat..al-hat..}
// Coordinate-frame forms take e = partial derivatives and w = 0.
DifferentialForm exterior_derivative(const DifferentialForm& f, const NConnection& ncon,
                                     const AnholonomyCoefficients& w);
DifferentialForm exterior_derivative(const DifferentialForm& f);  // coordinate frame

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);  // 1-forms

// Neijenhuis tensor of J expanded through the anholonomy coefficients,
// N(X,Y) = -[X,Y] + [JX,JY] - J[JX,Y] - J[X,JY]; components in the
// N-adapted basis, rank (1,2), antisymmetric in the lower pair.
TensorField neijenhuis(const TensorField& J, const NConnection& ncon);

// [X,Y]^nu = X^mu d_mu Y^nu - Y^mu d_mu X^nu for coordinate vector fields;
// independent commutator oracle used by the tests.
std::vector<Expr> vf_bracket(const std::vector<Expr>& X, const std::vector<Expr>& Y,
                             const Chart& chart);

}  // namespace akgrav
