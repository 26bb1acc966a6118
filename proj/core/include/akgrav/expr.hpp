#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace akgrav {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class SyntaxError : public Error {
public:
  SyntaxError(const std::string& msg, std::size_t position)
      : Error(msg + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

class UnknownIdentifierError : public SyntaxError {
public:
  UnknownIdentifierError(const std::string& name, std::size_t position)
      : SyntaxError("unknown identifier '" + name + "'", position), name(name) {}
  std::string name;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class DegenerateMetricError : public Error {
public:
  using Error::Error;
};

class IdentificationViolatedError : public Error {
public:
  using Error::Error;
};

class NoConvergenceError : public Error {
public:
  using Error::Error;
};

class SignatureMismatchError : public Error {
public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
public:
  using Error::Error;
};

class NonConstantRhsError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Chart: named coordinates split into n horizontal and m vertical slots.
// Index convention throughout the library: 0..n-1 are h-coordinates,
// n..n+m-1 are v-coordinates. Where a construction pairs an h-index i with
// a v-index, the pairing is a <-> n+i.
// ---------------------------------------------------------------------------

class Chart {
public:
  Chart(std::vector<std::string> h_names, std::vector<std::string> v_names);

  // x1,x2,...  y{n+1},...  e.g. the 2+2 default x1 x2 y3 y4
  static Chart standard(int n = 2, int m = 2);

  int n() const { return n_; }
  int m() const { return m_; }
  int dim() const { return n_ + m_; }
  bool is_v(int idx) const { return idx >= n_; }

  const std::string& name(int idx) const { return names_[static_cast<std::size_t>(idx)]; }
  std::optional<int> index_of(std::string_view name) const;

  bool operator==(const Chart& o) const { return names_ == o.names_ && n_ == o.n_; }

private:
  int n_ = 0;
  int m_ = 0;
  std::vector<std::string> names_;
};

using Point = std::vector<double>;

// ---------------------------------------------------------------------------
// ScalarExpr: immutable expression tree over chart coordinates.
//
// Canonical representation kept by the smart constructors:
//   - negation is a Product with leading coefficient -1
//   - quotients are Products with negative-exponent Power factors
//   - nested sums/products are flattened, numeric children folded,
//     a numeric coefficient (if any) sits first
// so structural equality doubles as a cheap normal form and printing
// round-trips through the parser.
// ---------------------------------------------------------------------------

enum class ExprKind { Number, Var, Sum, Product, Power, Sin, Cos, Exp, Log, Sqrt };

class Expr;

struct ExprNode {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;      // Number
  int var = -1;             // Var
  int exponent = 0;         // Power
  std::vector<Expr> kids;   // Sum/Product >= 2 children, Power/functions 1
};

class Expr {
public:
  Expr();  // zero
  static Expr number(double v);
  static Expr variable(int chart_index);

  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr pow(const Expr& base, int k);
  static Expr sin(const Expr& e);
  static Expr cos(const Expr& e);
  static Expr exp(const Expr& e);
  static Expr log(const Expr& e);
  static Expr sqrt(const Expr& e);

  const ExprNode& node() const { return *p_; }
  const ExprNode* raw() const { return p_.get(); }
  ExprKind kind() const { return p_->kind; }

  bool is_number() const { return p_->kind == ExprKind::Number; }
  bool is_number(double v) const { return is_number() && p_->number == v; }
  double number_value() const { return p_->number; }

  friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b) { return sum({a, -b}); }
  friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
  friend Expr operator/(const Expr& a, const Expr& b) { return product({a, pow(b, -1)}); }
  Expr operator-() const { return product({number(-1.0), *this}); }

  Expr& operator+=(const Expr& o) { *this = *this + o; return *this; }
  Expr& operator-=(const Expr& o) { *this = *this - o; return *this; }
  Expr& operator*=(const Expr& o) { *this = *this * o; return *this; }

private:
  explicit Expr(std::shared_ptr<const ExprNode> p) : p_(std::move(p)) {}
  static Expr make(ExprNode&& n);
  std::shared_ptr<const ExprNode> p_;
};

bool structurally_equal(const Expr& a, const Expr& b);
int compare(const Expr& a, const Expr& b);  // total order, used for canonical sorting
bool depends_on(const Expr& e, int var);
bool is_constant(const Expr& e);
std::size_t tree_size(const Expr& e);

// Exact symbolic partial derivative with respect to chart coordinate `var`.
Expr deriv(const Expr& e, int var);
Expr deriv(const Expr& e, int var, int order);

// Numeric evaluation. Throws DomainError when a subexpression is undefined or
// non-finite at p.
double eval(const Expr& e, std::span<const double> p);

// Memoizing evaluation for sweeps over many expressions sharing subtrees at
// one point. The cache is valid for a single point only.
class EvalCache {
public:
  explicit EvalCache(std::span<const double> p) : point_(p) {}
  std::span<const double> point() const { return point_; }
  std::unordered_map<const ExprNode*, double>& memo() { return memo_; }

private:
  std::span<const double> point_;
  std::unordered_map<const ExprNode*, double> memo_;
};

double eval(const Expr& e, EvalCache& cache);

// Best-effort simplification: constant folding, 0/1 identities, flattening,
// like-term and like-factor collection. Value-preserving at valid points;
// verdicts downstream are always rendered numerically, never by reliance on
// simplification reaching a literal zero.
Expr simplify(const Expr& e);

std::string to_string(const Expr& e, const Chart& chart);
std::string to_string(const Expr& e);  // generic u0,u1,... coordinate labels

// Grammar: expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
// factor := ['-'] base ('^' integer)?; base := number | ident | '(' expr ')'
// | func '(' expr ')'; func in {sin,cos,exp,ln,sqrt}.
Expr parse_expr(std::string_view source, const Chart& chart);

// Central difference (e(p+h) - e(p-h)) / 2h along `var`.
double central_difference(const Expr& e, int var, const Point& p, double h);

// |central difference - eval(deriv(e,var), p)|; the library's standing
// derivative oracle.
double fd_residual(const Expr& e, int var, const Point& p, double h);

}  // namespace akgrav
