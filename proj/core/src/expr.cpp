#include "akgrav/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>

namespace akgrav {

// ---------------------------------------------------------------------------
// Chart
// ---------------------------------------------------------------------------

Chart::Chart(std::vector<std::string> h_names, std::vector<std::string> v_names)
    : n_(static_cast<int>(h_names.size())), m_(static_cast<int>(v_names.size())) {
  if (n_ < 1 || m_ < 1) throw DimensionMismatchError("chart needs n >= 1 and m >= 1");
  names_ = std::move(h_names);
  names_.insert(names_.end(), v_names.begin(), v_names.end());
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j])
        throw Error("duplicate coordinate name '" + names_[i] + "'");
}

Chart Chart::standard(int n, int m) {
  std::vector<std::string> h, v;
  for (int i = 0; i < n; ++i) h.push_back("x" + std::to_string(i + 1));
  for (int a = 0; a < m; ++a) v.push_back("y" + std::to_string(n + a + 1));
  return Chart(std::move(h), std::move(v));
}

std::optional<int> Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Expr Expr::make(ExprNode&& n) {
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr::Expr() : Expr(number(0.0)) {}

Expr Expr::number(double v) {
  ExprNode n;
  n.kind = ExprKind::Number;
  n.number = v == 0.0 ? 0.0 : v;  // normalize -0
  return make(std::move(n));
}

Expr Expr::variable(int chart_index) {
  ExprNode n;
  n.kind = ExprKind::Var;
  n.var = chart_index;
  return make(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> kids;
  double c = 0.0;
  auto absorb = [&](auto&& self, const Expr& t) -> void {
    if (t.kind() == ExprKind::Sum) {
      for (const Expr& k : t.node().kids) self(self, k);
    } else if (t.is_number()) {
      c += t.number_value();
    } else {
      kids.push_back(t);
    }
  };
  for (const Expr& t : terms) absorb(absorb, t);
  if (kids.empty()) return number(c);
  if (c != 0.0) kids.insert(kids.begin(), number(c));
  if (kids.size() == 1) return kids[0];
  ExprNode n;
  n.kind = ExprKind::Sum;
  n.kids = std::move(kids);
  return make(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> kids;
  double c = 1.0;
  auto absorb = [&](auto&& self, const Expr& f) -> void {
    if (f.kind() == ExprKind::Product) {
      for (const Expr& k : f.node().kids) self(self, k);
    } else if (f.is_number()) {
      c *= f.number_value();
    } else {
      kids.push_back(f);
    }
  };
  for (const Expr& f : factors) absorb(absorb, f);
  if (c == 0.0) return number(0.0);
  if (kids.empty()) return number(c);
  if (c != 1.0) kids.insert(kids.begin(), number(c));
  if (kids.size() == 1) return kids[0];
  ExprNode n;
  n.kind = ExprKind::Product;
  n.kids = std::move(kids);
  return make(std::move(n));
}

Expr Expr::pow(const Expr& base, int k) {
  if (k == 0) return number(1.0);
  if (k == 1) return base;
  if (base.is_number()) {
    double v = std::pow(base.number_value(), static_cast<double>(k));
    if (std::isfinite(v)) return number(v);
    // leave 0^-k and friends unfolded so eval reports the domain error
  }
  if (base.kind() == ExprKind::Power) {
    return pow(base.node().kids[0], base.node().exponent * k);
  }
  if (base.kind() == ExprKind::Product) {
    std::vector<Expr> fs;
    fs.reserve(base.node().kids.size());
    for (const Expr& f : base.node().kids) fs.push_back(pow(f, k));
    return product(std::move(fs));
  }
  ExprNode n;
  n.kind = ExprKind::Power;
  n.exponent = k;
  n.kids = {base};
  return make(std::move(n));
}

Expr Expr::sin(const Expr& e) {
  if (e.is_number()) return number(std::sin(e.number_value()));
  ExprNode n; n.kind = ExprKind::Sin; n.kids = {e};
  return make(std::move(n));
}
Expr Expr::cos(const Expr& e) {
  if (e.is_number()) return number(std::cos(e.number_value()));
  ExprNode n; n.kind = ExprKind::Cos; n.kids = {e};
  return make(std::move(n));
}
Expr Expr::exp(const Expr& e) {
  if (e.is_number()) {
    double v = std::exp(e.number_value());
    if (std::isfinite(v)) return number(v);
  }
  ExprNode n; n.kind = ExprKind::Exp; n.kids = {e};
  return make(std::move(n));
}
Expr Expr::log(const Expr& e) {
  if (e.is_number() && e.number_value() > 0.0) return number(std::log(e.number_value()));
  ExprNode n; n.kind = ExprKind::Log; n.kids = {e};
  return make(std::move(n));
}
Expr Expr::sqrt(const Expr& e) {
  if (e.is_number() && e.number_value() >= 0.0) return number(std::sqrt(e.number_value()));
  ExprNode n; n.kind = ExprKind::Sqrt; n.kids = {e};
  return make(std::move(n));
}

// ---------------------------------------------------------------------------
// Structure
// ---------------------------------------------------------------------------

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.raw() == b.raw()) return true;
  const ExprNode& x = a.node();
  const ExprNode& y = b.node();
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Number: return x.number == y.number;
    case ExprKind::Var: return x.var == y.var;
    case ExprKind::Power:
      if (x.exponent != y.exponent) return false;
      break;
    default: break;
  }
  if (x.kids.size() != y.kids.size()) return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!structurally_equal(x.kids[i], y.kids[i])) return false;
  return true;
}

int compare(const Expr& a, const Expr& b) {
  if (a.raw() == b.raw()) return 0;
  const ExprNode& x = a.node();
  const ExprNode& y = b.node();
  if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind) ? -1 : 1;
  switch (x.kind) {
    case ExprKind::Number:
      if (x.number != y.number) return x.number < y.number ? -1 : 1;
      return 0;
    case ExprKind::Var:
      if (x.var != y.var) return x.var < y.var ? -1 : 1;
      return 0;
    case ExprKind::Power:
      if (int c = compare(x.kids[0], y.kids[0]); c != 0) return c;
      if (x.exponent != y.exponent) return x.exponent < y.exponent ? -1 : 1;
      return 0;
    default: break;
  }
  if (x.kids.size() != y.kids.size()) return x.kids.size() < y.kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (int c = compare(x.kids[i], y.kids[i]); c != 0) return c;
  return 0;
}

namespace {

// Expression values are immutable and heavily shared; the caches below key on
// node identity and keep an owning copy so a recycled allocation can never
// alias a live entry. Thread-local: construction runs single-threaded, sweeps
// only evaluate.
struct DepsCache {
  std::unordered_map<const ExprNode*, std::pair<Expr, std::uint64_t>> map;
};

thread_local DepsCache g_deps;

std::uint64_t deps_mask(const Expr& e) {
  const ExprNode& n = e.node();
  if (n.kind == ExprKind::Number) return 0;
  if (n.kind == ExprKind::Var)
    return n.var < 64 ? (std::uint64_t{1} << n.var) : ~std::uint64_t{0};
  auto it = g_deps.map.find(e.raw());
  if (it != g_deps.map.end()) return it->second.second;
  std::uint64_t m = 0;
  for (const Expr& k : n.kids) m |= deps_mask(k);
  if (g_deps.map.size() > (1u << 22)) g_deps.map.clear();
  g_deps.map.emplace(e.raw(), std::make_pair(e, m));
  return m;
}

}  // namespace

bool depends_on(const Expr& e, int var) {
  if (var < 64) return (deps_mask(e) >> var) & 1u;
  const ExprNode& n = e.node();
  if (n.kind == ExprKind::Var) return n.var == var;
  for (const Expr& k : n.kids)
    if (depends_on(k, var)) return true;
  return false;
}

bool is_constant(const Expr& e) {
  const ExprNode& n = e.node();
  if (n.kind == ExprKind::Var) return false;
  for (const Expr& k : n.kids)
    if (!is_constant(k)) return false;
  return true;
}

std::size_t tree_size(const Expr& e) {
  std::size_t s = 1;
  for (const Expr& k : e.node().kids) s += tree_size(k);
  return s;
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace {

struct DerivCache {
  std::unordered_map<const ExprNode*, std::pair<Expr, std::unordered_map<int, Expr>>> map;
};

thread_local DerivCache g_deriv;

Expr deriv_impl(const Expr& e, int var);

}  // namespace

Expr deriv(const Expr& e, int var) {
  if (!depends_on(e, var)) return Expr::number(0.0);
  auto it = g_deriv.map.find(e.raw());
  if (it != g_deriv.map.end()) {
    auto jt = it->second.second.find(var);
    if (jt != it->second.second.end()) return jt->second;
  }
  Expr d = deriv_impl(e, var);
  if (g_deriv.map.size() > (1u << 21)) g_deriv.map.clear();
  auto& slot = g_deriv.map.try_emplace(e.raw(), e, std::unordered_map<int, Expr>{}).first->second;
  slot.second.emplace(var, d);
  return d;
}

namespace {

Expr deriv_impl(const Expr& e, int var) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprKind::Number: return Expr::number(0.0);
    case ExprKind::Var: return Expr::number(n.var == var ? 1.0 : 0.0);
    case ExprKind::Sum: {
      std::vector<Expr> t;
      t.reserve(n.kids.size());
      for (const Expr& k : n.kids) t.push_back(deriv(k, var));
      return Expr::sum(std::move(t));
    }
    case ExprKind::Product: {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (!depends_on(n.kids[i], var)) continue;
        std::vector<Expr> fs;
        fs.reserve(n.kids.size());
        for (std::size_t j = 0; j < n.kids.size(); ++j)
          fs.push_back(j == i ? deriv(n.kids[j], var) : n.kids[j]);
        terms.push_back(Expr::product(std::move(fs)));
      }
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Power: {
      const Expr& b = n.kids[0];
      return Expr::product({Expr::number(static_cast<double>(n.exponent)),
                            Expr::pow(b, n.exponent - 1), deriv(b, var)});
    }
    case ExprKind::Sin:
      return Expr::product({Expr::cos(n.kids[0]), deriv(n.kids[0], var)});
    case ExprKind::Cos:
      return Expr::product({Expr::number(-1.0), Expr::sin(n.kids[0]), deriv(n.kids[0], var)});
    case ExprKind::Exp:
      return Expr::product({e, deriv(n.kids[0], var)});
    case ExprKind::Log:
      return Expr::product({deriv(n.kids[0], var), Expr::pow(n.kids[0], -1)});
    case ExprKind::Sqrt:
      return Expr::product({Expr::number(0.5), deriv(n.kids[0], var), Expr::pow(e, -1)});
  }
  throw Error("deriv: unreachable");
}

}  // namespace

Expr deriv(const Expr& e, int var, int order) {
  Expr r = e;
  for (int i = 0; i < order; ++i) r = simplify(deriv(r, var));
  return r;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void domain_fail(const Expr& e, std::span<const double> p, const char* why) {
  std::ostringstream os;
  os << "domain error (" << why << ") in subexpression '" << to_string(e) << "' at point (";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  throw DomainError(os.str());
}

double eval_node(const Expr& e, std::span<const double> p,
                 std::unordered_map<const ExprNode*, double>* memo) {
  if (memo) {
    auto it = memo->find(e.raw());
    if (it != memo->end()) return it->second;
  }
  const ExprNode& n = e.node();
  double v = 0.0;
  switch (n.kind) {
    case ExprKind::Number: v = n.number; break;
    case ExprKind::Var:
      if (n.var < 0 || static_cast<std::size_t>(n.var) >= p.size())
        throw Error("eval: point dimension does not match chart");
      v = p[static_cast<std::size_t>(n.var)];
      break;
    case ExprKind::Sum:
      for (const Expr& k : n.kids) v += eval_node(k, p, memo);
      break;
    case ExprKind::Product:
      v = 1.0;
      for (const Expr& k : n.kids) v *= eval_node(k, p, memo);
      break;
    case ExprKind::Power: {
      double b = eval_node(n.kids[0], p, memo);
      if (b == 0.0 && n.exponent < 0) domain_fail(e, p, "division by zero");
      v = std::pow(b, static_cast<double>(n.exponent));
      break;
    }
    case ExprKind::Sin: v = std::sin(eval_node(n.kids[0], p, memo)); break;
    case ExprKind::Cos: v = std::cos(eval_node(n.kids[0], p, memo)); break;
    case ExprKind::Exp: v = std::exp(eval_node(n.kids[0], p, memo)); break;
    case ExprKind::Log: {
      double b = eval_node(n.kids[0], p, memo);
      if (b <= 0.0) domain_fail(e, p, "log of non-positive value");
      v = std::log(b);
      break;
    }
    case ExprKind::Sqrt: {
      double b = eval_node(n.kids[0], p, memo);
      if (b < 0.0) domain_fail(e, p, "sqrt of negative value");
      v = std::sqrt(b);
      break;
    }
  }
  if (!std::isfinite(v)) domain_fail(e, p, "non-finite value");
  if (memo) memo->emplace(e.raw(), v);
  return v;
}

}  // namespace

double eval(const Expr& e, std::span<const double> p) { return eval_node(e, p, nullptr); }

double eval(const Expr& e, EvalCache& cache) {
  return eval_node(e, cache.point(), &cache.memo());
}

// ---------------------------------------------------------------------------
// Simplification
// ---------------------------------------------------------------------------

namespace {

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// splits a canonical product into (coefficient, remaining factors)
std::pair<double, Expr> split_coefficient(const Expr& e) {
  if (e.is_number()) return {e.number_value(), Expr::number(1.0)};
  if (e.kind() == ExprKind::Product && e.node().kids[0].is_number()) {
    std::vector<Expr> rest(e.node().kids.begin() + 1, e.node().kids.end());
    return {e.node().kids[0].number_value(), Expr::product(std::move(rest))};
  }
  return {1.0, e};
}

struct SimplifyCache {
  std::unordered_map<const ExprNode*, std::pair<Expr, Expr>> map;  // owner, result
};

thread_local SimplifyCache g_simplify;

Expr simplify_impl(const Expr& e);

}  // namespace

Expr simplify(const Expr& e) {
  const ExprNode& n = e.node();
  if (n.kind == ExprKind::Number || n.kind == ExprKind::Var) return e;
  auto it = g_simplify.map.find(e.raw());
  if (it != g_simplify.map.end()) return it->second.second;
  Expr s = simplify_impl(e);
  if (g_simplify.map.size() > (1u << 21)) g_simplify.map.clear();
  g_simplify.map.emplace(e.raw(), std::make_pair(e, s));
  // a simplified tree is its own fixed point for lookup purposes
  g_simplify.map.emplace(s.raw(), std::make_pair(s, s));
  return s;
}

namespace {

Expr simplify_impl(const Expr& e) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprKind::Number:
    case ExprKind::Var:
      return e;
    case ExprKind::Sum: {
      std::map<Expr, double, ExprLess> terms;
      double c = 0.0;
      for (const Expr& kid : n.kids) {
        Expr s = simplify(kid);
        if (s.is_number()) { c += s.number_value(); continue; }
        auto [coeff, key] = split_coefficient(s);
        if (key.is_number()) { c += coeff * key.number_value(); continue; }
        terms[key] += coeff;
      }
      std::vector<Expr> out;
      if (c != 0.0) out.push_back(Expr::number(c));
      for (const auto& [key, coeff] : terms) {
        if (coeff == 0.0) continue;
        out.push_back(Expr::product({Expr::number(coeff), key}));
      }
      return Expr::sum(std::move(out));
    }
    case ExprKind::Product: {
      std::map<Expr, int, ExprLess> bases;
      double c = 1.0;
      auto absorb_factor = [&](const Expr& f) {
        if (f.is_number()) { c *= f.number_value(); return; }
        if (f.kind() == ExprKind::Power) {
          bases[f.node().kids[0]] += f.node().exponent;
        } else {
          bases[f] += 1;
        }
      };
      for (const Expr& kid : n.kids) {
        Expr s = simplify(kid);
        if (s.kind() == ExprKind::Product) {
          for (const Expr& f : s.node().kids) absorb_factor(f);
        } else {
          absorb_factor(s);
        }
      }
      if (c == 0.0) return Expr::number(0.0);
      // negative exponents go last so printing as a quotient round-trips
      std::vector<Expr> out;
      out.push_back(Expr::number(c));
      for (const auto& [base, k] : bases)
        if (k > 0) out.push_back(Expr::pow(base, k));
      for (const auto& [base, k] : bases)
        if (k < 0) out.push_back(Expr::pow(base, k));
      return Expr::product(std::move(out));
    }
    case ExprKind::Power:
      return Expr::pow(simplify(n.kids[0]), n.exponent);
    case ExprKind::Sin: return Expr::sin(simplify(n.kids[0]));
    case ExprKind::Cos: return Expr::cos(simplify(n.kids[0]));
    case ExprKind::Exp: return Expr::exp(simplify(n.kids[0]));
    case ExprKind::Log: return Expr::log(simplify(n.kids[0]));
    case ExprKind::Sqrt: return Expr::sqrt(simplify(n.kids[0]));
  }
  throw Error("simplify: unreachable");
}

}  // namespace

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

struct Printer {
  const Chart* chart;  // nullptr -> generic labels

  std::string var_name(int idx) const {
    if (chart) return chart->name(idx);
    return "u" + std::to_string(idx);
  }

  // Precedence levels: 0 sum, 1 product, 2 power, 3 atom.
  std::string print(const Expr& e, int parent_prec) const {
    const ExprNode& n = e.node();
    switch (n.kind) {
      case ExprKind::Number: {
        double v = n.number;
        if (v < 0.0) {
          std::string s = "-" + format_double(-v);
          return parent_prec > 0 ? "(" + s + ")" : s;
        }
        return format_double(v);
      }
      case ExprKind::Var:
        return var_name(n.var);
      case ExprKind::Sum: {
        std::string s;
        bool first = true;
        for (const Expr& kid : n.kids) {
          auto [coeff, rest] = split_coefficient(kid);
          bool negative = coeff < 0.0;
          Expr mag = negative ? Expr::product({Expr::number(-coeff), rest}) : kid;
          if (first) {
            s += negative ? "-" + print(mag, 1) : print(mag, 1);
            first = false;
          } else {
            s += negative ? " - " + print(mag, 1) : " + " + print(mag, 1);
          }
        }
        return parent_prec > 0 ? "(" + s + ")" : s;
      }
      case ExprKind::Product: {
        std::vector<Expr> num, den;
        double coeff = 1.0;
        for (const Expr& kid : n.kids) {
          if (kid.is_number()) { coeff *= kid.number_value(); continue; }
          if (kid.kind() == ExprKind::Power && kid.node().exponent < 0) {
            den.push_back(Expr::pow(kid.node().kids[0], -kid.node().exponent));
          } else {
            num.push_back(kid);
          }
        }
        bool negative = coeff < 0.0;
        double mag = negative ? -coeff : coeff;
        std::string s;
        bool have_num = false;
        if (mag != 1.0 || num.empty()) {
          s += format_double(mag);
          have_num = true;
        }
        for (const Expr& f : num) {
          if (have_num) s += "*";
          s += print(f, 2);
          have_num = true;
        }
        if (!den.empty()) {
          s += "/";
          if (den.size() == 1) {
            s += print(den[0], 2);
          } else {
            std::string d;
            for (std::size_t i = 0; i < den.size(); ++i) {
              if (i) d += "*";
              d += print(den[i], 2);
            }
            s += "(" + d + ")";
          }
        }
        if (negative) s = "-" + s;
        return (parent_prec > 1 || (negative && parent_prec > 0)) ? "(" + s + ")" : s;
      }
      case ExprKind::Power: {
        // negative exponents only occur standalone; print as a quotient
        if (n.exponent < 0) {
          std::string s = "1/" + print(Expr::pow(n.kids[0], -n.exponent), 2);
          return parent_prec > 1 ? "(" + s + ")" : s;
        }
        std::string s = print(n.kids[0], 3) + "^" + std::to_string(n.exponent);
        return parent_prec > 2 ? "(" + s + ")" : s;
      }
      case ExprKind::Sin: return "sin(" + print(n.kids[0], 0) + ")";
      case ExprKind::Cos: return "cos(" + print(n.kids[0], 0) + ")";
      case ExprKind::Exp: return "exp(" + print(n.kids[0], 0) + ")";
      case ExprKind::Log: return "ln(" + print(n.kids[0], 0) + ")";
      case ExprKind::Sqrt: return "sqrt(" + print(n.kids[0], 0) + ")";
    }
    return "?";
  }
};

}  // namespace

std::string to_string(const Expr& e, const Chart& chart) {
  return Printer{&chart}.print(e, 0);
}

std::string to_string(const Expr& e) { return Printer{nullptr}.print(e, 0); }

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  std::string_view src;
  std::size_t pos = 0;
  const Chart* chart;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw SyntaxError(std::string("expected '") + c + "'", pos);
  }

  Expr parse_expression() {
    std::vector<Expr> terms;
    terms.push_back(parse_term());
    for (;;) {
      if (accept('+')) terms.push_back(parse_term());
      else if (accept('-')) terms.push_back(-parse_term());
      else break;
    }
    return Expr::sum(std::move(terms));
  }

  Expr parse_term() {
    std::vector<Expr> factors;
    factors.push_back(parse_factor());
    for (;;) {
      if (accept('*')) factors.push_back(parse_factor());
      else if (accept('/')) factors.push_back(Expr::pow(parse_factor(), -1));
      else break;
    }
    return Expr::product(std::move(factors));
  }

  Expr parse_factor() {
    bool negate = accept('-');
    Expr b = parse_base();
    if (accept('^')) b = Expr::pow(b, parse_integer());
    return negate ? -b : b;
  }

  int parse_integer() {
    skip_ws();
    bool neg = accept('-');
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos == start) throw SyntaxError("expected integer exponent", pos);
    int value = 0;
    auto res = std::from_chars(src.data() + start, src.data() + pos, value);
    if (res.ec != std::errc{}) throw SyntaxError("bad integer exponent", start);
    return neg ? -value : value;
  }

  Expr parse_base() {
    skip_ws();
    if (pos >= src.size()) throw SyntaxError("unexpected end of input", pos);
    char c = src[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (c == '(') {
      ++pos;
      Expr e = parse_expression();
      expect(')');
      return e;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
  }

  Expr parse_number() {
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
      ++pos;
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      } else {
        pos = mark;  // the 'e' belongs to something else
      }
    }
    double value = 0.0;
    auto res = std::from_chars(src.data() + start, src.data() + pos, value);
    if (res.ec != std::errc{} || res.ptr != src.data() + pos)
      throw SyntaxError("bad numeric literal", start);
    return Expr::number(value);
  }

  Expr parse_ident() {
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string name(src.substr(start, pos - start));
    skip_ws();
    bool call = pos < src.size() && src[pos] == '(';
    if (call) {
      Expr (*fn)(const Expr&) = nullptr;
      if (name == "sin") fn = &Expr::sin;
      else if (name == "cos") fn = &Expr::cos;
      else if (name == "exp") fn = &Expr::exp;
      else if (name == "ln") fn = &Expr::log;
      else if (name == "sqrt") fn = &Expr::sqrt;
      if (fn) {
        ++pos;
        Expr arg = parse_expression();
        expect(')');
        return fn(arg);
      }
    }
    if (auto idx = chart->index_of(name)) return Expr::variable(*idx);
    throw UnknownIdentifierError(name, start);
  }
};

}  // namespace

Expr parse_expr(std::string_view source, const Chart& chart) {
  Parser p{source, 0, &chart};
  Expr e = p.parse_expression();
  if (!p.at_end())
    throw SyntaxError("trailing input", p.pos);
  return e;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle
// ---------------------------------------------------------------------------

double central_difference(const Expr& e, int var, const Point& p, double h) {
  Point hi = p, lo = p;
  hi[static_cast<std::size_t>(var)] += h;
  lo[static_cast<std::size_t>(var)] -= h;
  return (eval(e, hi) - eval(e, lo)) / (2.0 * h);
}

double fd_residual(const Expr& e, int var, const Point& p, double h) {
  if (h <= 0.0) throw Error("fd_residual: step must be positive");
  return std::abs(central_difference(e, var, p, h) - eval(deriv(e, var), p));
}

}  // namespace akgrav
