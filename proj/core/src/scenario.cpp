#include "akgrav/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace akgrav {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("bad numeric value for " + what + ": '" + s + "'");
  }
}

struct RawScenario {
  std::map<std::string, std::string> top;
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::vector<std::string> section_order;
};

RawScenario parse_raw(std::string_view text, const std::string& origin) {
  RawScenario raw;
  std::string current;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw Error(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      current = trim(t.substr(1, t.size() - 2));
      if (!raw.sections.count(current)) raw.section_order.push_back(current);
      raw.sections[current];
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (current.empty())
      raw.top[key] = val;
    else
      raw.sections[current][key] = val;
  }
  return raw;
}

Chart parse_chart(const std::string& spec_str) {
  auto semi = spec_str.find(';');
  if (semi == std::string::npos)
    throw Error("chart needs the form 'h names ; v names', got '" + spec_str + "'");
  std::vector<std::string> h = split_ws(trim(spec_str.substr(0, semi)));
  std::vector<std::string> v = split_ws(trim(spec_str.substr(semi + 1)));
  return Chart(h, v);
}

// matrix entry keys carry 1-based global coordinate positions, e.g. g11, h34, N31
std::pair<int, int> entry_indices(const std::string& key, std::size_t prefix_len) {
  std::string digits = key.substr(prefix_len);
  if (digits.size() != 2 || !std::isdigit(static_cast<unsigned char>(digits[0])) ||
      !std::isdigit(static_cast<unsigned char>(digits[1])))
    throw Error("matrix entry key '" + key + "' needs two index digits");
  return {digits[0] - '0', digits[1] - '0'};
}

}  // namespace

Scenario parse_scenario_text(std::string_view text, const std::string& origin) {
  RawScenario raw = parse_raw(text, origin);
  Scenario scn;

  if (auto it = raw.top.find("name"); it != raw.top.end()) scn.name = it->second;
  if (scn.name.empty()) throw Error(origin + ": scenario needs a name");
  if (auto it = raw.top.find("chart"); it != raw.top.end())
    scn.chart = parse_chart(it->second);

  int n = scn.chart.n(), m = scn.chart.m();

  int sources = 0;
  if (raw.sections.count("source.generating_function")) ++sources;
  if (raw.sections.count("source.metric_blocks")) ++sources;
  if (raw.sections.count("source.full_metric")) ++sources;
  if (sources != 1)
    throw Error(origin + ": exactly one [source.*] section required, found " +
                std::to_string(sources));

  if (raw.sections.count("source.generating_function")) {
    scn.kind = SourceKind::GeneratingFunction;
    auto& sec = raw.sections["source.generating_function"];
    auto it = sec.find("L");
    if (it == sec.end()) throw Error(origin + ": [source.generating_function] needs L");
    scn.generating_function = parse_expr(it->second, scn.chart);
  } else if (raw.sections.count("source.metric_blocks")) {
    scn.kind = SourceKind::MetricBlocks;
    auto& sec = raw.sections["source.metric_blocks"];
    scn.g = ExprMatrix(n, n);
    scn.h = ExprMatrix(m, m);
    scn.N = ExprMatrix(m, n);
    for (const auto& [key, val] : sec) {
      Expr e = parse_expr(val, scn.chart);
      if (key.rfind("g", 0) == 0 && key.size() == 3) {
        auto [i, j] = entry_indices(key, 1);
        scn.g.at(i - 1, j - 1) = e;
        scn.g.at(j - 1, i - 1) = e;
      } else if (key.rfind("h", 0) == 0 && key.size() == 3) {
        auto [a, b] = entry_indices(key, 1);
        scn.h.at(a - 1 - n, b - 1 - n) = e;
        scn.h.at(b - 1 - n, a - 1 - n) = e;
      } else if (key.rfind("N", 0) == 0 && key.size() == 3) {
        auto [a, i] = entry_indices(key, 1);
        scn.N.at(a - 1 - n, i - 1) = e;
      } else {
        throw Error(origin + ": unknown metric block key '" + key + "'");
      }
    }
  } else {
    scn.kind = SourceKind::FullMetric;
    auto& sec = raw.sections["source.full_metric"];
    int d = scn.chart.dim();
    scn.full_metric = ExprMatrix(d, d);
    for (const auto& [key, val] : sec) {
      if (key.rfind("G", 0) != 0 || key.size() != 3)
        throw Error(origin + ": unknown full metric key '" + key + "'");
      auto [i, j] = entry_indices(key, 1);
      Expr e = parse_expr(val, scn.chart);
      scn.full_metric.at(i - 1, j - 1) = e;
      scn.full_metric.at(j - 1, i - 1) = e;
    }
  }

  // domain
  scn.domain.intervals.assign(static_cast<std::size_t>(scn.chart.dim()), {-1.0, 1.0});
  if (raw.sections.count("domain")) {
    for (const auto& [key, val] : raw.sections["domain"]) {
      if (key == "points") {
        scn.num_points = static_cast<int>(to_double(val, "points"));
        if (scn.num_points < 1) throw Error(origin + ": points must be >= 1");
        continue;
      }
      if (key == "seed") {
        scn.seed = static_cast<unsigned>(to_double(val, "seed"));
        continue;
      }
      auto idx = scn.chart.index_of(key);
      if (!idx) throw Error(origin + ": unknown domain coordinate '" + key + "'");
      auto parts = split_ws(val);
      if (parts.size() != 2) throw Error(origin + ": domain interval needs 'lo hi'");
      double lo = to_double(parts[0], key), hi = to_double(parts[1], key);
      if (!(lo < hi)) throw Error(origin + ": empty interval for " + key);
      scn.domain.intervals[static_cast<std::size_t>(*idx)] = {lo, hi};
    }
  }

  if (raw.sections.count("einstein")) {
    for (const auto& [key, val] : raw.sections["einstein"]) {
      if (key == "lambda") scn.lambda = to_double(val, "lambda");
      else if (key == "newton_g") scn.newton_g = to_double(val, "newton_g");
      else throw Error(origin + ": unknown [einstein] key '" + key + "'");
    }
  }

  if (raw.sections.count("stress")) {
    int d = scn.chart.dim();
    ExprMatrix T(d, d);
    for (const auto& [key, val] : raw.sections["stress"]) {
      if (key.rfind("T", 0) != 0 || key.size() != 3)
        throw Error(origin + ": unknown stress key '" + key + "'");
      auto [i, j] = entry_indices(key, 1);
      Expr e = parse_expr(val, scn.chart);
      T.at(i - 1, j - 1) = e;
      T.at(j - 1, i - 1) = e;
    }
    scn.stress = T;
  }

  if (raw.sections.count("tolerances")) {
    for (const auto& [key, val] : raw.sections["tolerances"])
      scn.tolerances[key] = to_double(val, "tolerance " + key);
  }

  if (raw.sections.count("expect")) {
    for (const auto& [key, val] : raw.sections["expect"]) {
      if (key == "vacuum_lc") scn.expect_vacuum_lc = val == "true" || val == "1";
      else if (key == "lc_scalar") scn.expect_lc_scalar = to_double(val, "lc_scalar");
      else if (key == "constant_blocks_linear_n")
        scn.constant_blocks_linear_n = val == "true" || val == "1";
      else throw Error(origin + ": unknown [expect] key '" + key + "'");
    }
  }

  return scn;
}

namespace {

const char* kEuclidean = R"(
name = euclidean
chart = x1 x2 ; y3 y4

[source.generating_function]
L = y3^2 + y4^2

[domain]
x1 = -1 1
x2 = -1 1
y3 = 0.2 1.8
y4 = 0.2 1.8
points = 50
seed = 1
)";

const char* kExpLagrange = R"(
name = exp-lagrange
chart = x1 x2 ; y3 y4

[source.generating_function]
L = exp(x1)*(y3^2 + y4^2)

[domain]
x1 = -0.7 0.7
x2 = -0.7 0.7
y3 = 0.2 1.6
y4 = 0.2 1.6
points = 50
seed = 1
)";

// mass M = 1; r box stays well outside the horizon
const char* kSchwarzschild = R"(
name = schwarzschild
chart = t r ; th ph

[source.metric_blocks]
g11 = -(1 - 2/r)
g22 = 1/(1 - 2/r)
h33 = r^2
h44 = r^2*sin(th)^2

[domain]
t = 0 1
r = 3 10
th = 0.4 2.7
ph = 0.2 6
points = 50
seed = 1

[expect]
vacuum_lc = true
)";

// round v-fiber of radius 2 over a flat base: LC scalar = 2/r0^2 = 0.5
const char* kSphereV = R"(
name = sphere-v
chart = x1 x2 ; th ph

[source.metric_blocks]
g11 = 1
g22 = 1
h33 = 4
h44 = 4*sin(th)^2

[domain]
x1 = -1 1
x2 = -1 1
th = 0.4 2.7
ph = 0.2 6
points = 50
seed = 1

[expect]
lc_scalar = 0.5
)";

const char* kConstCoeffLinear = R"(
name = constcoeff-linear
chart = x1 x2 ; y3 y4

[source.metric_blocks]
g11 = 1
g22 = 1
h33 = 1
h44 = 1
N31 = y4
N41 = -y3
N32 = y3
N42 = -y4

[domain]
x1 = -1 1
x2 = -1 1
y3 = 0.2 1.5
y4 = 0.2 1.5
points = 50
seed = 1

[expect]
constant_blocks_linear_n = true
)";

}  // namespace

std::vector<std::string> catalog_names() {
  return {"euclidean", "exp-lagrange", "schwarzschild", "sphere-v", "constcoeff-linear"};
}

Scenario catalog_scenario(const std::string& name) {
  const char* text = nullptr;
  if (name == "euclidean") text = kEuclidean;
  else if (name == "exp-lagrange") text = kExpLagrange;
  else if (name == "schwarzschild") text = kSchwarzschild;
  else if (name == "sphere-v") text = kSphereV;
  else if (name == "constcoeff-linear") text = kConstCoeffLinear;
  if (!text) throw Error("unknown catalog scenario '" + name + "'");
  return parse_scenario_text(text, "catalog:" + name);
}

bool is_catalog_ref(const std::string& s) { return s.rfind("catalog:", 0) == 0; }

Scenario load_scenario(const std::string& path_or_catalog) {
  if (is_catalog_ref(path_or_catalog))
    return catalog_scenario(path_or_catalog.substr(8));
  std::ifstream in(path_or_catalog);
  if (!in) throw Error("cannot open scenario file '" + path_or_catalog + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path_or_catalog);
}

ScenarioObjects realize(const Scenario& scn) {
  ScenarioObjects out;
  out.scenario = scn;
  switch (scn.kind) {
    case SourceKind::GeneratingFunction:
      out.dm = lagrange_dmetric(scn.generating_function, scn.chart);
      break;
    case SourceKind::MetricBlocks:
      out.dm.chart = scn.chart;
      out.dm.g = scn.g;
      out.dm.h = scn.h;
      out.dm.ncon = NConnection{scn.chart, scn.N};
      break;
    case SourceKind::FullMetric: {
      out.dm.chart = scn.chart;
      int n = scn.chart.n(), m = scn.chart.m();
      out.dm.ncon = extract_nconnection(scn.full_metric, scn.chart);
      out.dm.h = ExprMatrix(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) out.dm.h.at(a, b) = scn.full_metric.at(n + a, n + b);
      // g_ij = G_ij - N^a_i N^b_j h_ab
      out.dm.g = ExprMatrix(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          std::vector<Expr> terms{scn.full_metric.at(i, j)};
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
              terms.push_back(-(out.dm.ncon.N.at(a, i) * out.dm.ncon.N.at(b, j) *
                                out.dm.h.at(a, b)));
          out.dm.g.at(i, j) = simplify(Expr::sum(std::move(terms)));
        }
      break;
    }
  }
  out.points = halton_points(scn.domain, scn.num_points, scn.seed, scn.chart.n());
  check_nondegenerate(out.dm, out.points);
  return out;
}

}  // namespace akgrav
