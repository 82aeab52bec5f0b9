#include "bilindblad/config.hpp"

#include <set>

#include <json.hpp>

#include "bilindblad/parser.hpp"

namespace bilindblad::config {

namespace {

using json = nlohmann::ordered_json;
using models::ModelFixture;
using sym::Expr;

// --------------------------------------------------------------------------
// Writing

json matrix_to_json(const la::CMatrix& m) {
  json data = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return json{{"dim", m.dim()}, {"data", data}};
}

json generator_to_json(const gksl::GKSLGenerator& g) {
  json lbs = json::array();
  for (const auto& L : g.lindblads) lbs.push_back(matrix_to_json(L));
  return json{{"hbar", g.hbar},
              {"H", matrix_to_json(g.H)},
              {"lindblads", lbs}};
}

json components_to_json(const sym::PoissonStructure& P) {
  json comps = json::array();
  for (std::size_t i = 0; i < P.dim(); ++i)
    for (std::size_t j = i + 1; j < P.dim(); ++j) {
      Expr c = P.component(i, j);
      if (!c.is_structurally_zero()) comps.push_back({i, j, c.str()});
    }
  return comps;
}

std::string phase_symbol_to_string(const moyal::PhaseSymbol& s) {
  if (s.coeffs().empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : s.coeffs()) {
    if (c.im != 0)
      throw ConfigError("phase-space symbols serialize as real polynomials");
    mpq_class a = c.re;
    bool neg = a < 0;
    if (neg) a = -a;
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    std::string coeff = a.get_str();
    bool wrote = false;
    if (coeff != "1" || (k[0] == 0 && k[1] == 0 && k[2] == 0)) {
      out += coeff;
      wrote = true;
    }
    auto append = [&](const char* name, int e) {
      if (e == 0) return;
      if (wrote) out += "*";
      out += name;
      if (e != 1) out += "^" + std::to_string(e);
      wrote = true;
    };
    append("x", k[0]);
    append("xi", k[1]);
    append("hbar", k[2]);
  }
  return out;
}

// --------------------------------------------------------------------------
// Reading

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

Expr parse_with(const std::string& text, const sym::ParseContext& ctx,
                const std::string& path) {
  try {
    return sym::parse_expr(text, ctx);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

la::CMatrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("data"))
    fail(path, "expected {dim, data}");
  reject_unknown(j, {"dim", "data"}, path);
  std::size_t n = j["dim"].get<std::size_t>();
  const auto& data = j["data"];
  if (!data.is_array() || data.size() != n * n)
    fail(path + ".data", "expected " + std::to_string(n * n) +
                             " [re, im] pairs");
  la::CMatrix m(n);
  for (std::size_t k = 0; k < n * n; ++k) {
    const auto& cell = data[k];
    if (!cell.is_array() || cell.size() != 2)
      fail(path + ".data", "entries are [re, im] pairs");
    m(k / n, k % n) = la::cplx(cell[0].get<double>(), cell[1].get<double>());
  }
  return m;
}

gksl::GKSLGenerator generator_from_json(const json& j,
                                        const std::string& path) {
  if (!j.is_object()) fail(path, "expected a generator object");
  reject_unknown(j, {"hbar", "H", "lindblads"}, path);
  if (!j.contains("hbar") || !j.contains("H"))
    fail(path, "needs hbar and H");
  la::CMatrix H = matrix_from_json(j["H"], path + ".H");
  std::vector<la::CMatrix> Ls;
  if (j.contains("lindblads")) {
    std::size_t idx = 0;
    for (const auto& lj : j["lindblads"])
      Ls.push_back(matrix_from_json(
          lj, path + ".lindblads[" + std::to_string(idx++) + "]"));
  }
  try {
    return gksl::GKSLGenerator(j["hbar"].get<double>(), std::move(H),
                               std::move(Ls));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

moyal::PhaseSymbol phase_symbol_from_string(const std::string& text,
                                            const std::string& path) {
  sym::ParseContext ctx;
  ctx.allowed = {"x", "xi", "hbar"};
  Expr e = parse_with(text, ctx, path);
  moyal::PhaseSymbol out;
  auto xid = sym::Symbols::id("x");
  auto xiid = sym::Symbols::id("xi");
  auto hid = sym::Symbols::id("hbar");
  for (const auto& t : e.terms()) {
    if (t.exp_arg || !t.sqrts.empty())
      fail(path, "phase-space symbols are polynomial");
    int xe = 0, xie = 0, he = 0;
    for (const auto& vp : t.mono) {
      if (vp.exp < 0) fail(path, "negative exponent");
      if (vp.var == xid)
        xe = vp.exp;
      else if (vp.var == xiid)
        xie = vp.exp;
      else if (vp.var == hid)
        he = vp.exp;
      else
        fail(path, "unknown symbol in polynomial");
    }
    out += moyal::PhaseSymbol::monomial(xe, xie, he, {t.coeff, 0});
  }
  return out;
}

}  // namespace

std::string export_model(const ModelFixture& m) {
  json root;
  root["name"] = m.name;
  root["anchor"] = m.anchor;
  root["suites"] = m.suites;

  const auto& cl = m.classical;
  if (cl.p0) {
    json chart;
    json coords = json::array();
    for (std::size_t i = 0; i < cl.p0->dim(); ++i)
      coords.push_back(cl.p0->coord_name(i));
    chart["coordinates"] = coords;
    json params = json::array();
    for (auto id : cl.p0->parameters())
      params.push_back(sym::Symbols::name(id));
    chart["parameters"] = params;
    root["chart"] = chart;

    json poisson;
    poisson["p0"] = components_to_json(*cl.p0);
    if (cl.p1) poisson["p1"] = components_to_json(*cl.p1);
    root["poisson"] = poisson;
  }

  if (cl.chart) {
    json contact;
    json coords = json::array();
    for (std::size_t i = 0; i < cl.chart->dim(); ++i)
      coords.push_back(cl.chart->coord_name(i));
    contact["coordinates"] = coords;
    contact["standard"] = cl.chart->is_standard;
    if (!cl.chart->is_standard) {
      json alpha = json::array(), reeb = json::array(),
           field = json::array();
      for (std::size_t i = 0; i < cl.chart->dim(); ++i) {
        alpha.push_back(cl.chart->alpha[i].str());
        reeb.push_back(cl.chart->reeb[i].str());
        field.push_back(cl.chart->jacobi_field[i].str());
      }
      contact["alpha"] = alpha;
      contact["reeb"] = reeb;
      contact["jacobi_field"] = field;
      json lam = json::array();
      for (std::size_t i = 0; i < cl.chart->dim(); ++i)
        for (std::size_t j = i + 1; j < cl.chart->dim(); ++j)
          if (!cl.chart->lambda[i][j].is_structurally_zero())
            lam.push_back({i, j, cl.chart->lambda[i][j].str()});
      contact["lambda"] = lam;
    }
    root["contact"] = contact;
  }

  if (!cl.functions.empty()) {
    json symbols;
    for (const auto& [name, f] : cl.functions) symbols[name] = f.str();
    root["symbols"] = symbols;
  }
  if (!cl.liouville.empty()) {
    json lv = json::array();
    for (const auto& c : cl.liouville) lv.push_back(c.str());
    root["liouville"] = lv;
  }
  if (!cl.restriction.empty()) {
    json rs;
    for (const auto& [name, e] : cl.restriction) rs[name] = e.str();
    root["restriction"] = rs;
  }

  if (m.quantum.g0) {
    json q;
    q["g0"] = generator_to_json(*m.quantum.g0);
    if (m.quantum.g1) q["g1"] = generator_to_json(*m.quantum.g1);
    json ints = json::array();
    for (const auto& I : m.quantum.integrals)
      ints.push_back(matrix_to_json(I));
    q["integrals"] = ints;
    root["quantum"] = q;
  }

  if (m.weyl) {
    json w;
    w["hamiltonian"] = phase_symbol_to_string(m.weyl->hamiltonian);
    w["observable"] = phase_symbol_to_string(m.weyl->observable);
    json lbs = json::array();
    for (const auto& [s, rate] : m.weyl->lindblads)
      lbs.push_back({phase_symbol_to_string(s), rate});
    w["lindblads"] = lbs;
    w["hbars"] = m.weyl->hbars;
    w["truncation"] = m.weyl->truncation;
    w["margin"] = m.weyl->margin;
    root["weyl"] = w;
  }

  if (!m.expected.empty()) root["expected"] = m.expected;
  if (!m.parameters.empty()) root["parameters"] = m.parameters;

  return root.dump(2) + "\n";
}

ModelFixture parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(e.what());
  }
  if (!root.is_object()) throw ConfigError("top level must be an object");
  reject_unknown(root,
                 {"name", "anchor", "suites", "chart", "poisson", "contact",
                  "symbols", "liouville", "restriction", "quantum", "weyl",
                  "expected", "parameters"},
                 "config");

  ModelFixture m;
  if (root.contains("name")) m.name = root["name"].get<std::string>();
  if (root.contains("anchor")) m.anchor = root["anchor"].get<std::string>();
  if (root.contains("suites"))
    m.suites = root["suites"].get<std::vector<std::string>>();

  sym::ParseContext open_ctx;  // populated with every declared name below

  std::vector<std::string> chart_coords, chart_params;
  if (root.contains("chart")) {
    const auto& cj = root["chart"];
    reject_unknown(cj, {"coordinates", "parameters"}, "chart");
    if (!cj.contains("coordinates")) fail("chart", "needs coordinates");
    chart_coords = cj["coordinates"].get<std::vector<std::string>>();
    if (cj.contains("parameters"))
      chart_params = cj["parameters"].get<std::vector<std::string>>();
    for (const auto& n : chart_coords) open_ctx.allowed.insert(n);
    for (const auto& n : chart_params) open_ctx.allowed.insert(n);
  }

  std::vector<std::string> contact_coords;
  if (root.contains("contact")) {
    const auto& cj = root["contact"];
    reject_unknown(cj,
                   {"coordinates", "standard", "alpha", "reeb",
                    "jacobi_field", "lambda"},
                   "contact");
    if (!cj.contains("coordinates")) fail("contact", "needs coordinates");
    contact_coords = cj["coordinates"].get<std::vector<std::string>>();
    for (const auto& n : contact_coords) open_ctx.allowed.insert(n);
  }
  open_ctx.allowed.insert("r");
  for (const auto& extra : {"lambda", "hbar", "gamma", "omega"})
    open_ctx.allowed.insert(extra);

  if (root.contains("poisson")) {
    if (chart_coords.empty()) fail("poisson", "requires a chart section");
    const auto& pj = root["poisson"];
    reject_unknown(pj, {"p0", "p1"}, "poisson");
    sym::ParseContext strict;
    for (const auto& n : chart_coords) strict.allowed.insert(n);
    for (const auto& n : chart_params) strict.allowed.insert(n);
    auto load = [&](const json& arr, const std::string& path) {
      sym::PoissonStructure P(chart_coords, chart_params);
      std::size_t idx = 0;
      for (const auto& entry : arr) {
        std::string epath = path + "[" + std::to_string(idx++) + "]";
        if (!entry.is_array() || entry.size() != 3)
          fail(epath, "expected [i, j, expr]");
        std::size_t i = entry[0].get<std::size_t>();
        std::size_t j = entry[1].get<std::size_t>();
        if (i >= P.dim() || j >= P.dim() || i == j)
          fail(epath, "invalid component pair (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
        Expr e = parse_with(entry[2].get<std::string>(), strict, epath);
        try {
          P.set_component(i, j, std::move(e));
        } catch (const std::exception& ex) {
          fail(epath, ex.what());
        }
      }
      return P;
    };
    if (pj.contains("p0")) m.classical.p0 = load(pj["p0"], "poisson.p0");
    if (pj.contains("p1")) m.classical.p1 = load(pj["p1"], "poisson.p1");
  }

  if (root.contains("contact")) {
    const auto& cj = root["contact"];
    bool standard = cj.contains("standard") && cj["standard"].get<bool>();
    if (standard) {
      if (contact_coords.size() != 3) fail("contact", "standard chart is 3d");
      m.classical.chart = sym::ContactChart::standard(
          contact_coords[0], contact_coords[1], contact_coords[2]);
    } else {
      sym::ContactChart chart(contact_coords);
      sym::ParseContext strict;
      for (const auto& n : contact_coords) strict.allowed.insert(n);
      auto load_vec = [&](const char* key, std::vector<Expr>& dst) {
        if (!cj.contains(key)) return;
        const auto& arr = cj[key];
        if (arr.size() != contact_coords.size())
          fail(std::string("contact.") + key, "component count mismatch");
        for (std::size_t i = 0; i < dst.size(); ++i)
          dst[i] = parse_with(arr[i].get<std::string>(), strict,
                              std::string("contact.") + key);
      };
      load_vec("alpha", chart.alpha);
      load_vec("reeb", chart.reeb);
      load_vec("jacobi_field", chart.jacobi_field);
      if (cj.contains("lambda")) {
        for (const auto& entry : cj["lambda"]) {
          if (!entry.is_array() || entry.size() != 3)
            fail("contact.lambda", "expected [i, j, expr]");
          std::size_t i = entry[0].get<std::size_t>();
          std::size_t j = entry[1].get<std::size_t>();
          if (i >= chart.dim() || j >= chart.dim() || i == j)
            fail("contact.lambda", "invalid component pair");
          Expr e = parse_with(entry[2].get<std::string>(), strict,
                              "contact.lambda");
          chart.lambda[i][j] = e;
          chart.lambda[j][i] = -e;
        }
      }
      m.classical.chart = std::move(chart);
    }
  }

  if (root.contains("symbols")) {
    for (const auto& [name, val] : root["symbols"].items())
      m.classical.functions[name] = parse_with(val.get<std::string>(),
                                               open_ctx, "symbols." + name);
  }
  if (root.contains("liouville")) {
    for (const auto& val : root["liouville"])
      m.classical.liouville.push_back(
          parse_with(val.get<std::string>(), open_ctx, "liouville"));
  }
  if (root.contains("restriction")) {
    for (const auto& [name, val] : root["restriction"].items())
      m.classical.restriction[name] = parse_with(val.get<std::string>(),
                                                 open_ctx,
                                                 "restriction." + name);
  }

  if (root.contains("quantum")) {
    const auto& qj = root["quantum"];
    reject_unknown(qj, {"g0", "g1", "integrals"}, "quantum");
    if (qj.contains("g0"))
      m.quantum.g0 = generator_from_json(qj["g0"], "quantum.g0");
    if (qj.contains("g1"))
      m.quantum.g1 = generator_from_json(qj["g1"], "quantum.g1");
    if (qj.contains("integrals")) {
      std::size_t idx = 0;
      for (const auto& ij : qj["integrals"])
        m.quantum.integrals.push_back(matrix_from_json(
            ij, "quantum.integrals[" + std::to_string(idx++) + "]"));
    }
  }

  if (root.contains("weyl")) {
    const auto& wj = root["weyl"];
    reject_unknown(wj,
                   {"hamiltonian", "observable", "lindblads", "hbars",
                    "truncation", "margin"},
                   "weyl");
    models::WeylData w;
    if (wj.contains("hamiltonian"))
      w.hamiltonian = phase_symbol_from_string(
          wj["hamiltonian"].get<std::string>(), "weyl.hamiltonian");
    if (wj.contains("observable"))
      w.observable = phase_symbol_from_string(
          wj["observable"].get<std::string>(), "weyl.observable");
    if (wj.contains("lindblads")) {
      for (const auto& entry : wj["lindblads"]) {
        if (!entry.is_array() || entry.size() != 2)
          fail("weyl.lindblads", "expected [symbol, rate]");
        w.lindblads.emplace_back(
            phase_symbol_from_string(entry[0].get<std::string>(),
                                     "weyl.lindblads"),
            entry[1].get<double>());
      }
    }
    if (wj.contains("hbars"))
      w.hbars = wj["hbars"].get<std::vector<double>>();
    if (wj.contains("truncation"))
      w.truncation = wj["truncation"].get<std::size_t>();
    if (wj.contains("margin")) w.margin = wj["margin"].get<std::size_t>();
    m.weyl = std::move(w);
  }

  if (root.contains("expected"))
    m.expected = root["expected"].get<std::map<std::string, double>>();
  if (root.contains("parameters"))
    m.parameters = root["parameters"].get<std::map<std::string, double>>();

  return m;
}

}  // namespace bilindblad::config
