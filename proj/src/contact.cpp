#include "bilindblad/contact.hpp"

#include <algorithm>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace bilindblad::sym {

ContactChart::ContactChart(std::vector<std::string> coordinates,
                           std::vector<std::string> parameters) {
  if (coordinates.size() % 2 == 0)
    throw InputError("contact chart needs odd dimension");
  for (const auto& n : coordinates) coords_.push_back(Symbols::id(n));
  for (const auto& n : parameters) params_.insert(Symbols::id(n));
  alpha.assign(dim(), Expr::zero());
  reeb.assign(dim(), Expr::zero());
  jacobi_field.assign(dim(), Expr::zero());
  lambda.assign(dim(), std::vector<Expr>(dim(), Expr::zero()));
}

const std::string& ContactChart::coord_name(std::size_t i) const {
  return Symbols::name(coords_.at(i));
}

ContactChart ContactChart::standard(const std::string& q, const std::string& p,
                                    const std::string& z) {
  ContactChart c({q, p, z});
  Expr pe = Expr::symbol(p);
  Expr one = Expr::constant(1);
  // alpha = dz - p dq
  c.alpha[0] = -pe;
  c.alpha[2] = one;
  // R = d/dz, E = -R
  c.reeb[2] = one;
  c.jacobi_field[2] = Expr::constant(-1);
  // Lambda = d/dp ^ (d/dq + p d/dz): components in (q,p,z) order.
  c.lambda[1][0] = one;
  c.lambda[0][1] = -one;
  c.lambda[1][2] = pe;
  c.lambda[2][1] = -pe;
  c.is_standard = true;
  return c;
}

void ContactChart::check_expression(const Expr& e) const {
  for (auto id : e.symbols()) {
    if (std::find(coords_.begin(), coords_.end(), id) != coords_.end())
      continue;
    if (params_.count(id)) continue;
    throw InputError("unknown coordinate '" + Symbols::name(id) + "'");
  }
}

Expr ContactChart::directional(const std::vector<Expr>& field,
                               const Expr& f) const {
  Expr out;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (field[i].is_structurally_zero()) continue;
    out += field[i] * f.derivative(coords_[i]);
  }
  return out;
}

ZeroTest ContactChart::validate(std::uint64_t seed) const {
  // alpha(R) - 1 == 0
  Expr pairing = Expr::constant(-1);
  for (std::size_t i = 0; i < dim(); ++i) pairing += alpha[i] * reeb[i];
  ZeroTest zt = pairing.zero_test(seed);
  if (!zt.is_zero()) return zt;

  // (iota_R d alpha)_j = sum_i R^i (d_i alpha_j - d_j alpha_i) == 0
  ZeroTest worst = zt;
  for (std::size_t j = 0; j < dim(); ++j) {
    Expr comp;
    for (std::size_t i = 0; i < dim(); ++i) {
      comp += reeb[i] * (alpha[j].derivative(coords_[i]) -
                         alpha[i].derivative(coords_[j]));
    }
    ZeroTest z = comp.zero_test(seed);
    if (!z.is_zero()) return z;
    if (z.kind == Zero::ProbabilisticZero) worst = z;
  }
  return worst;
}

Expr jacobi_bracket(const ContactChart& chart, const Expr& f, const Expr& g) {
  chart.check_expression(f);
  chart.check_expression(g);
  std::vector<Expr> df(chart.dim()), dg(chart.dim());
  for (std::size_t i = 0; i < chart.dim(); ++i) {
    df[i] = f.derivative(chart.coords()[i]);
    dg[i] = g.derivative(chart.coords()[i]);
  }
  Expr out;
  for (std::size_t i = 0; i < chart.dim(); ++i) {
    for (std::size_t j = i + 1; j < chart.dim(); ++j) {
      if (chart.lambda[i][j].is_structurally_zero()) continue;
      out += chart.lambda[i][j] * (df[i] * dg[j] - df[j] * dg[i]);
    }
  }
  out += f * chart.directional(chart.jacobi_field, g);
  out -= g * chart.directional(chart.jacobi_field, f);
  return out;
}

std::vector<Expr> contact_vector_field(const ContactChart& chart,
                                       const Expr& h) {
  if (!chart.is_standard)
    throw UnsupportedChartError(
        "contact vector fields are only available on the standard chart");
  chart.check_expression(h);
  Expr hq = h.derivative(chart.coords()[0]);
  Expr hp = h.derivative(chart.coords()[1]);
  Expr hz = h.derivative(chart.coords()[2]);
  Expr p = Expr::symbol(chart.coords()[1]);
  return {-hp, hq + p * hz, h - p * hp};
}

bool dissipated_quantity_check(const ContactChart& chart, const Expr& h,
                               const Expr& I, std::uint64_t seed) {
  return jacobi_bracket(chart, I, h).is_zero(seed);
}

NondegeneracyReport contact_nondegeneracy(
    const ContactChart& chart,
    const std::vector<std::vector<double>>& samples) {
  if (chart.dim() != 3)
    throw UnsupportedChartError("nondegeneracy check needs dimension 3");
  auto d = [&](std::size_t i, std::size_t j) {
    return chart.alpha[j].derivative(chart.coords()[i]) -
           chart.alpha[i].derivative(chart.coords()[j]);
  };
  NondegeneracyReport rep;
  rep.coefficient = chart.alpha[0] * d(1, 2) - chart.alpha[1] * d(0, 2) +
                    chart.alpha[2] * d(0, 1);
  rep.constant = rep.coefficient.as_constant();
  rep.nonzero_at_all_samples = !samples.empty() || rep.constant.has_value();
  if (rep.constant.has_value() && *rep.constant == 0)
    rep.nonzero_at_all_samples = false;
  for (const auto& s : samples) {
    std::map<std::uint32_t, double> point;
    for (std::size_t i = 0; i < chart.dim(); ++i)
      point[chart.coords()[i]] = s.at(i);
    double v = rep.coefficient.evaluate(point);
    if (std::abs(v) <= 1e-12) {
      rep.nonzero_at_all_samples = false;
      break;
    }
  }
  return rep;
}

Expr homogeneous_lift(const Expr& f, const std::string& radial_name,
                      bool negative_convention) {
  Expr r = Expr::symbol(radial_name);
  return negative_convention ? -(r * f) : r * f;
}

std::optional<Rat> homogeneity_degree(const std::vector<Expr>& delta,
                                      const std::vector<std::uint32_t>& coords,
                                      const Expr& f, std::uint64_t seed) {
  if (delta.size() != coords.size())
    throw InputError("field/chart dimension mismatch");
  Expr g;
  for (std::size_t i = 0; i < coords.size(); ++i)
    g += delta[i] * f.derivative(coords[i]);
  if (f.is_structurally_zero()) return Rat(0);

  // Match the coefficient of f's first normal-form key inside g.
  const Term& lead = f.terms().front();
  Rat w = 0;
  for (const auto& t : g.terms()) {
    Term a = t, b = lead;
    a.coeff = 1;
    b.coeff = 1;
    Expr ka = Expr::from_terms({a}), kb = Expr::from_terms({b});
    if (ka == kb) {
      w = t.coeff / lead.coeff;
      break;
    }
  }
  Expr residual = g - Expr::constant(w) * f;
  if (residual.zero_test(seed).is_zero()) return w;
  return std::nullopt;
}

Expr restrict_expr(const Expr& f, const std::map<std::string, Expr>& bindings) {
  std::map<std::uint32_t, Expr> by_id;
  for (const auto& [name, value] : bindings)
    by_id.emplace(Symbols::id(name), value);
  return f.substitute(by_id);
}

int rank_of_differentials(const std::vector<Expr>& fs,
                          const std::vector<std::uint32_t>& coords,
                          const std::vector<std::vector<double>>& samples,
                          double tol) {
  if (samples.empty()) throw InputError("rank check needs sample points");
  std::vector<std::vector<Expr>> grads(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (auto c : coords) grads[i].push_back(fs[i].derivative(c));

  int best = 0;
  int admissible = 0;
  for (const auto& s : samples) {
    std::map<std::uint32_t, double> point;
    for (std::size_t i = 0; i < coords.size(); ++i) point[coords[i]] = s.at(i);
    Eigen::MatrixXd J(static_cast<Eigen::Index>(fs.size()),
                      static_cast<Eigen::Index>(coords.size()));
    bool ok = true;
    for (std::size_t i = 0; i < fs.size() && ok; ++i) {
      for (std::size_t j = 0; j < coords.size() && ok; ++j) {
        try {
          J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              grads[i][j].evaluate(point);
        } catch (const DomainError&) {
          ok = false;
        }
      }
    }
    if (!ok) continue;
    ++admissible;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    int rank = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
      if (svd.singularValues()(k) > tol) ++rank;
    best = std::max(best, rank);
  }
  if (admissible == 0)
    throw DomainError("no sample point lies in the functions' domain");
  return best;
}

PoissonStructure symplectization_structure(const ContactChart& chart,
                                           const std::string& radial_name) {
  if (!chart.is_standard)
    throw UnsupportedChartError(
        "symplectization is provided for the standard chart");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < chart.dim(); ++i)
    names.push_back(chart.coord_name(i));
  names.push_back(radial_name);
  PoissonStructure P(names);
  Expr r = Expr::symbol(radial_name);
  Expr p = Expr::symbol(chart.coords()[1]);
  Expr rinv = r.pow(-1);
  // theta = r(dz - p dq): brackets {q,p} = -1/r, {p,z} = p/r, {z,r} = 1,
  // oriented so that {r f, r g}|_{r=1} equals the chart's Jacobi bracket.
  P.set_component(0, 1, -rinv);
  P.set_component(1, 2, p * rinv);
  P.set_component(2, 3, Expr::constant(1));
  return P;
}

}  // namespace bilindblad::sym
