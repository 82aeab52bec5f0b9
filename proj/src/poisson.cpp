#include "bilindblad/poisson.hpp"

#include <algorithm>

namespace bilindblad::sym {

PoissonStructure::PoissonStructure(std::vector<std::string> coordinates,
                                   std::vector<std::string> parameters) {
  coords_.reserve(coordinates.size());
  for (const auto& name : coordinates) coords_.push_back(Symbols::id(name));
  for (const auto& name : parameters) params_.insert(Symbols::id(name));
  upper_.resize(coords_.size() * coords_.size());
}

const std::string& PoissonStructure::coord_name(std::size_t i) const {
  return Symbols::name(coords_.at(i));
}

std::size_t PoissonStructure::index(std::size_t i, std::size_t j) const {
  return i * coords_.size() + j;
}

void PoissonStructure::set_component(std::size_t i, std::size_t j, Expr value) {
  if (i >= dim() || j >= dim() || i == j)
    throw InputError("invalid bracket component indices");
  check_expression(value);
  if (i < j) {
    upper_[index(i, j)] = std::move(value);
  } else {
    upper_[index(j, i)] = -value;
  }
}

Expr PoissonStructure::component(std::size_t i, std::size_t j) const {
  if (i == j) return Expr::zero();
  if (i < j) return upper_[index(i, j)];
  return -upper_[index(j, i)];
}

void PoissonStructure::add_parameter(const std::string& name) {
  params_.insert(Symbols::id(name));
}

bool PoissonStructure::same_chart(const PoissonStructure& other) const {
  return coords_ == other.coords_;
}

void PoissonStructure::check_expression(const Expr& e) const {
  for (auto id : e.symbols()) {
    if (std::find(coords_.begin(), coords_.end(), id) != coords_.end())
      continue;
    if (params_.count(id)) continue;
    throw InputError("unknown coordinate '" + Symbols::name(id) + "'");
  }
}

Expr poisson_bracket(const PoissonStructure& P, const Expr& f, const Expr& g) {
  P.check_expression(f);
  P.check_expression(g);
  std::vector<Expr> df(P.dim()), dg(P.dim());
  for (std::size_t i = 0; i < P.dim(); ++i) {
    df[i] = f.derivative(P.coords()[i]);
    dg[i] = g.derivative(P.coords()[i]);
  }
  Expr sum;
  for (std::size_t i = 0; i < P.dim(); ++i) {
    for (std::size_t j = i + 1; j < P.dim(); ++j) {
      Expr comp = P.component(i, j);
      if (comp.is_structurally_zero()) continue;
      sum += comp * (df[i] * dg[j] - df[j] * dg[i]);
    }
  }
  return sum;
}

Expr jacobiator(const PoissonStructure& P, const Expr& f, const Expr& g,
                const Expr& h) {
  return poisson_bracket(P, f, poisson_bracket(P, g, h)) +
         poisson_bracket(P, g, poisson_bracket(P, h, f)) +
         poisson_bracket(P, h, poisson_bracket(P, f, g));
}

ZeroTest verify_jacobi(const PoissonStructure& P, std::uint64_t seed) {
  ZeroTest worst{Zero::ExactZero, 0.0};
  for (std::size_t i = 0; i < P.dim(); ++i) {
    for (std::size_t j = i + 1; j < P.dim(); ++j) {
      for (std::size_t k = j + 1; k < P.dim(); ++k) {
        Expr jac = jacobiator(P, Expr::symbol(P.coords()[i]),
                              Expr::symbol(P.coords()[j]),
                              Expr::symbol(P.coords()[k]));
        ZeroTest zt = jac.zero_test(seed);
        if (!zt.is_zero()) return zt;
        if (zt.kind == Zero::ProbabilisticZero) worst = zt;
      }
    }
  }
  return worst;
}

PoissonStructure build_pencil(const PoissonStructure& P0,
                              const PoissonStructure& P1, PencilMode mode,
                              const std::string& lambda_name) {
  if (!P0.same_chart(P1))
    throw InputError("pencil legs live on different charts");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < P0.dim(); ++i) names.push_back(P0.coord_name(i));
  PoissonStructure out(names);
  for (auto id : P0.parameters()) out.add_parameter(Symbols::name(id));
  for (auto id : P1.parameters()) out.add_parameter(Symbols::name(id));
  out.add_parameter(lambda_name);
  Expr lam = Expr::symbol(lambda_name);
  Expr one = Expr::constant(1);
  for (std::size_t i = 0; i < P0.dim(); ++i) {
    for (std::size_t j = i + 1; j < P0.dim(); ++j) {
      Expr c0 = P0.component(i, j), c1 = P1.component(i, j);
      Expr c = mode == PencilMode::Difference ? c1 - lam * c0
                                              : (one - lam) * c0 + lam * c1;
      out.set_component(i, j, std::move(c));
    }
  }
  return out;
}

std::vector<Expr> hamiltonian_vector_field(const PoissonStructure& P,
                                           const Expr& H) {
  P.check_expression(H);
  std::vector<Expr> X(P.dim());
  for (std::size_t i = 0; i < P.dim(); ++i)
    X[i] = poisson_bracket(P, Expr::symbol(P.coords()[i]), H);
  return X;
}

BiHamiltonianResult bihamiltonian_check(const PoissonStructure& P0,
                                        const Expr& H0,
                                        const PoissonStructure& P1,
                                        const Expr& H1) {
  if (!P0.same_chart(P1)) throw InputError("charts differ");
  BiHamiltonianResult r;
  r.field0 = hamiltonian_vector_field(P0, H0);
  r.field1 = hamiltonian_vector_field(P1, H1);
  r.holds = true;
  r.residual.resize(P0.dim());
  for (std::size_t i = 0; i < P0.dim(); ++i) {
    r.residual[i] = r.field0[i] - r.field1[i];
    if (!r.residual[i].is_zero()) r.holds = false;
  }
  return r;
}

}  // namespace bilindblad::sym
