#pragma once

#include <set>
#include <string>
#include <vector>

#include "bilindblad/expr.hpp"

namespace bilindblad::sym {

struct InputError : ExprError {
  using ExprError::ExprError;
};

/// Antisymmetric bracket matrix over an ordered coordinate chart. Components
/// are stored upper-triangular; symbols outside coordinates+parameters are
/// rejected by the operations.
class PoissonStructure {
 public:
  PoissonStructure(std::vector<std::string> coordinates,
                   std::vector<std::string> parameters = {});

  std::size_t dim() const { return coords_.size(); }
  const std::vector<std::uint32_t>& coords() const { return coords_; }
  const std::set<std::uint32_t>& parameters() const { return params_; }
  const std::string& coord_name(std::size_t i) const;

  void set_component(std::size_t i, std::size_t j, Expr value);
  Expr component(std::size_t i, std::size_t j) const;  // antisymmetric

  void add_parameter(const std::string& name);
  bool same_chart(const PoissonStructure& other) const;

  /// Throws InputError naming the first symbol of e outside the chart.
  void check_expression(const Expr& e) const;

 private:
  std::vector<std::uint32_t> coords_;
  std::set<std::uint32_t> params_;
  std::vector<Expr> upper_;  // row-major strict upper triangle
  std::size_t index(std::size_t i, std::size_t j) const;
};

Expr poisson_bracket(const PoissonStructure& P, const Expr& f, const Expr& g);

Expr jacobiator(const PoissonStructure& P, const Expr& f, const Expr& g,
                const Expr& h);

/// Jacobi identity on all coordinate triples, identically in coordinates and
/// parameters.
ZeroTest verify_jacobi(const PoissonStructure& P, std::uint64_t seed = 0x5eed);

enum class PencilMode { Difference, Convex };

/// `difference`: P1 - lambda*P0; `convex`: (1-lambda)*P0 + lambda*P1, with
/// lambda adjoined as a formal parameter.
PoissonStructure build_pencil(const PoissonStructure& P0,
                              const PoissonStructure& P1, PencilMode mode,
                              const std::string& lambda_name = "lambda");

std::vector<Expr> hamiltonian_vector_field(const PoissonStructure& P,
                                           const Expr& H);

struct BiHamiltonianResult {
  bool holds = false;
  std::vector<Expr> field0;    // P0^# dH0
  std::vector<Expr> field1;    // P1^# dH1
  std::vector<Expr> residual;  // field0 - field1
};

/// Checks P0^# dH0 = P1^# dH1 componentwise (each structure paired with the
/// Hamiltonian generating the common vector field through it).
BiHamiltonianResult bihamiltonian_check(const PoissonStructure& P0,
                                        const Expr& H0,
                                        const PoissonStructure& P1,
                                        const Expr& H1);

}  // namespace bilindblad::sym
