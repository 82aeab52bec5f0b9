#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bilindblad/expr.hpp"
#include "bilindblad/poisson.hpp"

namespace bilindblad::sym {

struct UnsupportedChartError : ExprError {
  using ExprError::ExprError;
};

/// Odd-dimensional chart carrying a contact one-form, its Reeb field and the
/// induced Jacobi pair (Lambda, E). The bracket below uses (Lambda, E); for
/// the standard chart E = -R, which makes {1,f} = -R(f).
class ContactChart {
 public:
  ContactChart(std::vector<std::string> coordinates,
               std::vector<std::string> parameters = {});

  /// (q,p,z) with alpha = dz - p dq, R = d/dz, E = -R and
  /// Lambda = d/dp ^ (d/dq + p d/dz).
  static ContactChart standard(const std::string& q = "q",
                               const std::string& p = "p",
                               const std::string& z = "z");

  std::size_t dim() const { return coords_.size(); }
  const std::vector<std::uint32_t>& coords() const { return coords_; }
  const std::string& coord_name(std::size_t i) const;

  std::vector<Expr> alpha;            // one-form coefficients
  std::vector<Expr> reeb;             // Reeb field components
  std::vector<Expr> jacobi_field;     // E of the Jacobi pair
  std::vector<std::vector<Expr>> lambda;  // full antisymmetric matrix

  bool is_standard = false;

  /// alpha(R) == 1 and iota_R d(alpha) == 0, checked symbolically.
  ZeroTest validate(std::uint64_t seed = 0x5eed) const;

  void check_expression(const Expr& e) const;

  Expr directional(const std::vector<Expr>& field, const Expr& f) const;

 private:
  std::vector<std::uint32_t> coords_;
  std::set<std::uint32_t> params_;
};

/// Lambda(df,dg) + f E(g) - g E(f).
Expr jacobi_bracket(const ContactChart& chart, const Expr& f, const Expr& g);

/// Standard chart only: (-h_p, h_q + p h_z, h - p h_p).
std::vector<Expr> contact_vector_field(const ContactChart& chart,
                                       const Expr& h);

bool dissipated_quantity_check(const ContactChart& chart, const Expr& h,
                               const Expr& I, std::uint64_t seed = 0x5eed);

struct NondegeneracyReport {
  Expr coefficient;                  // single coefficient of alpha ^ d(alpha)
  bool nonzero_at_all_samples = false;
  std::optional<Rat> constant;       // set when the coefficient is constant
};

/// Dimension-3 charts only.
NondegeneracyReport contact_nondegeneracy(
    const ContactChart& chart, const std::vector<std::vector<double>>& samples);

/// r*f in the chart extended by the radial coordinate (or -r*f with
/// `negative_convention`).
Expr homogeneous_lift(const Expr& f, const std::string& radial_name = "r",
                      bool negative_convention = false);

/// w with sum_i delta_i d_i(f) == w*f, when such a rational exists.
std::optional<Rat> homogeneity_degree(const std::vector<Expr>& delta,
                                      const std::vector<std::uint32_t>& coords,
                                      const Expr& f,
                                      std::uint64_t seed = 0x5eed);

/// Substitution followed by simplification.
Expr restrict_expr(const Expr& f, const std::map<std::string, Expr>& bindings);

/// Numerical rank of the Jacobian of fs, maximized over admissible samples.
int rank_of_differentials(const std::vector<Expr>& fs,
                          const std::vector<std::uint32_t>& coords,
                          const std::vector<std::vector<double>>& samples,
                          double tol = 1e-10);

/// Poisson structure of the symplectization (q,p,z,r) with theta = r*alpha,
/// normalized so that restriction of {r f, r g} to r=1 reproduces
/// jacobi_bracket on the standard chart.
PoissonStructure symplectization_structure(const ContactChart& chart,
                                           const std::string& radial_name = "r");

}  // namespace bilindblad::sym
