#pragma once

#include <memory>

#include "grauert/symbol.hpp"

namespace grauert {

// Closed-form symbol descriptors. These are the reference samplers for
// holomorphic symbol families: every node evaluates at arbitrary Cartan pairs
// (x, Y), so the same expression backs real sampling, tube sampling, and the
// holomorphy checks.
class SymbolExpr;
using ExprPtr = std::shared_ptr<const SymbolExpr>;

class SymbolExpr {
 public:
  enum class Op { constant, coord, dual_poly, casimir_poly, mat_literal, sum, product, power };

  struct PolyTerm {
    cplx coeff;
    std::vector<int> powers;  // exponents of the torus label components
  };

  Op op = Op::constant;
  cplx value{0.0, 0.0};                // constant
  std::vector<int> mode;               // coord: torus m, or su2 {2l, row, col}
  std::vector<PolyTerm> poly;          // dual_poly
  std::vector<cplx> casimir;           // casimir_poly: sum_t c_t lambda^t
  std::vector<std::pair<std::vector<int>, Mat>> entries;  // mat_literal
  std::vector<ExprPtr> kids;           // sum / product / power (single child)
  double exponent = 1.0;               // power
};

ExprPtr expr_const(cplx v);
// torus: e^{i m.z}; su2: the (row, col) matrix coefficient of the 2l+1
// dimensional representation, both holomorphic on the full complexification
ExprPtr expr_coord(const std::vector<int>& m);
ExprPtr expr_coord_su2(int twol, int row, int col);
ExprPtr expr_dual_poly(const std::vector<SymbolExpr::PolyTerm>& terms);
ExprPtr expr_casimir(const std::vector<cplx>& coeffs);
ExprPtr expr_mat_literal(const std::vector<std::pair<std::vector<int>, Mat>>& entries);
ExprPtr expr_sum(const std::vector<ExprPtr>& kids);
ExprPtr expr_product(const std::vector<ExprPtr>& kids);
ExprPtr expr_power(const ExprPtr& base, double exponent);
// <xi>^d = (1 + lambda^2)^{d/2}
ExprPtr expr_bracket(double d);

bool expr_is_scalar(const ExprPtr&);
Mat expr_eval(const ExprPtr&, const GroupSpec&, const TubePoint&, const Irrep&);
Symbol symbol_from_expr(const ExprPtr&, const GridPtr&, const std::vector<Irrep>&,
                        double order_hint);

}  // namespace grauert
