#include "grauert/expr.hpp"

#include <cmath>

namespace grauert {

namespace {
const cplx kI(0.0, 1.0);

cplx eval_scalar(const ExprPtr& e, const GroupSpec& g, const TubePoint& z, const Irrep& xi);

Mat broadcast(cplx v, int d) { return v * Mat::Identity(d, d); }

cplx coord_value(const SymbolExpr& e, const GroupSpec& g, const TubePoint& z) {
  if (g.kind == GroupKind::torus) {
    require(int(e.mode.size()) == g.n, errc::invalid_argument, "coord mode dimension mismatch");
    cplx phase(0.0, 0.0);
    for (int j = 0; j < g.n; ++j)
      phase += double(e.mode[std::size_t(j)]) * cplx(z.base.angles[j], z.imag[j]);
    return std::exp(kI * phase);
  }
  require(e.mode.size() == 3, errc::invalid_argument, "su2 coord needs {2l, row, col}");
  const int twol = e.mode[0], row = e.mode[1], col = e.mode[2];
  require(row >= 0 && row <= twol && col >= 0 && col <= twol, errc::invalid_argument,
          "su2 coord entry out of range");
  Eigen::Vector3d y(z.imag[0], z.imag[1], z.imag[2]);
  return su2_wigner(twol, su2_exp_iy(y) * z.base.u)(row, col);
}

cplx eval_scalar(const ExprPtr& e, const GroupSpec& g, const TubePoint& z, const Irrep& xi) {
  switch (e->op) {
    case SymbolExpr::Op::constant:
      return e->value;
    case SymbolExpr::Op::coord:
      return coord_value(*e, g, z);
    case SymbolExpr::Op::dual_poly: {
      require(g.kind == GroupKind::torus, errc::unsupported,
              "dual polynomials in the label are torus-only; use casimir_poly");
      cplx acc(0.0, 0.0);
      for (const auto& t : e->poly) {
        require(int(t.powers.size()) == g.n, errc::invalid_argument, "poly term dimension");
        cplx prod = t.coeff;
        for (int j = 0; j < g.n; ++j)
          for (int q = 0; q < t.powers[std::size_t(j)]; ++q) prod *= double(xi.label[std::size_t(j)]);
        acc += prod;
      }
      return acc;
    }
    case SymbolExpr::Op::casimir_poly: {
      cplx acc(0.0, 0.0);
      double lp = 1.0;
      for (const auto& c : e->casimir) {
        acc += c * lp;
        lp *= xi.eigenvalue;
      }
      return acc;
    }
    case SymbolExpr::Op::sum: {
      cplx acc(0.0, 0.0);
      for (const auto& k : e->kids) acc += eval_scalar(k, g, z, xi);
      return acc;
    }
    case SymbolExpr::Op::product: {
      cplx acc(1.0, 0.0);
      for (const auto& k : e->kids) acc *= eval_scalar(k, g, z, xi);
      return acc;
    }
    case SymbolExpr::Op::power:
      return std::pow(eval_scalar(e->kids.at(0), g, z, xi), cplx(e->exponent, 0.0));
    case SymbolExpr::Op::mat_literal:
      fail(errc::invalid_argument, "matrix literal in a scalar context");
  }
  fail(errc::invalid_argument, "bad expression node");
}

}  // namespace

ExprPtr expr_const(cplx v) {
  auto e = std::make_shared<SymbolExpr>();
  e->op = SymbolExpr::Op::constant;
  e->value = v;
  return e;
}

ExprPtr expr_coord(const std::vector<int>& m) {
  auto e = std::make_shared<SymbolExpr>();
  e->op = SymbolExpr::Op::coord;
  e->mode = m;
  return e;
}

ExprPtr expr_coord_su2(int twol, int row, int col) { return expr_coord({twol, row, col}); }

ExprPtr expr_dual_poly(const std::vector<SymbolExpr::PolyTerm>& terms) {
  auto e = std::make_shared<SymbolExpr>();
  e->op = SymbolExpr::Op::dual_poly;
  e->poly = terms;
  return e;
}

ExprPtr expr_casimir(const std::vector<cplx>& coeffs) {
  auto e = std::make_shared<SymbolExpr>();
  e->op = SymbolExpr::Op::casimir_poly;
  e->casimir = coeffs;
  return e;
}

ExprPtr expr_mat_literal(const std::vector<std::pair<std::vector<int>, Mat>>& entries) {
  auto e = std::make_shared<SymbolExpr>();
  e->op = SymbolExpr::Op::mat_literal;
  e->entries = entries;
  return e;
}

ExprPtr expr_sum(const std::vector<ExprPtr>& kids) {
  auto e = std::make_shared<SymbolExpr>();
  e->op = SymbolExpr::Op::sum;
  e->kids = kids;
  return e;
}

ExprPtr expr_product(const std::vector<ExprPtr>& kids) {
  auto e = std::make_shared<SymbolExpr>();
  e->op = SymbolExpr::Op::product;
  e->kids = kids;
  return e;
}

ExprPtr expr_power(const ExprPtr& base, double exponent) {
  require(expr_is_scalar(base), errc::invalid_argument, "power needs a scalar-valued base");
  auto e = std::make_shared<SymbolExpr>();
  e->op = SymbolExpr::Op::power;
  e->kids = {base};
  e->exponent = exponent;
  return e;
}

ExprPtr expr_bracket(double d) {
  return expr_power(expr_casimir({cplx(1.0), cplx(0.0), cplx(1.0)}), 0.5 * d);
}

bool expr_is_scalar(const ExprPtr& e) {
  switch (e->op) {
    case SymbolExpr::Op::mat_literal:
      return false;
    case SymbolExpr::Op::sum:
    case SymbolExpr::Op::product:
      for (const auto& k : e->kids)
        if (!expr_is_scalar(k)) return false;
      return true;
    default:
      return true;
  }
}

Mat expr_eval(const ExprPtr& e, const GroupSpec& g, const TubePoint& z, const Irrep& xi) {
  const int d = xi.dim;
  switch (e->op) {
    case SymbolExpr::Op::mat_literal: {
      for (const auto& [label, m] : e->entries)
        if (label == xi.label) {
          require(m.rows() == d && m.cols() == d, errc::invalid_argument,
                  "matrix literal shape mismatch");
          return m;
        }
      return Mat::Zero(d, d);
    }
    case SymbolExpr::Op::sum: {
      Mat acc = Mat::Zero(d, d);
      for (const auto& k : e->kids) acc += expr_eval(k, g, z, xi);
      return acc;
    }
    case SymbolExpr::Op::product: {
      Mat acc = Mat::Identity(d, d);
      for (const auto& k : e->kids) acc = acc * expr_eval(k, g, z, xi);
      return acc;
    }
    default:
      return broadcast(eval_scalar(e, g, z, xi), d);
  }
}

Symbol symbol_from_expr(const ExprPtr& e, const GridPtr& grid, const std::vector<Irrep>& dual,
                        double order_hint) {
  Symbol p = make_symbol(grid, dual, order_hint);
  for (std::size_t j = 0; j < grid->nodes.size(); ++j) {
    TubePoint z;
    z.base = grid->nodes[j];
    z.imag = RVec::Zero(grid->group.lie_dim());
    for (std::size_t i = 0; i < dual.size(); ++i)
      p.blocks[j][i] = expr_eval(e, grid->group, z, dual[i]);
  }
  return p;
}

}  // namespace grauert
