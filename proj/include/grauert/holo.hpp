#pragma once

#include <functional>

#include "grauert/expr.hpp"
#include "grauert/quadrature.hpp"
#include "grauert/symbol.hpp"

namespace grauert {

// A holomorphic symbol family {p_Y}. The sampler contract is the primary
// interface: given Y with |Y| <= epsilon it produces the member p_Y sampled on
// a grid and dual truncation of the caller's choice. eval_point, when set,
// evaluates p at arbitrary Cartan pairs and backs the holomorphy checks.
struct HoloSymbol {
  GroupSpec group;
  double epsilon = 0.0;
  double order = 0.0;
  std::function<Symbol(const RVec& Y, const GridPtr&, const std::vector<Irrep>&)> sample;
  std::function<Mat(const TubePoint&, const Irrep&)> eval_point;  // may be empty
};

HoloSymbol holo_from_expr(const ExprPtr&, const GroupSpec&, double epsilon, double order);
HoloSymbol holo_sum(const HoloSymbol&, const HoloSymbol&);
// wraps an x-independent sequence as a Y-constant family (labels outside the
// source dual evaluate to zero)
HoloSymbol holo_from_sequence(const Symbol& x_independent, double epsilon);

struct SeminormOrder {
  DualIndex alpha;
  std::vector<int> beta;
};

struct MembershipEntry {
  SeminormOrder order;
  double sup_base = 0.0;     // sup over the Y mesh at the base cutoff
  double sup_doubled = 0.0;  // same at the doubled cutoff
  double ratio = 0.0;
  bool stable = false;
};

struct MembershipReport {
  std::vector<MembershipEntry> entries;
  double holomorphy_defect = 0.0;
  bool holomorphy_checked = false;
  bool certified = false;
};

// Seminorm boundedness of the family over the Y mesh, certified by the
// two-cutoff ratio protocol, plus a Morera-type contour defect on sampled
// coordinate discs.
MembershipReport membership_check(const HoloSymbol& p, double d, const YGrid& ys,
                                  const std::vector<SeminormOrder>& orders, double cutoff,
                                  int grid_resolution);

struct EllipticityReport {
  bool elliptic = false;
  std::vector<std::vector<int>> exceptional;  // labels of the finite set F
  double bound = 0.0;        // sup <xi>^d ||p(z,xi)^{-1}|| off F, full truncation
  double bound_inner = 0.0;  // same restricted to bracket <= cutoff/2
  double ratio = 0.0;
  double singular_threshold = 1e-12;
  RVec worst_Y;
  int worst_node = -1;
  std::vector<int> worst_label;
};

EllipticityReport ellipticity_check(const HoloSymbol& p, double d, const YGrid& ys, double cutoff,
                                    int grid_resolution);

// q0 = (chi_F + (1 - chi_F) p)^{-1} blockwise.
HoloSymbol default_q0(const HoloSymbol& p, double d, const EllipticityReport&);

enum class ParametrixSide { left, right };

// Neumann-series parametrix sum_{j<N} q_j with q_j = r^{oj} o q0 (left) or
// q0 o r^{oj} (right), every product by the exact composition. Compositions
// run on an internally enlarged dual so the requested truncation stays
// certified.
HoloSymbol parametrix(const HoloSymbol& p, const HoloSymbol& q0, int N, ParametrixSide side,
                      double check_cutoff, int check_grid_resolution);

struct ResidualReport {
  double sup_base = 0.0;     // sup <xi>^N ||residual|| at the base cutoff
  double sup_doubled = 0.0;  // at the doubled cutoff
  double ratio = 0.0;
};

// Measures q o p - 1 (left) or p o q - 1 (right) at order -N across two
// cutoffs.
ResidualReport parametrix_residual(const HoloSymbol& p, const HoloSymbol& q, int N,
                                   ParametrixSide side, const YGrid& ys, double cutoff_lo,
                                   double cutoff_hi, int grid_resolution);

struct LeadingTermResult {
  HoloSymbol q;
  EllipticityReport report;
};

LeadingTermResult leading_term_parametrix(const Symbol& pk, const HoloSymbol& pkm1, int N,
                                          const YGrid& ys, double cutoff, int grid_resolution);

struct AsymptoticSumResult {
  HoloSymbol sum;
  std::vector<double> t;         // heat cutoff times per term
  std::vector<double> achieved;  // tail quantity reached by the selection
  std::vector<double> bound;     // 2^{-(j+1)} targets
};

// Heat-family asymptotic summation: sum_j p_j (1 - e^{-t_j lambda}) with t_j
// selected by bisection so each modified tail meets its dyadic bound on the
// sampled mesh.
AsymptoticSumResult asymptotic_sum(const std::vector<HoloSymbol>& terms, double epsilon,
                                   const YGrid& ys, double cutoff, int grid_resolution);

// Holomorphic application Op(p)u at z = exp(iY)x for band-limited u.
cplx holo_apply(const HoloSymbol& p, const FourierCoefficients& u, const TubePoint& z,
                const GridPtr& grid);

// Locate a grid node matching the group point, if any.
int find_node(const HaarGrid&, const GroupPoint&);

}  // namespace grauert
