#pragma once

#include "grauert/fourier.hpp"

namespace grauert {

// Dual-side difference multi-index: an ordered multiset of entry picks (i, j)
// of the embedding representation (torus: diagonal entries of diag(e^{ix_j});
// su2: entries of the fundamental 2x2 representation).
using DualIndex = std::vector<std::pair<int, int>>;

DualIndex diag_index(const std::vector<int>& per_axis);

// A matrix-valued field over grid nodes x retained dual. The certified mask
// marks irreps whose values are unpolluted by dual truncation; operations
// that couple spatial frequencies to dual shifts shrink it.
struct Symbol {
  GroupSpec group;
  GridPtr grid;
  std::vector<Irrep> dual;
  std::vector<std::vector<Mat>> blocks;  // [node][irrep]
  std::vector<std::uint8_t> certified;   // per irrep; empty = all certified
  double order_hint = 0.0;

  bool is_certified(std::size_t i) const { return certified.empty() || certified[i] != 0; }
  std::size_t node_count() const { return blocks.size(); }
};

Symbol make_symbol(const GridPtr&, const std::vector<Irrep>&, double order_hint);
Symbol constant_symbol(const GridPtr&, const std::vector<Irrep>&, cplx value, double order_hint);

Symbol symbol_add(const Symbol&, const Symbol&);
Symbol symbol_sub(const Symbol&, const Symbol&);
Symbol symbol_scale(const Symbol&, cplx);
// per-(node, irrep) matrix product
Symbol pointwise_product(const Symbol&, const Symbol&);
// max spectral norm over nodes and certified irreps
double symbol_sup_norm(const Symbol&);

// Op(p)u by the defining trace sum; u must be band-limited within p.dual.
GridFunction quantize_apply(const Symbol&, const GridFunction&);

// Exact symbol product: Op(p) Op(q) = Op(p o q), computed from the defining
// double sum. Output certified where the dual truncation retains every
// x-frequency shift of q.
Symbol compose_exact(const Symbol& p, const Symbol& q);
// Exact adjoint symbol: Op(p)^* = Op(p_adj).
Symbol adjoint_exact(const Symbol& p);

// Difference operators on the dual, by multiplication of the inverse-
// transformed kernel with (rho(x^{-1}) - I)^alpha. The output dual is
// restricted to the labels whose shifted data is retained.
Symbol delta_xi(const Symbol&, const DualIndex& alpha);

// Left-invariant derivatives X^beta in the spatial variable, spectrally.
Symbol derivative_x(const Symbol&, const std::vector<int>& beta);

// sup over nodes and certified interior duals of
//   bracket^{|alpha| - d} * ||delta^alpha_xi X^beta_x p||.
double symbol_seminorm(const Symbol&, double d, const DualIndex& alpha,
                       const std::vector<int>& beta);

// sup-norm defect of the difference-operator product rule on x-independent
// symbols; identically ~0 up to quadrature error.
double leibniz_defect(const Symbol& a, const Symbol& b, int i, int j);

// Finite expansion sum_{|alpha| < N} (1/alpha!) Delta^alpha_k p . D^(alpha)_x q
// with falling-factorial spatial derivatives (torus only).
Symbol asymptotic_compose(const Symbol& p, const Symbol& q, int N);

// Spatial bandwidth of the symbol: torus max |m_j|, su2 max 2l. Measured from
// the sampled data with a 1e-12 relative mass threshold.
int x_band(const Symbol&);

// Trigonometric interpolation of the sampled symbol at an off-grid point
// (torus backend).
Mat symbol_value_at(const Symbol&, const RVec& x, std::size_t xi_index);

}  // namespace grauert
