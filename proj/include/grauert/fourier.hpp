#pragma once

#include "grauert/group.hpp"

namespace grauert {

// A truncated matrix-coefficient sequence: one d x d block per retained irrep.
struct FourierCoefficients {
  std::vector<Irrep> dual;
  std::vector<Mat> blocks;
};

struct GridFunction {
  GridPtr grid;
  CVec values;
};

FourierCoefficients coeff_zero(const std::vector<Irrep>& dual);
FourierCoefficients coeff_add(const FourierCoefficients&, const FourierCoefficients&);
FourierCoefficients coeff_scale(const FourierCoefficients&, cplx);

// Peter-Weyl transform: blocks[xi] = sum_j w_j u(x_j) xi(x_j)^*.
FourierCoefficients fourier_forward(const GridFunction&, const std::vector<Irrep>& dual);
// u(x) = sum_xi d_xi Tr(xi(x) a(xi)).
GridFunction fourier_inverse(const FourierCoefficients&, const GridPtr&);

// (sum d_xi (1 + lambda)^s Tr(a^* a))^{1/2} -- the H^s scale
double sobolev_norm(const FourierCoefficients&, double s);
// (sum d_xi <xi>^{2d} Tr(a^* a))^{1/2} with <xi> = (1 + lambda^2)^{1/2}
double sequence_norm(const FourierCoefficients&, double d);

cplx l2_inner(const GridFunction&, const GridFunction&);
double l2_norm(const GridFunction&);
cplx coeff_inner(const FourierCoefficients&, const FourierCoefficients&);
double coeff_norm(const FourierCoefficients&);

// Seeded band-limited test function with blocks scaled by bracket^{-decay}.
FourierCoefficients random_band_limited(const std::vector<Irrep>& dual, std::uint64_t seed,
                                        double decay);

}  // namespace grauert
