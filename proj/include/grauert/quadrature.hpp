#pragma once

#include <utility>
#include <vector>

#include "grauert/group.hpp"

namespace grauert {

// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<RVec, RVec> gauss_legendre(int n);

struct YGrid {
  std::vector<RVec> nodes;
  RVec weights;  // empty: sampling mesh only
  double radius = 0.0;
  bool has_weights() const { return weights.size() > 0; }
};

// Sampling mesh of the closed ball |Y| <= radius, always containing Y = 0.
// count controls the per-direction density.
YGrid ygrid_mesh(int dim, double radius, int count);

// Radial-angular Gauss product quadrature of the ball |Y| < radius, exact for
// polynomials of total degree <= degree. Certified at construction against
// closed-form monomial moments to 1e-10.
YGrid ball_quadrature(int dim, double radius, int degree);

// Closed-form integral of Y^powers over the ball of the given radius.
double ball_monomial_integral(int dim, double radius, const std::vector<int>& powers);

}  // namespace grauert
