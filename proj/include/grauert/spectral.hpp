#pragma once

#include <functional>

#include "grauert/fourier.hpp"

namespace grauert {

// An operator acting blockwise on the truncated eigenbasis:
// u_hat(xi) -> action(xi) u_hat(xi).
struct SpectralOperator {
  std::vector<Irrep> dual;
  std::vector<Mat> action;
};

SpectralOperator multiplier(const std::vector<Irrep>& dual, const std::function<cplx(double)>& f);
SpectralOperator laplacian_operator(const std::vector<Irrep>& dual);          // f = lambda
SpectralOperator bessel_multiplier(const std::vector<Irrep>& dual, double s);  // (1+lambda)^{s/2}
SpectralOperator poisson_multiplier(const std::vector<Irrep>& dual, double eps);  // e^{-eps sqrt(lambda)}
// 1/lambda off the kernel, 0 on it
SpectralOperator laplacian_parametrix(const std::vector<Irrep>& dual);

FourierCoefficients spectral_apply(const SpectralOperator&, const FourierCoefficients&);
SpectralOperator spectral_compose(const SpectralOperator&, const SpectralOperator&);
SpectralOperator spectral_sub(const SpectralOperator&, const SpectralOperator&);
// conjugation by the right translation R_g: action -> xi(g) action xi(g)^*
SpectralOperator translate_conjugate(const SpectralOperator&, const GroupPoint& g);

// all eigenvalues of the (Hermitian) blocks, validated nonnegative
std::vector<double> spectrum(const SpectralOperator&);

struct PowerResult {
  SpectralOperator op;
  // max deviation from the direct eigenvalue functional calculus
  double reported_defect = 0.0;
};

// A^z by keyhole contour quadrature around the spectrum with aperture pi/4,
// the zero eigenvalue annihilated through the A^k factor (k >= 1).
PowerResult complex_power_contour(const SpectralOperator& A, cplx z, int k, double R, int Q);

// e^{-t A^z} by sector contour quadrature plus the small-circle term carrying
// the kernel eigenprojection.
PowerResult exp_power_contour(const SpectralOperator& A, double t, cplx z, double R, int Q);

// max over tests of ||(AB - BA) u|| / ||u||
double commutator_norm(const SpectralOperator& A, const SpectralOperator& B,
                       const std::vector<FourierCoefficients>& tests);

}  // namespace grauert
