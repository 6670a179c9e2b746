#pragma once

#include "grauert/holo.hpp"
#include "grauert/quadrature.hpp"
#include "grauert/spectral.hpp"

namespace grauert {

struct TubeSpec {
  GroupSpec group;
  double epsilon = 0.0;
  YGrid ball;  // quadrature of |Y| < epsilon
};

// degree: certified polynomial exactness of the ball quadrature
TubeSpec make_tube(const GroupSpec&, double epsilon, int degree);

// A band-limited holomorphic function on the tube, held by its boundary
// Peter-Weyl data.
struct HoloFunction {
  FourierCoefficients coeffs;
  double epsilon = 0.0;
};

// coefficientwise damping e^{-eps sqrt(lambda)}; the extension evaluates on
// the tube through the holomorphically continued representations
HoloFunction poisson_transform(const FourierCoefficients& f, const TubeSpec&);
FourierCoefficients restrict_boundary(const HoloFunction&);
cplx tube_evaluate(const HoloFunction&, const TubePoint&);

// weight w_eps(k) = integral of e^{-2 k.Y} over the ball; closed form for
// n = 1, ball quadrature for n >= 2
double tube_weight(const TubeSpec&, const std::vector<int>& k);

// torus backend; reduces to sum_k u_hat conj(v_hat) w_eps(k) by orthogonality
cplx hl2_inner(const HoloFunction&, const HoloFunction&, const TubeSpec&);
double hl2_norm(const HoloFunction&, const TubeSpec&);
// complexified Bessel multiplier (1+lambda)^{s/2} followed by the HL2 norm
double hh_norm(const HoloFunction&, double s, const TubeSpec&);

// extension diagram defect: top path restrict o A_tilde o poisson against
// bottom path A o restrict o poisson, max relative L2 over the tests; tests
// are normalized in H^s through the Bessel scale
double diagram_defect(const SpectralOperator& A, double s, const TubeSpec&,
                      const std::vector<FourierCoefficients>& tests);
double diagram_defect(const HoloSymbol& p, double s, const TubeSpec&, const GridPtr& grid,
                      const std::vector<FourierCoefficients>& tests);

// hh_norm(poisson(e_k), s) / sobolev_norm(e_k, s - (n+1)/4) extremes over the
// dual truncation (torus)
std::pair<double, double> hh_equivalence_constants(const TubeSpec&, const std::vector<Irrep>& dual,
                                                   double s);

struct HalfWaveResult {
  cplx value{0.0, 0.0};
  std::vector<double> deltas;  // partial-sum increments on the doubling ladder
  double growth = 0.0;         // last delta ratio
  bool diverged = false;
};

// partial sums of sum_k e^{ik.x - eps|k|} at complex x = base + i imag with a
// doubling-cutoff divergence detector (torus, n = 1)
HalfWaveResult half_wave_kernel(const TubePoint& xz, const TubeSpec&, double cutoff);

}  // namespace grauert
