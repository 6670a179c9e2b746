#include "grauert/tube.hpp"

#include <algorithm>
#include <cmath>

namespace grauert {

namespace {

void check_torus(const TubeSpec& spec, const char* what) {
  require(spec.group.kind == GroupKind::torus, errc::unsupported, what);
}

// seeded rejection sampler used by the setup cross-check of the ball weights
struct BallSampler {
  std::uint64_t state;
  explicit BallSampler(std::uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}
  double uniform() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return double(z >> 11) * 0x1.0p-53;
  }
  RVec draw(int dim, double radius) {
    while (true) {
      RVec y(dim);
      for (int j = 0; j < dim; ++j) y[j] = radius * (2.0 * uniform() - 1.0);
      if (y.norm() < radius) return y;
    }
  }
};

double quad_exp_weight(const YGrid& ball, const RVec& kv) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ball.nodes.size(); ++i)
    acc += ball.weights[Eigen::Index(i)] * std::exp(-2.0 * kv.dot(ball.nodes[i]));
  return acc;
}

}  // namespace

TubeSpec make_tube(const GroupSpec& g, double epsilon, int degree) {
  require(epsilon > 0.0, errc::invalid_argument, "tube radius must be positive");
  TubeSpec spec;
  spec.group = g;
  spec.epsilon = epsilon;
  spec.ball = ball_quadrature(g.lie_dim(), epsilon, degree);
  if (g.kind == GroupKind::torus && g.n >= 2) {
    // Monte Carlo cross-check of the exponential weights at setup
    BallSampler mc(12345);
    RVec kv = RVec::Zero(g.n);
    kv[0] = 1.0;
    const int m = 20000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += std::exp(-2.0 * kv.dot(mc.draw(g.n, epsilon)));
    std::vector<int> p(std::size_t(g.n), 0);
    const double vol = ball_monomial_integral(g.n, epsilon, p);
    const double mc_value = vol * acc / m;
    const double quad_value = quad_exp_weight(spec.ball, kv);
    require(std::abs(mc_value - quad_value) <= 0.05 * std::abs(quad_value), errc::certificate,
            "ball quadrature disagrees with the Monte Carlo cross-check");
  }
  return spec;
}

HoloFunction poisson_transform(const FourierCoefficients& f, const TubeSpec& spec) {
  HoloFunction u;
  u.epsilon = spec.epsilon;
  u.coeffs = f;
  for (std::size_t i = 0; i < f.dual.size(); ++i)
    u.coeffs.blocks[i] *= std::exp(-spec.epsilon * std::sqrt(f.dual[i].eigenvalue));
  return u;
}

FourierCoefficients restrict_boundary(const HoloFunction& u) { return u.coeffs; }

cplx tube_evaluate(const HoloFunction& u, const TubePoint& z) {
  require(z.imag.norm() < u.epsilon, errc::out_of_tube, "evaluation point outside the tube");
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < u.coeffs.dual.size(); ++i)
    acc += double(u.coeffs.dual[i].dim) *
           (irrep_eval_tube(u.coeffs.dual[i], z) * u.coeffs.blocks[i]).trace();
  return acc;
}

double tube_weight(const TubeSpec& spec, const std::vector<int>& k) {
  check_torus(spec, "tube weights need the flat Jacobian of the torus backend");
  require(int(k.size()) == spec.group.n, errc::invalid_argument, "label dimension mismatch");
  if (spec.group.n == 1) {
    const double kk = double(k[0]);
    if (kk == 0.0) return 2.0 * spec.epsilon;
    return std::sinh(2.0 * kk * spec.epsilon) / kk;
  }
  RVec kv(spec.group.n);
  for (int j = 0; j < spec.group.n; ++j) kv[j] = double(k[std::size_t(j)]);
  return quad_exp_weight(spec.ball, kv);
}

cplx hl2_inner(const HoloFunction& u, const HoloFunction& v, const TubeSpec& spec) {
  check_torus(spec, "HL2 needs the flat Jacobian of the torus backend");
  require(u.coeffs.dual.size() == v.coeffs.dual.size(), errc::invalid_argument, "dual mismatch");
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < u.coeffs.dual.size(); ++i) {
    require(u.coeffs.dual[i] == v.coeffs.dual[i], errc::invalid_argument, "dual mismatch");
    acc += u.coeffs.blocks[i](0, 0) * std::conj(v.coeffs.blocks[i](0, 0)) *
           tube_weight(spec, u.coeffs.dual[i].label);
  }
  return acc;
}

double hl2_norm(const HoloFunction& u, const TubeSpec& spec) {
  return std::sqrt(std::abs(hl2_inner(u, u, spec)));
}

double hh_norm(const HoloFunction& u, double s, const TubeSpec& spec) {
  HoloFunction w = u;
  for (std::size_t i = 0; i < w.coeffs.dual.size(); ++i)
    w.coeffs.blocks[i] *= std::pow(1.0 + w.coeffs.dual[i].eigenvalue, 0.5 * s);
  return hl2_norm(w, spec);
}

namespace {

FourierCoefficients normalize_h_s(const FourierCoefficients& f, double s) {
  FourierCoefficients out = f;
  for (std::size_t i = 0; i < out.dual.size(); ++i)
    out.blocks[i] *= std::pow(1.0 + out.dual[i].eigenvalue, -0.5 * s);
  return out;
}

double rel_defect(const FourierCoefficients& top, const FourierCoefficients& bottom) {
  FourierCoefficients diff = coeff_add(top, coeff_scale(bottom, -1.0));
  const double scale = std::max({coeff_norm(top), coeff_norm(bottom), 1e-300});
  return coeff_norm(diff) / scale;
}

}  // namespace

double diagram_defect(const SpectralOperator& A, double s, const TubeSpec& spec,
                      const std::vector<FourierCoefficients>& tests) {
  double worst = 0.0;
  for (const auto& raw : tests) {
    FourierCoefficients f = normalize_h_s(raw, s);
    HoloFunction pf = poisson_transform(f, spec);
    // top: conjugated operator through the transform, then restriction
    FourierCoefficients top = restrict_boundary(pf);
    for (std::size_t i = 0; i < top.dual.size(); ++i)
      top.blocks[i] *= std::exp(spec.epsilon * std::sqrt(top.dual[i].eigenvalue));
    top = spectral_apply(A, top);
    for (std::size_t i = 0; i < top.dual.size(); ++i)
      top.blocks[i] *= std::exp(-spec.epsilon * std::sqrt(top.dual[i].eigenvalue));
    // bottom: restriction first, then the operator on the group
    FourierCoefficients bottom = spectral_apply(A, restrict_boundary(pf));
    worst = std::max(worst, rel_defect(top, bottom));
  }
  return worst;
}

double diagram_defect(const HoloSymbol& p, double s, const TubeSpec& spec, const GridPtr& grid,
                      const std::vector<FourierCoefficients>& tests) {
  double worst = 0.0;
  const RVec y0 = RVec::Zero(spec.group.lie_dim());
  for (const auto& raw : tests) {
    FourierCoefficients f = normalize_h_s(raw, s);
    HoloFunction pf = poisson_transform(f, spec);
    FourierCoefficients g = restrict_boundary(pf);
    // top: holomorphic application on the tube, restricted to the boundary
    GridFunction top_vals;
    top_vals.grid = grid;
    top_vals.values = CVec::Zero(Eigen::Index(grid->nodes.size()));
    for (std::size_t j = 0; j < grid->nodes.size(); ++j)
      top_vals.values[Eigen::Index(j)] = holo_apply(p, g, TubePoint{grid->nodes[j], y0}, grid);
    FourierCoefficients top = fourier_forward(top_vals, g.dual);
    // bottom: grid quantization on the group
    Symbol p0 = p.sample(y0, grid, g.dual);
    FourierCoefficients bottom = fourier_forward(quantize_apply(p0, fourier_inverse(g, grid)),
                                                 g.dual);
    worst = std::max(worst, rel_defect(top, bottom));
  }
  return worst;
}

std::pair<double, double> hh_equivalence_constants(const TubeSpec& spec,
                                                   const std::vector<Irrep>& dual, double s) {
  check_torus(spec, "norm equivalence certificate needs the torus backend");
  const double shift = 0.25 * (spec.group.n + 1.0);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < dual.size(); ++i) {
    FourierCoefficients e = coeff_zero(dual);
    e.blocks[i](0, 0) = 1.0;
    const double num = hh_norm(poisson_transform(e, spec), s, spec);
    const double den = sobolev_norm(e, s - shift);
    const double r = num / den;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

HalfWaveResult half_wave_kernel(const TubePoint& xz, const TubeSpec& spec, double cutoff) {
  check_torus(spec, "half-wave ladder implemented on the one-dimensional torus");
  require(spec.group.n == 1, errc::unsupported,
          "half-wave ladder implemented on the one-dimensional torus");
  const double re = xz.base.angles[0];
  const double im = xz.imag[0];
  const double eps = spec.epsilon;
  const int k0 = std::max(2, int(cutoff));
  const int stages = 7;

  HalfWaveResult res;
  auto term = [&](long long k) -> cplx {
    const double mag = -double(k) * im - eps * std::abs(double(k));
    if (mag > 600.0) return cplx(std::numeric_limits<double>::infinity(), 0.0);
    return std::exp(cplx(mag, double(k) * re));
  };
  cplx sum = term(0);
  long long prev = 0;
  for (int s = 0; s < stages; ++s) {
    const long long K = (long long)(k0) << s;
    cplx delta(0.0, 0.0);
    bool overflow = false;
    for (long long k = prev + 1; k <= K; ++k) {
      cplx a = term(k), b = term(-k);
      if (!std::isfinite(a.real()) || !std::isfinite(b.real())) {
        overflow = true;
        break;
      }
      delta += a + b;
    }
    if (overflow) {
      res.deltas.push_back(std::numeric_limits<double>::infinity());
      res.diverged = true;
      break;
    }
    sum += delta;
    res.deltas.push_back(std::abs(delta));
    prev = K;
    if (std::abs(delta) > 1e12) {
      res.diverged = true;
      break;
    }
  }
  res.value = sum;
  const std::size_t m = res.deltas.size();
  if (m >= 3) {
    const double d0 = res.deltas[m - 3], d1 = res.deltas[m - 2], d2 = res.deltas[m - 1];
    if (d2 > d1 && d1 > d0) res.diverged = true;
    res.growth = d2 / std::max(d1, 1e-300);
  } else if (m >= 2) {
    res.growth = res.deltas[m - 1] / std::max(res.deltas[m - 2], 1e-300);
  }
  return res;
}

}  // namespace grauert
