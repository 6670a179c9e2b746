#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "grauert/tube.hpp"

using namespace grauert;

namespace {

const cplx I(0.0, 1.0);

FourierCoefficients unit_mode(const std::vector<Irrep>& dual, int k) {
  auto a = coeff_zero(dual);
  for (std::size_t i = 0; i < dual.size(); ++i)
    if (dual[i].label[0] == k) a.blocks[i](0, 0) = 1.0;
  return a;
}

// adaptive-ish reference integral of e^{-2kY} over (-eps, eps)
double weight_oracle(int k, double eps) {
  auto [x, w] = gauss_legendre(200);
  double acc = 0.0;
  for (int i = 0; i < 200; ++i) acc += eps * w[i] * std::exp(-2.0 * k * eps * x[i]);
  return acc;
}

ExprPtr k_poly1() {
  std::vector<SymbolExpr::PolyTerm> t = {{cplx(0.0, 1.0), {1}}};
  return expr_dual_poly(t);
}

}  // namespace

TEST_CASE("poisson transform and restriction") {
  auto g = torus_group(1);
  auto dual = enumerate_dual(g, 20.0);
  auto spec = make_tube(g, 0.2, 8);

  auto u3 = unit_mode(dual, 3);
  auto pu = poisson_transform(u3, spec);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    cplx expect = dual[i].label[0] == 3 ? cplx(std::exp(-0.6), 0.0) : cplx(0, 0);
    CHECK(std::abs(pu.coeffs.blocks[i](0, 0) - expect) < 1e-14);
  }

  // exact blockwise factorization through restriction
  auto f = random_band_limited(dual, 8, 2.0);
  auto rf = restrict_boundary(poisson_transform(f, spec));
  for (std::size_t i = 0; i < dual.size(); ++i) {
    cplx expect = f.blocks[i](0, 0) * std::exp(-spec.epsilon * std::sqrt(dual[i].eigenvalue));
    CHECK(rf.blocks[i](0, 0) == expect);  // same arithmetic path, bit for bit
  }

  // constants are unchanged
  auto c = unit_mode(dual, 0);
  CHECK(std::abs(poisson_transform(c, spec).coeffs.blocks[4](0, 0) -
                 c.blocks[4](0, 0)) < 1e-15);
}

TEST_CASE("tube evaluation") {
  auto g = torus_group(1);
  auto dual = enumerate_dual(g, 20.0);
  auto grid = haar_grid(g, 32);
  HoloFunction u{unit_mode(dual, 2), 0.5};

  TubePoint z{grid->nodes[3], RVec::Constant(1, 0.1)};
  cplx expect = std::exp(I * (2.0 * grid->nodes[3].angles[0])) * std::exp(-0.2);
  CHECK(std::abs(tube_evaluate(u, z) - expect) < 1e-13);

  // Y = 0 agrees with the grid synthesis
  auto vals = fourier_inverse(u.coeffs, grid);
  TubePoint z0{grid->nodes[11], RVec::Zero(1)};
  CHECK(std::abs(tube_evaluate(u, z0) - vals.values[11]) < 1e-12);
  CHECK_THROWS_AS(tube_evaluate(u, TubePoint{grid->nodes[0], RVec::Constant(1, 0.7)}), Error);

  // su2 character against the exponential of the generator
  auto gs = su2_group();
  auto duals = enumerate_dual(gs, 7.0);
  auto a = coeff_zero(duals);
  for (std::size_t i = 0; i < duals.size(); ++i)
    if (duals[i].twol() == 1) a.blocks[i] = 0.5 * Mat::Identity(2, 2);
  HoloFunction us{a, 1.0};
  RVec y(3);
  y << 0.1, -0.2, 0.15;
  TubePoint zs{identity_point(gs), y};
  double h = 0.5 * y.norm();
  CHECK(std::abs(tube_evaluate(us, zs) - 2.0 * std::cosh(h)) < 1e-12);
}

TEST_CASE("hl2 weights and inner products") {
  auto g = torus_group(1);
  auto dual = enumerate_dual(g, 400.0);  // |k| <= 20
  for (double eps : {0.2, 0.5}) {
    auto spec = make_tube(g, eps, 8);
    for (int k = 0; k <= 20; ++k) {
      double got = tube_weight(spec, {k});
      double expect = k == 0 ? 2.0 * eps : std::sinh(2.0 * k * eps) / k;
      CHECK(std::abs(got - expect) <= 1e-10 * std::abs(expect));
      CHECK(std::abs(got - weight_oracle(k, eps)) <= 1e-10 * std::abs(expect));
    }
    HoloFunction u{unit_mode(dual, 3), eps};
    HoloFunction v{unit_mode(dual, 5), eps};
    CHECK(std::abs(hl2_inner(u, v, spec)) < 1e-12);
    CHECK(std::abs(hl2_inner(u, u, spec) - std::sinh(6.0 * eps) / 3.0) < 1e-10);
  }

  // monotone in the radius
  auto d2 = enumerate_dual(g, 20.0);
  HoloFunction w{random_band_limited(d2, 4, 2.0), 0.0};
  double prev = 0.0;
  for (double eps : {0.1, 0.3, 0.6}) {
    auto spec = make_tube(g, eps, 8);
    w.epsilon = eps;
    double n = hl2_norm(w, spec);
    CHECK(n > prev);
    prev = n;
  }

  // two-dimensional weights come from the certified ball rule
  auto g2 = torus_group(2);
  auto spec2 = make_tube(g2, 0.3, 10);
  double w00 = tube_weight(spec2, {0, 0});
  CHECK(std::abs(w00 - M_PI * 0.09) < 1e-10);
}

TEST_CASE("hh norms and the intertwining identity") {
  auto g = torus_group(1);
  auto dual = enumerate_dual(g, 400.0);
  auto spec = make_tube(g, 0.2, 8);

  HoloFunction u{unit_mode(dual, 4), spec.epsilon};
  CHECK(hh_norm(u, 0.0, spec) == doctest::Approx(hl2_norm(u, spec)).epsilon(1e-14));
  double expect = std::sqrt(std::pow(17.0, 1.3) * std::sinh(1.6) / 4.0);
  CHECK(hh_norm(u, 1.3, spec) == doctest::Approx(expect).epsilon(1e-12));

  // P_eps (I - Delta)^{s/2} f = (I - Delta_C)^{s/2} P_eps f blockwise
  auto f = random_band_limited(dual, 12, 2.0);
  for (double s : {-1.0, 0.0, 2.0}) {
    auto lhs = poisson_transform(spectral_apply(bessel_multiplier(dual, s), f), spec).coeffs;
    auto rhs = spectral_apply(bessel_multiplier(dual, s), poisson_transform(f, spec).coeffs);
    for (std::size_t i = 0; i < dual.size(); ++i)
      CHECK(std::abs(lhs.blocks[i](0, 0) - rhs.blocks[i](0, 0)) <=
            4.0 * std::numeric_limits<double>::epsilon() * std::abs(lhs.blocks[i](0, 0)));
  }

  auto [c1, c2] = hh_equivalence_constants(spec, dual, 1.0);
  CHECK(c1 > 0.0);
  CHECK(std::isfinite(c2));
  CHECK(c1 <= c2);
}

TEST_CASE("extension diagrams commute") {
  auto g = torus_group(1);
  auto dual = enumerate_dual(g, 20.0);
  auto grid = haar_grid(g, 64);
  auto spec = make_tube(g, 0.3, 8);
  std::vector<FourierCoefficients> tests;
  for (std::uint64_t s = 1; s <= 5; ++s) tests.push_back(random_band_limited(dual, s, 2.0));

  CHECK(diagram_defect(poisson_multiplier(dual, 0.7), 0.0, spec, tests) <= 1e-10);
  CHECK(diagram_defect(laplacian_parametrix(dual), 2.0, spec, tests) <= 1e-10);
  CHECK(diagram_defect(bessel_multiplier(dual, -1.0), -1.0, spec, tests) <= 1e-10);

  auto p = holo_from_expr(expr_product({expr_coord({1}), k_poly1()}), g, spec.epsilon, 1.0);
  std::vector<FourierCoefficients> band_tests;
  for (auto t : tests) {
    for (std::size_t i = 0; i < dual.size(); ++i)
      if (std::abs(dual[i].label[0]) > 3) t.blocks[i].setZero();
    band_tests.push_back(t);
  }
  CHECK(diagram_defect(p, 0.0, spec, grid, band_tests) <= 1e-8);
}

TEST_CASE("sobolev mirror ratio is stable under cutoff doubling") {
  auto g = torus_group(1);
  auto grid = haar_grid(g, 64);
  auto spec = make_tube(g, 0.3, 8);
  auto p = holo_from_expr(expr_product({expr_coord({1}), k_poly1()}), g, spec.epsilon, 1.0);
  const double s = 2.0, d = 1.0;
  double ratio_lo = 0.0, ratio_hi = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    auto dual = enumerate_dual(g, pass == 0 ? 20.0 : 40.0);
    int band = dual_band(dual) - 1;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto f = random_band_limited(dual, seed, 3.0);
      for (std::size_t i = 0; i < dual.size(); ++i)
        if (std::abs(dual[i].label[0]) > band) f.blocks[i].setZero();
      // Op(p) applied to the boundary data, back to coefficients
      Symbol p0 = p.sample(RVec::Zero(1), grid, dual);
      auto af = fourier_forward(quantize_apply(p0, fourier_inverse(f, grid)), dual);
      HoloFunction uf{f, spec.epsilon}, auf{af, spec.epsilon};
      double r = hh_norm(auf, s - d, spec) / std::max(hh_norm(uf, s, spec), 1e-300);
      worst = std::max(worst, r);
    }
    (pass == 0 ? ratio_lo : ratio_hi) = worst;
  }
  CHECK(ratio_hi <= 2.0 * ratio_lo);
}

TEST_CASE("half wave kernel ladder") {
  auto g = torus_group(1);
  auto spec = make_tube(g, 0.5, 6);

  // closed form on the group
  for (double x : {0.0, 0.3, 1.1, M_PI}) {
    TubePoint z{torus_point(RVec::Constant(1, x)), RVec::Zero(1)};
    auto res = half_wave_kernel(z, spec, 16.0);
    CHECK(!res.diverged);
    double e = std::exp(-spec.epsilon);
    double expect = (1.0 - e * e) / (1.0 - 2.0 * e * std::cos(x) + e * e);
    CHECK(std::abs(res.value - expect) < 1e-8);
    CHECK(res.deltas.back() <= 1e-8);
  }

  // inside the tube: slow but shrinking ladder
  TubePoint zin{torus_point(RVec::Zero(1)), RVec::Constant(1, 0.45)};
  auto rin = half_wave_kernel(zin, spec, 16.0);
  CHECK(!rin.diverged);
  CHECK(rin.deltas.back() <= 1e-8);

  // at and beyond the radius the ladder grows
  TubePoint zat{torus_point(RVec::Zero(1)), RVec::Constant(1, 0.5)};
  CHECK(half_wave_kernel(zat, spec, 16.0).diverged);
  TubePoint zout{torus_point(RVec::Zero(1)), RVec::Constant(1, 0.55)};
  CHECK(half_wave_kernel(zout, spec, 16.0).diverged);
}
