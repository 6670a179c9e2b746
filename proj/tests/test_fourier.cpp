#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "grauert/fourier.hpp"

using namespace grauert;

namespace {

GridFunction sample(const GridPtr& grid, const std::function<cplx(const GroupPoint&)>& f) {
  GridFunction u;
  u.grid = grid;
  u.values = CVec(Eigen::Index(grid->nodes.size()));
  for (std::size_t j = 0; j < grid->nodes.size(); ++j) u.values[Eigen::Index(j)] = f(grid->nodes[j]);
  return u;
}

}  // namespace

TEST_CASE("forward transform on exponentials") {
  auto g = torus_group(1);
  auto dual = enumerate_dual(g, 10.0);  // |k| <= 3, bracket(3) = sqrt(82)
  auto grid = haar_grid(g, 16);
  auto u = sample(grid, [](const GroupPoint& x) { return std::exp(cplx(0, 2.0 * x.angles[0])); });
  auto a = fourier_forward(u, dual);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    cplx expect = dual[i].label[0] == 2 ? cplx(1, 0) : cplx(0, 0);
    CHECK(std::abs(a.blocks[i](0, 0) - expect) < 1e-12);
  }

  auto v = sample(grid, [](const GroupPoint& x) { return cplx(std::cos(x.angles[0]), 0.0); });
  auto b = fourier_forward(v, dual);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    cplx expect = std::abs(dual[i].label[0]) == 1 ? cplx(0.5, 0) : cplx(0, 0);
    CHECK(std::abs(b.blocks[i](0, 0) - expect) < 1e-12);
  }

  CHECK_THROWS_AS(fourier_forward(u, enumerate_dual(g, 5000.0)), Error);  // Nyquist violation
}

TEST_CASE("su2 character transform") {
  auto g = su2_group();
  auto dual = enumerate_dual(g, 7.0);  // 2l <= 4
  auto grid = haar_grid(g, 3);
  auto u = sample(grid, [](const GroupPoint& x) { return x.u.trace(); });  // Tr D^{1/2}
  auto a = fourier_forward(u, dual);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    Mat expect = Mat::Zero(dual[i].dim, dual[i].dim);
    if (dual[i].twol() == 1) expect = 0.5 * Mat::Identity(2, 2);
    CHECK((a.blocks[i] - expect).norm() < 1e-12);
  }
  // and back: the inverse sum reproduces the character
  auto w = fourier_inverse(a, grid);
  for (std::size_t j = 0; j < grid->nodes.size(); j += 97)
    CHECK(std::abs(w.values[Eigen::Index(j)] - grid->nodes[j].u.trace()) < 1e-11);
}

TEST_CASE("round trip, parseval, linearity") {
  for (auto g : {torus_group(1), su2_group()}) {
    auto dual = enumerate_dual(g, g.kind == GroupKind::torus ? 40.0 : 20.2);
    auto grid = haar_grid(g, g.kind == GroupKind::torus ? 32 : 5);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      auto a = random_band_limited(dual, seed, double(g.lie_dim()) + 1.0);
      auto u = fourier_inverse(a, grid);
      auto b = fourier_forward(u, dual);
      double diff = 0.0;
      for (std::size_t i = 0; i < dual.size(); ++i)
        diff = std::max(diff, (a.blocks[i] - b.blocks[i]).norm());
      CHECK(diff < 1e-12);
      // Parseval against the grid inner product
      CHECK(std::abs(l2_norm(u) - coeff_norm(a)) < 1e-10 * std::max(1.0, coeff_norm(a)));
    }
    // linearity is exact by construction of the quadrature sums
    auto a1 = random_band_limited(dual, 10, 2.0);
    auto a2 = random_band_limited(dual, 11, 2.0);
    auto u1 = fourier_inverse(a1, grid);
    auto u2 = fourier_inverse(a2, grid);
    GridFunction mix{grid, 2.0 * u1.values + cplx(0, 1) * u2.values};
    auto m = fourier_forward(mix, dual);
    auto expect = coeff_add(coeff_scale(a1, 2.0), coeff_scale(a2, cplx(0, 1)));
    for (std::size_t i = 0; i < dual.size(); ++i)
      CHECK((m.blocks[i] - expect.blocks[i]).norm() < 1e-11);
  }
}

TEST_CASE("translation covariance on the torus") {
  auto g = torus_group(1);
  auto dual = enumerate_dual(g, 40.0);
  auto grid = haar_grid(g, 32);
  const double shift = 0.8372;
  auto a = random_band_limited(dual, 5, 2.0);
  GridFunction v{grid, CVec(Eigen::Index(grid->nodes.size()))};
  // v(x) = u(x - shift), synthesized from the coefficients
  for (std::size_t j = 0; j < grid->nodes.size(); ++j) {
    cplx acc(0, 0);
    for (std::size_t i = 0; i < dual.size(); ++i)
      acc += a.blocks[i](0, 0) *
             std::exp(cplx(0, dual[i].label[0] * (grid->nodes[j].angles[0] - shift)));
    v.values[Eigen::Index(j)] = acc;
  }
  auto b = fourier_forward(v, dual);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    cplx expect = a.blocks[i](0, 0) * std::exp(cplx(0, -dual[i].label[0] * shift));
    CHECK(std::abs(b.blocks[i](0, 0) - expect) < 1e-10);
  }
}

TEST_CASE("delta coefficients synthesize constants") {
  auto g = torus_group(1);
  auto dual = enumerate_dual(g, 10.0);
  auto grid = haar_grid(g, 16);
  auto a = coeff_zero(dual);
  for (std::size_t i = 0; i < dual.size(); ++i)
    if (dual[i].label[0] == 0) a.blocks[i](0, 0) = 1.0;
  auto u = fourier_inverse(a, grid);
  for (Eigen::Index j = 0; j < u.values.size(); ++j)
    CHECK(std::abs(u.values[j] - cplx(1, 0)) < 1e-13);
}

TEST_CASE("sobolev and sequence norms") {
  auto g = torus_group(1);
  auto dual = enumerate_dual(g, 90.0);
  auto a = coeff_zero(dual);
  // u = e^{ix} + e^{i3x}
  for (std::size_t i = 0; i < dual.size(); ++i)
    if (dual[i].label[0] == 1 || dual[i].label[0] == 3) a.blocks[i](0, 0) = 1.0;
  CHECK(sobolev_norm(a, 2.0) == doctest::Approx(std::sqrt(104.0)).epsilon(1e-13));
  CHECK(sobolev_norm(a, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  // single mode: H^s norm (1+k^2)^{s/2}
  auto b = coeff_zero(dual);
  for (std::size_t i = 0; i < dual.size(); ++i)
    if (dual[i].label[0] == 2) b.blocks[i](0, 0) = 1.0;
  CHECK(sobolev_norm(b, 1.3) == doctest::Approx(std::pow(5.0, 0.65)).epsilon(1e-13));

  // sequence norm uses the quartic bracket
  auto c = coeff_zero(dual);
  for (std::size_t i = 0; i < dual.size(); ++i)
    if (dual[i].label[0] == 1) c.blocks[i](0, 0) = cplx(0.0, -0.7);
  for (double d : {-1.0, 0.0, 2.0})
    CHECK(sequence_norm(c, d) == doctest::Approx(std::pow(2.0, 0.5 * d) * 0.7).epsilon(1e-13));

  // trivial representation has bracket 1 at every order
  auto e0 = coeff_zero(dual);
  for (std::size_t i = 0; i < dual.size(); ++i)
    if (dual[i].label[0] == 0) e0.blocks[i](0, 0) = 1.0;
  CHECK(sequence_norm(e0, 5.0) == doctest::Approx(1.0));

  // truncation monotonicity
  auto big = random_band_limited(dual, 9, 1.0);
  auto small_dual = enumerate_dual(g, 5.0);
  auto small = coeff_zero(small_dual);
  for (std::size_t i = 0; i < small_dual.size(); ++i)
    for (std::size_t k = 0; k < dual.size(); ++k)
      if (dual[k].label == small_dual[i].label) small.blocks[i] = big.blocks[k];
  CHECK(sequence_norm(small, 1.0) <= sequence_norm(big, 1.0) + 1e-15);
}
