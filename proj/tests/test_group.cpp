#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unsupported/Eigen/MatrixFunctions>

#include "grauert/group.hpp"
#include "grauert/quadrature.hpp"

using namespace grauert;

namespace {

Eigen::Matrix2cd random_su2(std::uint64_t seed) {
  // uniform-ish unit quaternion from a fixed stream
  double a[4];
  std::uint64_t s = seed;
  for (double& v : a) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    v = double(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
  double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
  for (double& v : a) v /= n;
  Eigen::Matrix2cd u;
  u << cplx(a[0], a[3]), cplx(a[2], a[1]), cplx(-a[2], a[1]), cplx(a[0], -a[3]);
  return u;
}

}  // namespace

TEST_CASE("dual enumeration matches the bracket cutoff") {
  auto d1 = enumerate_dual(torus_group(1), 1.5);
  REQUIRE(d1.size() == 3);
  CHECK(d1[0].label == std::vector<int>{0});
  CHECK(d1[1].label == std::vector<int>{-1});
  CHECK(d1[2].label == std::vector<int>{1});
  CHECK(d1[1].eigenvalue == doctest::Approx(1.0));

  auto dsu = enumerate_dual(su2_group(), 1.0);
  REQUIRE(dsu.size() == 1);
  CHECK(dsu[0].twol() == 0);

  // brute-force oracle over a box
  auto d2 = enumerate_dual(torus_group(2), 3.0);
  std::size_t count = 0;
  for (int k1 = -5; k1 <= 5; ++k1)
    for (int k2 = -5; k2 <= 5; ++k2) {
      double l2 = double(k1 * k1 + k2 * k2);
      if (1.0 + l2 * l2 <= 9.0 + 1e-9) ++count;
    }
  CHECK(d2.size() == count);
  CHECK(count == 9);

  CHECK_THROWS_AS(enumerate_dual(torus_group(1), -1.0), Error);
}

TEST_CASE("irrep evaluation on the group") {
  auto xi = torus_irrep({2});
  RVec x(1);
  x[0] = M_PI / 2.0;
  CHECK(std::abs(irrep_eval(xi, torus_point(x))(0, 0) - cplx(-1.0, 0.0)) < 1e-14);

  Eigen::Matrix2cd u = random_su2(7);
  CHECK((irrep_eval(su2_irrep(1), su2_point(u)) - u).norm() < 1e-14);

  // spin-1 on a diagonal element, in the descending weight basis
  double th = 0.7;
  Eigen::Matrix2cd diag = Eigen::Matrix2cd::Zero();
  diag(0, 0) = std::exp(cplx(0, th / 2));
  diag(1, 1) = std::exp(cplx(0, -th / 2));
  Mat d1 = irrep_eval(su2_irrep(2), su2_point(diag));
  CHECK(std::abs(d1(0, 0) - std::exp(cplx(0, th))) < 1e-13);
  CHECK(std::abs(d1(1, 1) - cplx(1, 0)) < 1e-13);
  CHECK(std::abs(d1(2, 2) - std::exp(cplx(0, -th))) < 1e-13);
  CHECK(std::abs(d1(0, 1)) < 1e-13);
}

TEST_CASE("representations are unitary and multiplicative") {
  for (int twol = 0; twol <= 5; ++twol) {
    for (std::uint64_t s = 1; s <= 6; ++s) {
      Eigen::Matrix2cd u = random_su2(s), v = random_su2(s + 100);
      Mat du = su2_wigner(twol, u);
      CHECK((du.adjoint() * du - Mat::Identity(twol + 1, twol + 1)).norm() < 1e-10);
      CHECK((su2_wigner(twol, u * v) - du * su2_wigner(twol, v)).norm() < 1e-10);
    }
    // multiplicativity also holds for complexified arguments
    Eigen::Matrix2cd a = random_su2(3) * su2_exp_iy(Eigen::Vector3d(0.1, -0.2, 0.3));
    Eigen::Matrix2cd b = su2_exp_iy(Eigen::Vector3d(0.05, 0.02, -0.1)) * random_su2(4);
    CHECK((su2_wigner(twol, a * b) - su2_wigner(twol, a) * su2_wigner(twol, b)).norm() < 1e-9);
  }
}

TEST_CASE("tube evaluation extends the group evaluation") {
  auto xi = torus_irrep({3});
  TubePoint z{torus_point(RVec::Zero(1)), RVec::Constant(1, 0.2)};
  CHECK(std::abs(irrep_eval_tube(xi, z)(0, 0) - std::exp(-0.6)) < 1e-14);

  // Y = 0 reduces to the group evaluation
  Eigen::Matrix2cd u = random_su2(11);
  TubePoint z0{su2_point(u), RVec::Zero(3)};
  CHECK((irrep_eval_tube(su2_irrep(3), z0) - irrep_eval(su2_irrep(3), su2_point(u))).norm() <
        1e-12);

  // matrix exponential oracle in the fundamental representation
  double t = 0.37;
  TubePoint zt{su2_point(Eigen::Matrix2cd::Identity()), RVec::Zero(3)};
  zt.imag[2] = t;
  Eigen::Matrix2cd gen = cplx(0, 1) * t * su2_basis(2);
  Eigen::Matrix2cd oracle = gen.exp();
  CHECK((irrep_eval_tube(su2_irrep(1), zt) - oracle).norm() < 1e-12);
  CHECK((oracle.adjoint() * oracle - Eigen::Matrix2cd::Identity()).norm() > 1e-3);  // non-unitary

  // higher spin against the exponential of the induced generator
  Eigen::Vector3d y(0.21, -0.11, 0.32);
  TubePoint zy{su2_point(random_su2(5)), RVec(3)};
  zy.imag << y[0], y[1], y[2];
  Mat dgen = Mat::Zero(4, 4);
  for (int j = 0; j < 3; ++j) dgen += y[j] * su2_wigner_derivative(3, su2_basis(j));
  Mat oracle3 = (cplx(0, 1) * dgen).exp() * su2_wigner(3, zy.base.u);
  CHECK((irrep_eval_tube(su2_irrep(3), zy) - oracle3).norm() < 1e-11);
}

TEST_CASE("derivative of the representation satisfies the Casimir normalization") {
  for (int twol : {1, 2, 3, 4}) {
    Mat acc = Mat::Zero(twol + 1, twol + 1);
    for (int j = 0; j < 3; ++j) {
      Mat d = su2_wigner_derivative(twol, su2_basis(j));
      acc += d * d;
    }
    double l = 0.5 * twol;
    CHECK((acc + l * (l + 1.0) * Mat::Identity(twol + 1, twol + 1)).norm() < 1e-12);
  }
}

TEST_CASE("cartan factorization inverts exp(iY) u") {
  Eigen::Vector3d y(0.4, -0.3, 0.25);
  Eigen::Matrix2cd u = random_su2(21);
  TubePoint z = su2_cartan(su2_exp_iy(y) * u);
  CHECK((Eigen::Vector3d(z.imag[0], z.imag[1], z.imag[2]) - y).norm() < 1e-10);
  CHECK((z.base.u - u).norm() < 1e-10);
}

TEST_CASE("torus grid is the uniform rule") {
  auto grid = haar_grid(torus_group(1), 8);
  REQUIRE(grid->nodes.size() == 8);
  CHECK(grid->nodes[3].angles[0] == doctest::Approx(2.0 * M_PI * 3 / 8));
  CHECK(grid->weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(haar_grid(torus_group(1), 0), Error);
}

TEST_CASE("quadrature reproduces the Schur orthogonality relations") {
  for (auto g : {torus_group(1), su2_group()}) {
    const double cutoff = g.kind == GroupKind::torus ? 10.0 : 7.0;
    auto dual = enumerate_dual(g, cutoff);
    auto grid = haar_grid(g, g.kind == GroupKind::torus ? 2 * dual_band(dual) + 1
                                                        : (dual_band(dual) + 1) / 2 + 1);
    CHECK(grid->weights.minCoeff() > 0.0);
    CHECK(grid->weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    RepTable reps = tabulate(*grid, dual);
    for (std::size_t i = 0; i < dual.size(); ++i) {
      // unitarity at every node
      for (std::size_t j = 0; j < grid->nodes.size(); j += 7)
        CHECK((reps.value[i][j].adjoint() * reps.value[i][j] -
               Mat::Identity(dual[i].dim, dual[i].dim))
                  .norm() < 1e-10);
      for (std::size_t i2 = 0; i2 < dual.size(); ++i2) {
        for (int a = 0; a < dual[i].dim; ++a)
          for (int b = 0; b < dual[i].dim; ++b)
            for (int c = 0; c < dual[i2].dim; ++c)
              for (int d = 0; d < dual[i2].dim; ++d) {
                cplx acc(0, 0);
                for (std::size_t j = 0; j < grid->nodes.size(); ++j)
                  acc += grid->weights[Eigen::Index(j)] * reps.value[i][j](a, b) *
                         std::conj(reps.value[i2][j](c, d));
                cplx expect(0, 0);
                if (i == i2 && a == c && b == d) expect = 1.0 / dual[i].dim;
                CHECK(std::abs(acc - expect) < 1e-10);
              }
      }
    }
  }
}

TEST_CASE("group law and homomorphism property") {
  RVec a(1), b(1);
  a[0] = M_PI / 2;
  b[0] = M_PI / 2;
  CHECK(group_mul(torus_point(a), torus_point(b)).angles[0] == doctest::Approx(M_PI));

  Eigen::Matrix2cd u = random_su2(31);
  CHECK((group_mul(su2_point(u), group_inv(su2_point(u))).u - Eigen::Matrix2cd::Identity())
            .norm() < 1e-12);

  // associativity spot-check and the homomorphism property on random triples
  for (std::uint64_t s = 0; s < 5; ++s) {
    GroupPoint x = su2_point(random_su2(40 + s));
    GroupPoint y = su2_point(random_su2(50 + s));
    GroupPoint z = su2_point(random_su2(60 + s));
    CHECK((group_mul(group_mul(x, y), z).u - group_mul(x, group_mul(y, z)).u).norm() < 1e-12);
    for (int twol : {1, 2, 3})
      CHECK((irrep_eval(su2_irrep(twol), group_mul(x, y)) -
             irrep_eval(su2_irrep(twol), x) * irrep_eval(su2_irrep(twol), y))
                .norm() < 1e-10);
  }
}

TEST_CASE("haar invariance for band-limited functions") {
  for (auto g : {torus_group(1), su2_group()}) {
    auto dual = enumerate_dual(g, g.kind == GroupKind::torus ? 10.0 : 7.0);
    auto grid = haar_grid(g, g.kind == GroupKind::torus ? 16 : 4);
    GroupPoint shift = g.kind == GroupKind::torus ? torus_point(RVec::Constant(1, 0.6180339887))
                                                  : su2_point(random_su2(77));
    // u(x) = sum of a few matrix coefficients
    auto value = [&](const GroupPoint& x) {
      cplx acc(0, 0);
      for (std::size_t i = 0; i < dual.size(); ++i)
        acc += (double(i % 3) + 0.25) * irrep_eval(dual[i], x).sum();
      return acc;
    };
    cplx direct(0, 0), shifted(0, 0);
    for (std::size_t j = 0; j < grid->nodes.size(); ++j) {
      direct += grid->weights[Eigen::Index(j)] * value(grid->nodes[j]);
      shifted += grid->weights[Eigen::Index(j)] * value(group_mul(shift, grid->nodes[j]));
    }
    CHECK(std::abs(direct - shifted) < 1e-10);
  }
}

TEST_CASE("gauss-legendre and ball quadrature certificates") {
  auto [x, w] = gauss_legendre(12);
  double acc = 0.0;
  for (int i = 0; i < 12; ++i) acc += w[i] * std::pow(x[i], 10);
  CHECK(acc == doctest::Approx(2.0 / 11.0).epsilon(1e-12));

  for (int dim : {1, 2, 3}) {
    YGrid ball = ball_quadrature(dim, 0.5, 6);
    CHECK(ball.weights.sum() ==
          doctest::Approx(ball_monomial_integral(dim, 0.5, std::vector<int>(dim, 0)))
              .epsilon(1e-10));
  }
  YGrid mesh = ygrid_mesh(3, 0.4, 2);
  CHECK(mesh.nodes[0].norm() == 0.0);
  for (const auto& y : mesh.nodes) CHECK(y.norm() <= 0.4 + 1e-12);
}
