#include "grauert/fourier.hpp"

#include <cmath>
#include <cstdint>

namespace grauert {

namespace {

void check_same_dual(const FourierCoefficients& a, const FourierCoefficients& b) {
  require(a.dual.size() == b.dual.size(), errc::invalid_argument, "dual mismatch");
  for (std::size_t i = 0; i < a.dual.size(); ++i)
    require(a.dual[i] == b.dual[i], errc::invalid_argument, "dual mismatch");
}

// splitmix64; kept explicit so that streams are identical across platforms
struct SeededStream {
  std::uint64_t state;
  explicit SeededStream(std::uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  cplx gaussian() {
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return cplx(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)) / std::sqrt(2.0);
  }
};

}  // namespace

FourierCoefficients coeff_zero(const std::vector<Irrep>& dual) {
  FourierCoefficients a;
  a.dual = dual;
  a.blocks.reserve(dual.size());
  for (const auto& xi : dual) a.blocks.push_back(Mat::Zero(xi.dim, xi.dim));
  return a;
}

FourierCoefficients coeff_add(const FourierCoefficients& a, const FourierCoefficients& b) {
  check_same_dual(a, b);
  FourierCoefficients c = a;
  for (std::size_t i = 0; i < c.blocks.size(); ++i) c.blocks[i] += b.blocks[i];
  return c;
}

FourierCoefficients coeff_scale(const FourierCoefficients& a, cplx s) {
  FourierCoefficients c = a;
  for (auto& m : c.blocks) m *= s;
  return c;
}

FourierCoefficients fourier_forward(const GridFunction& u, const std::vector<Irrep>& dual) {
  require(u.grid != nullptr, errc::invalid_argument, "grid function without grid");
  require(u.values.size() == Eigen::Index(u.grid->nodes.size()), errc::invalid_argument,
          "value count does not match node count");
  require_nyquist(*u.grid, dual);
  FourierCoefficients a = coeff_zero(dual);
  RepTable reps = tabulate(*u.grid, dual);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    Mat acc = Mat::Zero(dual[i].dim, dual[i].dim);
    for (std::size_t j = 0; j < u.grid->nodes.size(); ++j)
      acc += u.grid->weights[Eigen::Index(j)] * u.values[Eigen::Index(j)] *
             reps.value[i][j].adjoint();
    a.blocks[i] = acc;
  }
  return a;
}

GridFunction fourier_inverse(const FourierCoefficients& a, const GridPtr& grid) {
  require(grid != nullptr, errc::invalid_argument, "null grid");
  GridFunction u;
  u.grid = grid;
  u.values = CVec::Zero(Eigen::Index(grid->nodes.size()));
  RepTable reps = tabulate(*grid, a.dual);
  for (std::size_t i = 0; i < a.dual.size(); ++i) {
    const double d = a.dual[i].dim;
    for (std::size_t j = 0; j < grid->nodes.size(); ++j)
      u.values[Eigen::Index(j)] += d * (reps.value[i][j] * a.blocks[i]).trace();
  }
  return u;
}

double sobolev_norm(const FourierCoefficients& a, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dual.size(); ++i)
    acc += a.dual[i].dim * std::pow(1.0 + a.dual[i].eigenvalue, s) *
           a.blocks[i].squaredNorm();
  return std::sqrt(acc);
}

double sequence_norm(const FourierCoefficients& a, double d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dual.size(); ++i)
    acc += a.dual[i].dim * std::pow(a.dual[i].bracket(), 2.0 * d) * a.blocks[i].squaredNorm();
  return std::sqrt(acc);
}

cplx l2_inner(const GridFunction& u, const GridFunction& v) {
  require(u.grid && v.grid && u.grid->nodes.size() == v.grid->nodes.size(),
          errc::invalid_argument, "grid mismatch in l2_inner");
  cplx acc(0.0, 0.0);
  for (Eigen::Index j = 0; j < u.values.size(); ++j)
    acc += u.grid->weights[j] * u.values[j] * std::conj(v.values[j]);
  return acc;
}

double l2_norm(const GridFunction& u) { return std::sqrt(std::abs(l2_inner(u, u))); }

cplx coeff_inner(const FourierCoefficients& a, const FourierCoefficients& b) {
  check_same_dual(a, b);
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < a.dual.size(); ++i)
    acc += double(a.dual[i].dim) * (b.blocks[i].adjoint() * a.blocks[i]).trace();
  return acc;
}

double coeff_norm(const FourierCoefficients& a) {
  return std::sqrt(std::abs(coeff_inner(a, a)));
}

FourierCoefficients random_band_limited(const std::vector<Irrep>& dual, std::uint64_t seed,
                                        double decay) {
  SeededStream rng(seed);
  FourierCoefficients a = coeff_zero(dual);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    const double scale = std::pow(dual[i].bracket(), -decay);
    for (int r = 0; r < dual[i].dim; ++r)
      for (int c = 0; c < dual[i].dim; ++c) a.blocks[i](r, c) = scale * rng.gaussian();
  }
  return a;
}

}  // namespace grauert
