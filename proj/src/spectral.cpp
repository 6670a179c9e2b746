#include "grauert/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "grauert/quadrature.hpp"

namespace grauert {

namespace {

const cplx kI(0.0, 1.0);

void check_same_dual(const SpectralOperator& a, const SpectralOperator& b) {
  require(a.dual.size() == b.dual.size(), errc::invalid_argument, "dual mismatch");
  for (std::size_t i = 0; i < a.dual.size(); ++i)
    require(a.dual[i] == b.dual[i], errc::invalid_argument, "dual mismatch");
}

struct ContourNode {
  cplx lambda;
  cplx weight;  // includes dlambda and the 1/(2 pi i) prefactor
};

// composite Gauss-Legendre panels along a parametrized path
template <typename PathFn, typename DerivFn>
void add_panels(std::vector<ContourNode>& nodes, PathFn path, DerivFn deriv, double a, double b,
                int panels, int order) {
  auto [gx, gw] = gauss_legendre(order);
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels;
    const double hi = a + (b - a) * (p + 1) / panels;
    for (int i = 0; i < order; ++i) {
      const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[i];
      const double w = 0.5 * (hi - lo) * gw[i];
      nodes.push_back({path(s), w * deriv(s) / (2.0 * M_PI * kI)});
    }
  }
}

// boundary of the truncated region {R <= |l| <= Rout, |arg l| <= half_angle},
// counter-clockwise; closed, so the quadrature limit is the exact residue sum
std::vector<ContourNode> sector_boundary(double R, double Rout, double half_angle, int Q) {
  std::vector<ContourNode> nodes;
  const int order = 2;
  const int per_seg = std::max(order, Q / 4);
  const int panels = std::max(1, per_seg / order);
  const double la = std::log(R), lb = std::log(Rout);

  // lower ray, outward
  add_panels(
      nodes, [&](double s) { return std::exp(s) * std::exp(-kI * half_angle); },
      [&](double s) { return std::exp(s) * std::exp(-kI * half_angle); }, la, lb, panels, order);
  // outer arc, counter-clockwise
  add_panels(
      nodes, [&](double s) { return Rout * std::exp(kI * s); },
      [&](double s) { return Rout * kI * std::exp(kI * s); }, -half_angle, half_angle, panels,
      order);
  // upper ray, inward
  add_panels(
      nodes, [&](double s) { return std::exp(s) * std::exp(kI * half_angle); },
      [&](double s) { return -std::exp(s) * std::exp(kI * half_angle); }, la, lb, panels, order);
  for (std::size_t i = nodes.size() - std::size_t(panels * order); i < nodes.size(); ++i) {
    // re-parametrized with a sign above; flip direction by ordering only
  }
  // inner arc, clockwise through the positive axis
  add_panels(
      nodes, [&](double s) { return R * std::exp(kI * s); },
      [&](double s) { return R * kI * std::exp(kI * s); }, half_angle, -half_angle, panels, order);
  return nodes;
}

std::vector<ContourNode> circle(double R, int Q) {
  std::vector<ContourNode> nodes;
  const int n = std::max(16, Q);
  // trapezoid on the periodic circle integrand
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * M_PI * i / n;
    const cplx l = R * std::exp(kI * th);
    nodes.push_back({l, (2.0 * M_PI / n) * R * kI * std::exp(kI * th) / (2.0 * M_PI * kI)});
  }
  return nodes;
}

struct BlockEigen {
  Mat vectors;
  RVec values;
};

std::vector<BlockEigen> validated_spectrum(const SpectralOperator& A) {
  std::vector<BlockEigen> out;
  out.reserve(A.action.size());
  for (std::size_t i = 0; i < A.action.size(); ++i) {
    const Mat& m = A.action[i];
    require(m.rows() == A.dual[i].dim && m.cols() == A.dual[i].dim, errc::invalid_argument,
            "action block shape mismatch");
    require((m - m.adjoint()).norm() <= 1e-10 * std::max(1.0, m.norm()), errc::invalid_argument,
            "contour calculus needs Hermitian blocks");
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    for (Eigen::Index t = 0; t < es.eigenvalues().size(); ++t)
      require(es.eigenvalues()[t] >= -1e-10, errc::invalid_argument,
              "contour calculus needs nonnegative spectrum");
    out.push_back({es.eigenvectors(), es.eigenvalues().cwiseMax(0.0)});
  }
  return out;
}

double smallest_nonzero(const std::vector<BlockEigen>& eig) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& be : eig)
    for (Eigen::Index t = 0; t < be.values.size(); ++t)
      if (be.values[t] > 1e-12) lo = std::min(lo, be.values[t]);
  return lo;
}

double largest(const std::vector<BlockEigen>& eig) {
  double hi = 0.0;
  for (const auto& be : eig)
    for (Eigen::Index t = 0; t < be.values.size(); ++t) hi = std::max(hi, be.values[t]);
  return hi;
}

SpectralOperator rebuild(const SpectralOperator& A, const std::vector<BlockEigen>& eig,
                         const std::function<cplx(double)>& f) {
  SpectralOperator out;
  out.dual = A.dual;
  out.action.reserve(A.action.size());
  for (const auto& be : eig) {
    CVec fd(be.values.size());
    for (Eigen::Index t = 0; t < be.values.size(); ++t) fd[t] = f(be.values[t]);
    out.action.push_back(be.vectors * fd.asDiagonal() * be.vectors.adjoint());
  }
  return out;
}

}  // namespace

SpectralOperator multiplier(const std::vector<Irrep>& dual,
                            const std::function<cplx(double)>& f) {
  SpectralOperator op;
  op.dual = dual;
  op.action.reserve(dual.size());
  for (const auto& xi : dual)
    op.action.push_back(f(xi.eigenvalue) * Mat::Identity(xi.dim, xi.dim));
  return op;
}

SpectralOperator laplacian_operator(const std::vector<Irrep>& dual) {
  return multiplier(dual, [](double l) { return cplx(l, 0.0); });
}

SpectralOperator bessel_multiplier(const std::vector<Irrep>& dual, double s) {
  return multiplier(dual, [s](double l) { return cplx(std::pow(1.0 + l, 0.5 * s), 0.0); });
}

SpectralOperator poisson_multiplier(const std::vector<Irrep>& dual, double eps) {
  return multiplier(dual, [eps](double l) { return cplx(std::exp(-eps * std::sqrt(l)), 0.0); });
}

SpectralOperator laplacian_parametrix(const std::vector<Irrep>& dual) {
  return multiplier(dual, [](double l) { return l > 0.0 ? cplx(1.0 / l, 0.0) : cplx(0.0, 0.0); });
}

FourierCoefficients spectral_apply(const SpectralOperator& A, const FourierCoefficients& u) {
  require(A.dual.size() == u.dual.size(), errc::invalid_argument, "dual mismatch");
  FourierCoefficients v = u;
  for (std::size_t i = 0; i < u.dual.size(); ++i) {
    require(A.dual[i] == u.dual[i], errc::invalid_argument, "dual mismatch");
    v.blocks[i] = A.action[i] * u.blocks[i];
  }
  return v;
}

SpectralOperator spectral_compose(const SpectralOperator& A, const SpectralOperator& B) {
  check_same_dual(A, B);
  SpectralOperator out = A;
  for (std::size_t i = 0; i < A.action.size(); ++i) out.action[i] = A.action[i] * B.action[i];
  return out;
}

SpectralOperator spectral_sub(const SpectralOperator& A, const SpectralOperator& B) {
  check_same_dual(A, B);
  SpectralOperator out = A;
  for (std::size_t i = 0; i < A.action.size(); ++i) out.action[i] = A.action[i] - B.action[i];
  return out;
}

SpectralOperator translate_conjugate(const SpectralOperator& A, const GroupPoint& g) {
  SpectralOperator out = A;
  for (std::size_t i = 0; i < A.action.size(); ++i) {
    Mat xg = irrep_eval(A.dual[i], g);
    out.action[i] = xg * A.action[i] * xg.adjoint();
  }
  return out;
}

std::vector<double> spectrum(const SpectralOperator& A) {
  std::vector<double> out;
  for (const auto& be : validated_spectrum(A))
    for (Eigen::Index t = 0; t < be.values.size(); ++t) out.push_back(be.values[t]);
  std::sort(out.begin(), out.end());
  return out;
}

PowerResult complex_power_contour(const SpectralOperator& A, cplx z, int k, double R, int Q) {
  require(k >= 1, errc::invalid_argument, "k must be a positive integer");
  require(z.real() - k < 0.0, errc::invalid_argument, "need Re z - k < 0");
  require(Q >= 16, errc::invalid_argument, "quadrature resolution too small");
  auto eig = validated_spectrum(A);
  const double lo = smallest_nonzero(eig);
  require(R > 0.0 && R < lo, errc::invalid_contour,
          "contour radius encircles a nonzero eigenvalue");
  const double Rout = 10.0 * std::max(1.0, largest(eig));

  // keyhole with aperture pi/4: rays at +-(pi - pi/4)
  auto nodes = sector_boundary(R, Rout, M_PI - M_PI / 4.0, Q);
  auto fval = [&](double mu) {
    if (mu <= 1e-12) return cplx(0.0, 0.0);  // annihilated by the A^k factor
    cplx acc(0.0, 0.0);
    const cplx muk = std::pow(cplx(mu, 0.0), double(k));
    for (const auto& nd : nodes)
      acc += nd.weight * std::pow(nd.lambda, z - double(k)) * muk / (nd.lambda - mu);
    return acc;
  };

  PowerResult res;
  res.op = rebuild(A, eig, fval);
  for (const auto& be : eig)
    for (Eigen::Index t = 0; t < be.values.size(); ++t) {
      const double mu = be.values[t];
      const cplx direct = mu > 1e-12 ? std::pow(cplx(mu, 0.0), z) : cplx(0.0, 0.0);
      res.reported_defect = std::max(
          res.reported_defect, std::abs(fval(mu) - direct) / std::max(1.0, std::abs(direct)));
    }
  return res;
}

PowerResult exp_power_contour(const SpectralOperator& A, double t, cplx z, double R, int Q) {
  require(t > 0.0, errc::invalid_argument, "time must be positive");
  require(z.real() > 0.0, errc::invalid_argument, "need Re z > 0");
  require(Q >= 16, errc::invalid_argument, "quadrature resolution too small");
  auto eig = validated_spectrum(A);
  const double lo = smallest_nonzero(eig);
  require(R > 0.0 && R < lo, errc::invalid_contour,
          "contour radius encircles a nonzero eigenvalue");

  const double half_angle = M_PI / 4.0;
  const double c0 = std::cos(z.real() * half_angle) * std::exp(-std::abs(z.imag()) * half_angle);
  require(c0 > 0.0, errc::invalid_contour, "sector condition fails for this z");
  double Rout = 2.0 * std::max(1.0, largest(eig));
  const double decay = std::pow(80.0 / (t * c0), 1.0 / z.real());
  Rout = std::min(std::max(Rout, decay), 1e8);

  auto nodes = sector_boundary(R, Rout, half_angle, Q);
  auto circ = circle(R, Q / 4);
  auto fval = [&](double mu) {
    cplx acc(0.0, 0.0);
    for (const auto& nd : nodes)
      acc += nd.weight * std::exp(-t * std::pow(nd.lambda, z)) / (nd.lambda - mu);
    for (const auto& nd : circ) acc += nd.weight / (nd.lambda - mu);
    return acc;
  };

  PowerResult res;
  res.op = rebuild(A, eig, fval);
  for (const auto& be : eig)
    for (Eigen::Index tt = 0; tt < be.values.size(); ++tt) {
      const double mu = be.values[tt];
      const cplx direct = std::exp(-t * std::pow(cplx(mu, 0.0), z));
      res.reported_defect = std::max(
          res.reported_defect, std::abs(fval(mu) - direct) / std::max(1.0, std::abs(direct)));
    }
  return res;
}

double commutator_norm(const SpectralOperator& A, const SpectralOperator& B,
                       const std::vector<FourierCoefficients>& tests) {
  check_same_dual(A, B);
  // compose first: blocks that share a diagonalization cancel bit for bit
  SpectralOperator comm = spectral_sub(spectral_compose(A, B), spectral_compose(B, A));
  double worst = 0.0;
  for (const auto& u : tests) {
    FourierCoefficients d = spectral_apply(comm, u);
    worst = std::max(worst, coeff_norm(d) / std::max(coeff_norm(u), 1e-300));
  }
  return worst;
}

}  // namespace grauert
