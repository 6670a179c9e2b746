#include "grauert/group.hpp"

#include <algorithm>
#include <cmath>

#include "grauert/quadrature.hpp"

namespace grauert {

namespace {

constexpr double kUnitaryTol = 1e-10;
const cplx kI(0.0, 1.0);

double factorial(int n) {
  static const auto table = [] {
    std::array<double, 171> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * double(i);
    return t;
  }();
  return table.at(std::size_t(n));
}

}  // namespace

const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::truncation: return "truncation-error";
    case errc::out_of_tube: return "out-of-tube";
    case errc::unsupported: return "unsupported";
    case errc::invalid_contour: return "invalid-contour";
    case errc::no_parametrix: return "no-parametrix";
    case errc::certificate: return "certificate-failure";
    case errc::divergence: return "divergence-detected";
    case errc::io: return "io-error";
  }
  return "unknown";
}

int Error::exit_code() const noexcept {
  switch (code_) {
    case errc::truncation:
    case errc::certificate:
      return 3;
    case errc::divergence:
      return 4;
    case errc::no_parametrix:
      return 5;
    default:
      return 2;
  }
}

GroupSpec torus_group(int n) {
  require(n >= 1, errc::invalid_argument, "torus dimension must be >= 1");
  return GroupSpec{GroupKind::torus, n};
}

GroupSpec su2_group() { return GroupSpec{GroupKind::su2, 0}; }

std::string group_name(const GroupSpec& g) {
  if (g.kind == GroupKind::su2) return "su2";
  return "torus(" + std::to_string(g.n) + ")";
}

Irrep torus_irrep(const std::vector<int>& k) {
  Irrep xi;
  xi.kind = GroupKind::torus;
  xi.label = k;
  xi.dim = 1;
  double l2 = 0.0;
  for (int kj : k) l2 += double(kj) * double(kj);
  xi.eigenvalue = l2;
  return xi;
}

Irrep su2_irrep(int twol) {
  require(twol >= 0, errc::invalid_argument, "2l must be >= 0");
  Irrep xi;
  xi.kind = GroupKind::su2;
  xi.label = {twol};
  xi.dim = twol + 1;
  double l = 0.5 * twol;
  xi.eigenvalue = l * (l + 1.0);
  return xi;
}

std::string irrep_name(const Irrep& xi) {
  if (xi.kind == GroupKind::su2) return "2l=" + std::to_string(xi.twol());
  std::string s = "k=(";
  for (std::size_t j = 0; j < xi.label.size(); ++j)
    s += (j ? "," : "") + std::to_string(xi.label[j]);
  return s + ")";
}

std::vector<Irrep> enumerate_dual(const GroupSpec& g, double cutoff) {
  require(cutoff > 0.0, errc::invalid_argument, "dual cutoff must be positive");
  const double c2 = cutoff * cutoff * (1.0 + 1e-12) - 1.0;  // bracket^2 - 1 = eigenvalue^2
  std::vector<Irrep> out;
  if (g.kind == GroupKind::torus) {
    if (c2 >= 0.0) {
      const int kmax = int(std::floor(std::pow(c2, 0.25) + 1e-9));
      std::vector<int> k(std::size_t(g.n), -kmax);
      while (true) {
        double l2 = 0.0;
        for (int kj : k) l2 += double(kj) * double(kj);
        if (l2 * l2 <= c2) out.push_back(torus_irrep(k));
        int axis = g.n - 1;
        while (axis >= 0 && ++k[std::size_t(axis)] > kmax) k[std::size_t(axis--)] = -kmax;
        if (axis < 0) break;
      }
    }
  } else {
    for (int twol = 0;; ++twol) {
      Irrep xi = su2_irrep(twol);
      if (xi.eigenvalue * xi.eigenvalue > c2) break;
      out.push_back(xi);
    }
  }
  std::sort(out.begin(), out.end(), [](const Irrep& a, const Irrep& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    return a.label < b.label;
  });
  require(!out.empty(), errc::invalid_argument, "dual cutoff below the trivial representation");
  return out;
}

GroupPoint torus_point(const RVec& angles) {
  GroupPoint x;
  x.kind = GroupKind::torus;
  x.angles = angles;
  return x;
}

GroupPoint su2_point(const Eigen::Matrix2cd& u) {
  require((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() <= kUnitaryTol,
          errc::invalid_argument, "su2 point is not unitary");
  require(std::abs(u.determinant() - 1.0) <= kUnitaryTol, errc::invalid_argument,
          "su2 point determinant is not 1");
  GroupPoint x;
  x.kind = GroupKind::su2;
  x.u = u;
  return x;
}

GroupPoint identity_point(const GroupSpec& g) {
  if (g.kind == GroupKind::torus) return torus_point(RVec::Zero(g.n));
  return su2_point(Eigen::Matrix2cd::Identity());
}

GroupPoint group_mul(const GroupPoint& x, const GroupPoint& y) {
  require(x.kind == y.kind, errc::invalid_argument, "group mismatch in group_mul");
  if (x.kind == GroupKind::torus) {
    require(x.angles.size() == y.angles.size(), errc::invalid_argument, "torus dimension mismatch");
    RVec a = x.angles + y.angles;
    for (int j = 0; j < a.size(); ++j) {
      a[j] = std::fmod(a[j], 2.0 * M_PI);
      if (a[j] < 0.0) a[j] += 2.0 * M_PI;
    }
    return torus_point(a);
  }
  GroupPoint z;
  z.kind = GroupKind::su2;
  z.u = x.u * y.u;
  return z;
}

GroupPoint group_inv(const GroupPoint& x) {
  if (x.kind == GroupKind::torus) {
    RVec a = -x.angles;
    for (int j = 0; j < a.size(); ++j) {
      a[j] = std::fmod(a[j], 2.0 * M_PI);
      if (a[j] < 0.0) a[j] += 2.0 * M_PI;
    }
    return torus_point(a);
  }
  GroupPoint z;
  z.kind = GroupKind::su2;
  z.u = x.u.adjoint();
  return z;
}

Mat su2_wigner(int twol, const Eigen::Matrix2cd& m) {
  const int d = twol + 1;
  Mat out(d, d);
  const cplx a = m(0, 0), b = m(0, 1), c = m(1, 0), e = m(1, 1);
  // Column for weight index mi (p = twol - mi left factors, q = mi right):
  // expand (a z1 + c z2)^p (b z1 + e z2)^q over the monomial basis.
  for (int mi = 0; mi < d; ++mi) {
    const int p = twol - mi;
    const int q = mi;
    std::vector<cplx> coeff(std::size_t(d), cplx(0.0));
    for (int i = 0; i <= p; ++i) {
      const cplx ai = std::pow(a, i) * std::pow(c, p - i) *
                      (factorial(p) / (factorial(i) * factorial(p - i)));
      for (int j = 0; j <= q; ++j) {
        const cplx bj = std::pow(b, j) * std::pow(e, q - j) *
                        (factorial(q) / (factorial(j) * factorial(q - j)));
        coeff[std::size_t(twol - i - j)] += ai * bj;
      }
    }
    const double nm = std::sqrt(factorial(p) * factorial(q));
    for (int mo = 0; mo < d; ++mo) {
      const int po = twol - mo;
      out(mo, mi) = coeff[std::size_t(mo)] * std::sqrt(factorial(po) * factorial(mo)) / nm;
    }
  }
  return out;
}

Mat su2_wigner_derivative(int twol, const Eigen::Matrix2cd& A) {
  const int d = twol + 1;
  Mat out = Mat::Zero(d, d);
  // Ladder action on the weight basis; index mi has p = twol - mi, q = mi.
  for (int mi = 0; mi < d; ++mi) {
    const double p = twol - mi;
    const double q = mi;
    out(mi, mi) += p * A(0, 0) + q * A(1, 1);
    if (mi + 1 < d) out(mi + 1, mi) += A(1, 0) * std::sqrt(p * (q + 1.0));
    if (mi - 1 >= 0) out(mi - 1, mi) += A(0, 1) * std::sqrt(q * (p + 1.0));
  }
  return out;
}

Eigen::Matrix2cd su2_basis(int j) {
  Eigen::Matrix2cd s;
  switch (j) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -kI, kI, 0; break;
    case 2: s << 1, 0, 0, -1; break;
    default: fail(errc::invalid_argument, "su2 basis index out of range");
  }
  return cplx(0.0, -0.5) * s;
}

Eigen::Matrix2cd su2_exp_iy(const Eigen::Vector3d& Y) {
  Eigen::Matrix2cd ys = Eigen::Matrix2cd::Zero();
  for (int j = 0; j < 3; ++j) ys += Y[j] * (kI * 2.0) * su2_basis(j) * 0.5;  // (Y.sigma)/2
  const double h = 0.5 * Y.norm();
  const double s = h < 1e-8 ? 0.5 * (1.0 + h * h / 6.0) : std::sinh(h) / (2.0 * h);
  return std::cosh(h) * Eigen::Matrix2cd::Identity() + 2.0 * s * ys;
}

TubePoint su2_cartan(const Eigen::Matrix2cd& m) {
  require(std::abs(m.determinant() - 1.0) <= 1e-8, errc::invalid_argument,
          "cartan factorization needs determinant 1");
  Eigen::Matrix2cd h = m * m.adjoint();  // = exp(Y.sigma)
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
  Eigen::Vector2d logd = es.eigenvalues().array().log();
  Eigen::Matrix2cd lg = es.eigenvectors() * logd.asDiagonal().toDenseMatrix().cast<cplx>() *
                        es.eigenvectors().adjoint();
  RVec y(3);
  for (int j = 0; j < 3; ++j) {
    Eigen::Matrix2cd sigma = (kI * 2.0) * su2_basis(j);
    y[j] = 0.5 * (lg * sigma).trace().real();  // Y_j = Tr(log(h) sigma_j)/2
  }
  Eigen::Vector3d yv(y[0], y[1], y[2]);
  Eigen::Matrix2cd pos = su2_exp_iy(yv);
  TubePoint z;
  z.base = su2_point(pos.inverse() * m);
  z.imag = y;
  return z;
}

Mat irrep_eval(const Irrep& xi, const GroupPoint& x) {
  require(xi.kind == x.kind, errc::invalid_argument, "group mismatch in irrep_eval");
  if (xi.kind == GroupKind::torus) {
    require(int(xi.label.size()) == x.angles.size(), errc::invalid_argument,
            "torus dimension mismatch");
    double phase = 0.0;
    for (std::size_t j = 0; j < xi.label.size(); ++j) phase += xi.label[j] * x.angles[int(j)];
    Mat m(1, 1);
    m(0, 0) = std::exp(kI * phase);
    return m;
  }
  return su2_wigner(xi.twol(), x.u);
}

Mat irrep_eval_tube(const Irrep& xi, const TubePoint& z) {
  require(xi.kind == z.base.kind, errc::invalid_argument, "group mismatch in irrep_eval_tube");
  if (xi.kind == GroupKind::torus) {
    cplx phase(0.0, 0.0);
    for (std::size_t j = 0; j < xi.label.size(); ++j)
      phase += double(xi.label[j]) * cplx(z.base.angles[int(j)], z.imag[int(j)]);
    Mat m(1, 1);
    m(0, 0) = std::exp(kI * phase);
    return m;
  }
  Eigen::Vector3d y(z.imag[0], z.imag[1], z.imag[2]);
  return su2_wigner(xi.twol(), su2_exp_iy(y) * z.base.u);
}

GridPtr haar_grid(const GroupSpec& g, int resolution) {
  require(resolution >= 1, errc::invalid_argument, "grid resolution must be >= 1");
  auto grid = std::make_shared<HaarGrid>();
  grid->group = g;
  grid->resolution = resolution;
  if (g.kind == GroupKind::torus) {
    const int n = g.n;
    std::size_t total = 1;
    for (int j = 0; j < n; ++j) total *= std::size_t(resolution);
    grid->nodes.reserve(total);
    std::vector<int> idx(std::size_t(n), 0);
    const double w = 1.0 / double(total);
    grid->weights = RVec::Constant(Eigen::Index(total), w);
    while (true) {
      RVec a(n);
      for (int j = 0; j < n; ++j) a[j] = 2.0 * M_PI * idx[std::size_t(j)] / resolution;
      grid->nodes.push_back(torus_point(a));
      int axis = n - 1;
      while (axis >= 0 && ++idx[std::size_t(axis)] >= resolution) idx[std::size_t(axis--)] = 0;
      if (axis < 0) break;
    }
  } else {
    // phi in [0,2pi), psi in [0,4pi) uniform; theta by Gauss-Legendre in cos.
    const int r = resolution;
    const int nphi = 4 * r + 1;
    const int npsi = 4 * r + 2;
    const int nth = 2 * r + 1;
    auto [un, uw] = gauss_legendre(nth);
    grid->nodes.reserve(std::size_t(nphi) * std::size_t(npsi) * std::size_t(nth));
    std::vector<double> wts;
    wts.reserve(grid->nodes.capacity());
    for (int ip = 0; ip < nphi; ++ip) {
      const double phi = 2.0 * M_PI * ip / nphi;
      for (int it = 0; it < nth; ++it) {
        const double th = std::acos(un[it]);
        for (int is = 0; is < npsi; ++is) {
          const double psi = 4.0 * M_PI * is / npsi;
          const double ch = std::cos(0.5 * th), sh = std::sin(0.5 * th);
          Eigen::Matrix2cd u;
          u << std::exp(-kI * (0.5 * (phi + psi))) * ch, -std::exp(-kI * (0.5 * (phi - psi))) * sh,
              std::exp(kI * (0.5 * (phi - psi))) * sh, std::exp(kI * (0.5 * (phi + psi))) * ch;
          grid->nodes.push_back(su2_point(u));
          wts.push_back(uw[it] / (2.0 * nphi * npsi));
        }
      }
    }
    grid->weights = Eigen::Map<const RVec>(wts.data(), Eigen::Index(wts.size()));
  }
  return grid;
}

int dual_band(const std::vector<Irrep>& dual) {
  int band = 0;
  for (const auto& xi : dual) {
    if (xi.kind == GroupKind::torus) {
      for (int kj : xi.label) band = std::max(band, std::abs(kj));
    } else {
      band = std::max(band, xi.twol());
    }
  }
  return band;
}

bool grid_resolves(const HaarGrid& grid, const std::vector<Irrep>& dual) {
  if (dual.empty()) return true;
  const int band = dual_band(dual);
  if (grid.group.kind == GroupKind::torus) return grid.resolution >= 2 * band + 1;
  return 2 * grid.resolution >= band;
}

void require_nyquist(const HaarGrid& grid, const std::vector<Irrep>& dual) {
  require(grid_resolves(grid, dual), errc::invalid_argument,
          "grid resolution violates the Nyquist condition for the dual truncation");
}

RepTable tabulate(const HaarGrid& grid, const std::vector<Irrep>& dual) {
  RepTable t;
  t.value.resize(dual.size());
  for (std::size_t i = 0; i < dual.size(); ++i) {
    t.value[i].reserve(grid.nodes.size());
    for (const auto& x : grid.nodes) t.value[i].push_back(irrep_eval(dual[i], x));
  }
  return t;
}

}  // namespace grauert
