#include "grauert/quadrature.hpp"

#include <cmath>

namespace grauert {

std::pair<RVec, RVec> gauss_legendre(int n) {
  require(n >= 1, errc::invalid_argument, "quadrature order must be >= 1");
  RVec x(n), w(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      if (n == 1) p1 = 1.0;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = (n == 1) ? t : p1;
      double pm = (n == 1) ? 1.0 : p0;
      double dp = n * (t * pn - pm) / (t * t - 1.0);
      double dt = pn / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double pn = (n == 1) ? t : p1;
    double pm = (n == 1) ? 1.0 : p0;
    double dp = (n == 1) ? 1.0 : n * (t * pn - pm) / (t * t - 1.0);
    x[n - 1 - i] = t;
    w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  if (n == 1) {
    x[0] = 0.0;
    w[0] = 2.0;
  }
  return {x, w};
}

YGrid ygrid_mesh(int dim, double radius, int count) {
  require(dim >= 1 && radius > 0.0 && count >= 1, errc::invalid_argument, "bad ygrid mesh request");
  YGrid g;
  g.radius = radius;
  g.nodes.push_back(RVec::Zero(dim));
  if (dim == 1) {
    for (int i = 1; i <= count; ++i) {
      double r = radius * i / count;
      RVec a(1), b(1);
      a[0] = r;
      b[0] = -r;
      g.nodes.push_back(a);
      g.nodes.push_back(b);
    }
    return g;
  }
  const int nr = count;
  const int nang = std::max(4, 2 * count);
  for (int i = 1; i <= nr; ++i) {
    double r = radius * i / nr;
    if (dim == 2) {
      for (int a = 0; a < nang; ++a) {
        double phi = 2.0 * M_PI * a / nang;
        RVec y(2);
        y << r * std::cos(phi), r * std::sin(phi);
        g.nodes.push_back(y);
      }
    } else if (dim == 3) {
      for (int t = 0; t <= count; ++t) {
        double th = M_PI * t / count;
        for (int a = 0; a < nang; ++a) {
          double phi = 2.0 * M_PI * a / nang;
          RVec y(3);
          y << r * std::sin(th) * std::cos(phi), r * std::sin(th) * std::sin(phi),
              r * std::cos(th);
          if (t == 0 || t == count) {
            g.nodes.push_back(y);
            break;  // poles once per radius
          }
          g.nodes.push_back(y);
        }
      }
    } else {
      fail(errc::unsupported, "ygrid mesh implemented for dim <= 3");
    }
  }
  return g;
}

double ball_monomial_integral(int dim, double radius, const std::vector<int>& powers) {
  require(int(powers.size()) == dim, errc::invalid_argument, "powers/dim mismatch");
  int total = 0;
  for (int p : powers) {
    require(p >= 0, errc::invalid_argument, "negative power");
    if (p % 2 == 1) return 0.0;
    total += p;
  }
  // sphere moment 2 prod Gamma((p_i+1)/2) / Gamma((|p|+n)/2), then scale radially
  double num = 2.0;
  for (int p : powers) num *= std::tgamma(0.5 * (p + 1.0));
  double sphere = num / std::tgamma(0.5 * (total + dim));
  return sphere * std::pow(radius, total + dim) / double(total + dim);
}

YGrid ball_quadrature(int dim, double radius, int degree) {
  require(dim >= 1 && dim <= 3 && radius > 0.0 && degree >= 1, errc::invalid_argument,
          "bad ball quadrature request");
  YGrid g;
  g.radius = radius;
  std::vector<double> ws;
  if (dim == 1) {
    auto [x, w] = gauss_legendre(degree + 2);
    for (int i = 0; i < x.size(); ++i) {
      RVec y(1);
      y[0] = radius * x[i];
      g.nodes.push_back(y);
      ws.push_back(radius * w[i]);
    }
  } else if (dim == 2) {
    const int nr = degree / 2 + 2;
    const int na = degree + 2;
    auto [x, w] = gauss_legendre(nr);
    for (int i = 0; i < nr; ++i) {
      double r = radius * 0.5 * (x[i] + 1.0);
      double wr = radius * 0.5 * w[i] * r;  // jacobian r
      for (int a = 0; a < na; ++a) {
        double phi = 2.0 * M_PI * a / na;
        RVec y(2);
        y << r * std::cos(phi), r * std::sin(phi);
        g.nodes.push_back(y);
        ws.push_back(wr * 2.0 * M_PI / na);
      }
    }
  } else {
    const int nr = degree / 2 + 2;
    const int nt = degree + 2;
    const int na = degree + 2;
    auto [xr, wr] = gauss_legendre(nr);
    auto [xt, wt] = gauss_legendre(nt);
    for (int i = 0; i < nr; ++i) {
      double r = radius * 0.5 * (xr[i] + 1.0);
      double wri = radius * 0.5 * wr[i] * r * r;
      for (int t = 0; t < nt; ++t) {
        double ct = xt[t];
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int a = 0; a < na; ++a) {
          double phi = 2.0 * M_PI * a / na;
          RVec y(3);
          y << r * st * std::cos(phi), r * st * std::sin(phi), r * ct;
          g.nodes.push_back(y);
          ws.push_back(wri * wt[t] * 2.0 * M_PI / na);
        }
      }
    }
  }
  g.weights = Eigen::Map<const RVec>(ws.data(), Eigen::Index(ws.size()));

  // moment certificate
  std::vector<int> p(std::size_t(dim), 0);
  const int check_deg = std::min(degree, 6);
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == dim) {
      double exact = ball_monomial_integral(dim, radius, p);
      double got = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double term = g.weights[Eigen::Index(i)];
        for (int j = 0; j < dim; ++j) term *= std::pow(g.nodes[i][j], p[std::size_t(j)]);
        got += term;
      }
      double scale = std::max(1.0, std::abs(exact));
      require(std::abs(got - exact) <= 1e-10 * scale, errc::certificate,
              "ball quadrature failed its moment certificate");
      return;
    }
    for (int q = 0; q <= left; ++q) {
      p[std::size_t(axis)] = q;
      rec(axis + 1, left - q);
    }
    p[std::size_t(axis)] = 0;
  };
  rec(0, check_deg);
  return g;
}

}  // namespace grauert
