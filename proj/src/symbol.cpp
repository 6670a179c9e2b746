#include "grauert/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace grauert {

namespace {

const cplx kI(0.0, 1.0);

void check_compatible(const Symbol& p, const Symbol& q) {
  require(p.group == q.group, errc::invalid_argument, "group mismatch");
  require(p.grid && q.grid && p.grid->resolution == q.grid->resolution &&
              p.grid->nodes.size() == q.grid->nodes.size(),
          errc::invalid_argument, "grid mismatch");
  require(p.dual.size() == q.dual.size(), errc::invalid_argument, "dual mismatch");
  for (std::size_t i = 0; i < p.dual.size(); ++i)
    require(p.dual[i] == q.dual[i], errc::invalid_argument, "dual mismatch");
}

double spectral_norm(const Mat& m) {
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

std::vector<std::uint8_t> merged_mask(const Symbol& p, const Symbol& q) {
  std::vector<std::uint8_t> m(p.dual.size(), 1);
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = (p.is_certified(i) && q.is_certified(i)) ? 1 : 0;
  return m;
}

// ---- torus spatial modes -------------------------------------------------

struct TorusModes {
  std::vector<std::vector<int>> modes;
  int half = 0;
};

TorusModes torus_modes(const HaarGrid& grid) {
  const int n = grid.group.n;
  const int h = (grid.resolution - 1) / 2;
  TorusModes tm;
  tm.half = h;
  std::vector<int> m(std::size_t(n), -h);
  while (true) {
    tm.modes.push_back(m);
    int axis = n - 1;
    while (axis >= 0 && ++m[std::size_t(axis)] > h) m[std::size_t(axis--)] = -h;
    if (axis < 0) break;
  }
  return tm;
}

CVec torus_mode_forward(const HaarGrid& grid, const TorusModes& tm, const CVec& f) {
  CVec c = CVec::Zero(Eigen::Index(tm.modes.size()));
  for (std::size_t mi = 0; mi < tm.modes.size(); ++mi) {
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
      double phase = 0.0;
      for (std::size_t ax = 0; ax < tm.modes[mi].size(); ++ax)
        phase += tm.modes[mi][ax] * grid.nodes[j].angles[int(ax)];
      acc += grid.weights[Eigen::Index(j)] * f[Eigen::Index(j)] * std::exp(-kI * phase);
    }
    c[Eigen::Index(mi)] = acc;
  }
  return c;
}

// ---- su2 spatial expansion ----------------------------------------------

std::vector<Irrep> su2_expansion_dual(const HaarGrid& grid) {
  std::vector<Irrep> d;
  for (int twol = 0; twol <= 2 * grid.resolution; ++twol) d.push_back(su2_irrep(twol));
  return d;
}

}  // namespace

DualIndex diag_index(const std::vector<int>& per_axis) {
  DualIndex a;
  for (std::size_t j = 0; j < per_axis.size(); ++j)
    for (int t = 0; t < per_axis[j]; ++t) a.emplace_back(int(j), int(j));
  return a;
}

Symbol make_symbol(const GridPtr& grid, const std::vector<Irrep>& dual, double order_hint) {
  require(grid != nullptr, errc::invalid_argument, "null grid");
  Symbol p;
  p.group = grid->group;
  p.grid = grid;
  p.dual = dual;
  p.order_hint = order_hint;
  p.blocks.resize(grid->nodes.size());
  for (auto& row : p.blocks) {
    row.reserve(dual.size());
    for (const auto& xi : dual) row.push_back(Mat::Zero(xi.dim, xi.dim));
  }
  return p;
}

Symbol constant_symbol(const GridPtr& grid, const std::vector<Irrep>& dual, cplx value,
                       double order_hint) {
  Symbol p = make_symbol(grid, dual, order_hint);
  for (auto& row : p.blocks)
    for (std::size_t i = 0; i < dual.size(); ++i)
      row[i] = value * Mat::Identity(dual[i].dim, dual[i].dim);
  return p;
}

Symbol symbol_add(const Symbol& p, const Symbol& q) {
  check_compatible(p, q);
  Symbol out = p;
  for (std::size_t j = 0; j < out.blocks.size(); ++j)
    for (std::size_t i = 0; i < out.dual.size(); ++i) out.blocks[j][i] += q.blocks[j][i];
  out.certified = merged_mask(p, q);
  out.order_hint = std::max(p.order_hint, q.order_hint);
  return out;
}

Symbol symbol_sub(const Symbol& p, const Symbol& q) { return symbol_add(p, symbol_scale(q, -1.0)); }

Symbol symbol_scale(const Symbol& p, cplx s) {
  Symbol out = p;
  for (auto& row : out.blocks)
    for (auto& m : row) m *= s;
  return out;
}

Symbol pointwise_product(const Symbol& p, const Symbol& q) {
  check_compatible(p, q);
  Symbol out = p;
  for (std::size_t j = 0; j < out.blocks.size(); ++j)
    for (std::size_t i = 0; i < out.dual.size(); ++i)
      out.blocks[j][i] = p.blocks[j][i] * q.blocks[j][i];
  out.certified = merged_mask(p, q);
  out.order_hint = p.order_hint + q.order_hint;
  return out;
}

double symbol_sup_norm(const Symbol& p) {
  double s = 0.0;
  for (const auto& row : p.blocks)
    for (std::size_t i = 0; i < p.dual.size(); ++i)
      if (p.is_certified(i)) s = std::max(s, spectral_norm(row[i]));
  return s;
}

GridFunction quantize_apply(const Symbol& p, const GridFunction& u) {
  require(u.grid && p.grid && u.grid->nodes.size() == p.grid->nodes.size() &&
              u.grid->resolution == p.grid->resolution,
          errc::invalid_argument, "dual/grid mismatch in quantize_apply");
  FourierCoefficients uh = fourier_forward(u, p.dual);
  GridFunction back = fourier_inverse(uh, u.grid);
  double scale = std::max(l2_norm(u), 1e-300);
  GridFunction diff = u;
  diff.values -= back.values;
  require(l2_norm(diff) <= 1e-8 * scale, errc::invalid_argument,
          "input is not band-limited within the symbol dual");

  RepTable reps = tabulate(*p.grid, p.dual);
  GridFunction out;
  out.grid = u.grid;
  out.values = CVec::Zero(u.values.size());
  for (std::size_t j = 0; j < p.grid->nodes.size(); ++j) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < p.dual.size(); ++i)
      acc += double(p.dual[i].dim) * (reps.value[i][j] * p.blocks[j][i] * uh.blocks[i]).trace();
    out.values[Eigen::Index(j)] = acc;
  }
  return out;
}

int x_band(const Symbol& p) {
  const double tol = 1e-12;
  if (p.group.kind == GroupKind::torus) {
    TorusModes tm = torus_modes(*p.grid);
    double total = 0.0;
    std::map<int, double> mass;  // max |m_j| -> mass
    for (std::size_t i = 0; i < p.dual.size(); ++i) {
      CVec f(Eigen::Index(p.blocks.size()));
      for (std::size_t j = 0; j < p.blocks.size(); ++j) f[Eigen::Index(j)] = p.blocks[j][i](0, 0);
      CVec c = torus_mode_forward(*p.grid, tm, f);
      for (std::size_t mi = 0; mi < tm.modes.size(); ++mi) {
        int b = 0;
        for (int mj : tm.modes[mi]) b = std::max(b, std::abs(mj));
        double w = std::norm(c[Eigen::Index(mi)]);
        mass[b] += w;
        total += w;
      }
    }
    int band = 0;
    for (const auto& [b, w] : mass)
      if (w > tol * std::max(total, 1e-300)) band = std::max(band, b);
    return band;
  }
  // su2: Peter-Weyl expansion of every matrix entry
  std::vector<Irrep> exp_dual = su2_expansion_dual(*p.grid);
  RepTable reps = tabulate(*p.grid, exp_dual);
  double total = 0.0;
  std::map<int, double> mass;
  for (std::size_t i = 0; i < p.dual.size(); ++i) {
    const int d = p.dual[i].dim;
    for (int r = 0; r < d; ++r)
      for (int cdx = 0; cdx < d; ++cdx) {
        for (std::size_t mi = 0; mi < exp_dual.size(); ++mi) {
          Mat acc = Mat::Zero(exp_dual[mi].dim, exp_dual[mi].dim);
          for (std::size_t j = 0; j < p.blocks.size(); ++j)
            acc += p.grid->weights[Eigen::Index(j)] * p.blocks[j][i](r, cdx) *
                   reps.value[mi][j].adjoint();
          double w = exp_dual[mi].dim * acc.squaredNorm();
          mass[exp_dual[mi].twol()] += w;
          total += w;
        }
      }
  }
  int band = 0;
  for (const auto& [b, w] : mass)
    if (w > tol * std::max(total, 1e-300)) band = std::max(band, b);
  return band;
}

Symbol compose_exact(const Symbol& p, const Symbol& q) {
  check_compatible(p, q);
  const int band_q = x_band(q);
  const int dband = dual_band(p.dual);
  if (p.group.kind == GroupKind::torus) {
    require(p.grid->resolution >= 2 * dband + band_q + 1, errc::truncation,
            "grid cannot resolve the composition integrand");
  } else {
    require(4 * p.grid->resolution >= 2 * dband + band_q, errc::truncation,
            "grid cannot resolve the composition integrand");
  }

  const std::size_t nn = p.grid->nodes.size();
  const std::size_t nd = p.dual.size();
  RepTable reps = tabulate(*p.grid, p.dual);

  // right factors eta(y) q(y, eta)
  std::vector<std::vector<Mat>> rf(nn, std::vector<Mat>(nd));
  for (std::size_t y = 0; y < nn; ++y)
    for (std::size_t e = 0; e < nd; ++e) rf[y][e] = reps.value[e][y] * q.blocks[y][e];

  Symbol out = make_symbol(p.grid, p.dual, p.order_hint + q.order_hint);
  std::vector<Mat> acc(nd);
  for (std::size_t x = 0; x < nn; ++x) {
    // kernel row K(x, .) = sum_xi d_xi Tr(xi(y)^* xi(x) p(x, xi))
    std::vector<Mat> mx(nd);
    for (std::size_t i = 0; i < nd; ++i) mx[i] = reps.value[i][x] * p.blocks[x][i];
    for (std::size_t e = 0; e < nd; ++e)
      acc[e] = Mat::Zero(p.dual[e].dim, p.dual[e].dim);
    for (std::size_t y = 0; y < nn; ++y) {
      cplx k(0.0, 0.0);
      for (std::size_t i = 0; i < nd; ++i)
        k += double(p.dual[i].dim) * reps.value[i][y].conjugate().cwiseProduct(mx[i]).sum();
      const cplx wk = p.grid->weights[Eigen::Index(y)] * k;
      for (std::size_t e = 0; e < nd; ++e) acc[e] += wk * rf[y][e];
    }
    for (std::size_t e = 0; e < nd; ++e)
      out.blocks[x][e] = reps.value[e][x].adjoint() * acc[e];
  }

  // The value at eta draws the left factor at every x-frequency shift of the
  // right one, so certification needs those shifted labels present in the
  // dual and themselves certified in p.
  std::vector<std::uint8_t> mask(nd, 1);
  for (std::size_t e = 0; e < nd; ++e) mask[e] = q.is_certified(e) ? 1 : 0;
  if (p.group.kind == GroupKind::torus) {
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < nd; ++i) index[p.dual[i].label] = i;
    const int n = p.group.n;
    for (std::size_t e = 0; e < nd; ++e) {
      if (!mask[e]) continue;
      std::vector<int> m(std::size_t(n), -band_q);
      bool ok = true;
      while (ok) {
        std::vector<int> shifted = p.dual[e].label;
        for (int j = 0; j < n; ++j) shifted[std::size_t(j)] += m[std::size_t(j)];
        auto it = index.find(shifted);
        if (it == index.end() || !p.is_certified(it->second)) {
          ok = false;
          break;
        }
        int axis = n - 1;
        while (axis >= 0 && ++m[std::size_t(axis)] > band_q) m[std::size_t(axis--)] = -band_q;
        if (axis < 0) break;
      }
      mask[e] = ok ? 1 : 0;
    }
  } else {
    int cert_band = -1;  // largest 2l below which p is fully certified
    for (int t = 0; t <= dband; ++t) {
      bool all = true;
      for (std::size_t i = 0; i < nd; ++i)
        if (p.dual[i].twol() == t && !p.is_certified(i)) all = false;
      if (!all) break;
      cert_band = t;
    }
    for (std::size_t e = 0; e < nd; ++e)
      if (p.dual[e].twol() + band_q > cert_band) mask[e] = 0;
  }
  require(std::any_of(mask.begin(), mask.end(), [](std::uint8_t v) { return v != 0; }),
          errc::truncation, "insufficient cutoff margin: no certified band remains");
  out.certified = mask;
  return out;
}

Symbol adjoint_exact(const Symbol& p) {
  const int band_p = x_band(p);
  const int dband = dual_band(p.dual);
  if (p.group.kind == GroupKind::torus) {
    require(p.grid->resolution >= 2 * dband + band_p + 1, errc::truncation,
            "grid cannot resolve the adjoint integrand");
  } else {
    require(4 * p.grid->resolution >= 2 * dband + band_p, errc::truncation,
            "grid cannot resolve the adjoint integrand");
  }
  const std::size_t nn = p.grid->nodes.size();
  const std::size_t nd = p.dual.size();
  RepTable reps = tabulate(*p.grid, p.dual);

  // v_xi(y) = (xi(y) p(y, xi))^*
  std::vector<std::vector<Mat>> v(nn, std::vector<Mat>(nd));
  for (std::size_t y = 0; y < nn; ++y)
    for (std::size_t i = 0; i < nd; ++i) v[y][i] = (reps.value[i][y] * p.blocks[y][i]).adjoint();

  Symbol out = make_symbol(p.grid, p.dual, p.order_hint);
  std::vector<Mat> acc(nd);
  for (std::size_t x = 0; x < nn; ++x) {
    for (std::size_t e = 0; e < nd; ++e) acc[e] = Mat::Zero(p.dual[e].dim, p.dual[e].dim);
    for (std::size_t y = 0; y < nn; ++y) {
      cplx k(0.0, 0.0);
      for (std::size_t i = 0; i < nd; ++i)
        k += double(p.dual[i].dim) * (v[y][i] * reps.value[i][x]).trace();
      const cplx wk = p.grid->weights[Eigen::Index(y)] * k;
      for (std::size_t e = 0; e < nd; ++e) acc[e] += wk * reps.value[e][y];
    }
    for (std::size_t e = 0; e < nd; ++e)
      out.blocks[x][e] = reps.value[e][x].adjoint() * acc[e];
  }

  std::vector<std::uint8_t> mask(nd, 1);
  for (std::size_t e = 0; e < nd; ++e) mask[e] = p.is_certified(e) ? 1 : 0;
  if (p.group.kind == GroupKind::torus) {
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < nd; ++i) index[p.dual[i].label] = i;
    const int n = p.group.n;
    for (std::size_t e = 0; e < nd; ++e) {
      if (!mask[e]) continue;
      std::vector<int> m(std::size_t(n), -band_p);
      bool ok = true;
      while (ok) {
        std::vector<int> shifted = p.dual[e].label;
        for (int j = 0; j < n; ++j) shifted[std::size_t(j)] += m[std::size_t(j)];
        auto it = index.find(shifted);
        if (it == index.end() || !p.is_certified(it->second)) {
          ok = false;
          break;
        }
        int axis = n - 1;
        while (axis >= 0 && ++m[std::size_t(axis)] > band_p) m[std::size_t(axis--)] = -band_p;
        if (axis < 0) break;
      }
      mask[e] = ok ? 1 : 0;
    }
  } else {
    int cert_band = -1;
    for (int t = 0; t <= dband; ++t) {
      bool all = true;
      for (std::size_t i = 0; i < nd; ++i)
        if (p.dual[i].twol() == t && !p.is_certified(i)) all = false;
      if (!all) break;
      cert_band = t;
    }
    for (std::size_t e = 0; e < nd; ++e)
      if (p.dual[e].twol() + band_p > cert_band) mask[e] = 0;
  }
  out.certified = mask;
  return out;
}

namespace {

Symbol delta_xi_single(const Symbol& p, int ei, int ej) {
  if (p.group.kind == GroupKind::torus) {
    const int n = p.group.n;
    require(ei >= 0 && ei < n && ej >= 0 && ej < n, errc::invalid_argument,
            "difference index out of range");
    if (ei != ej) {
      // off-diagonal entries of the diagonal embedding vanish identically
      Symbol out = make_symbol(p.grid, p.dual, p.order_hint - 1.0);
      out.certified = p.certified;
      return out;
    }
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < p.dual.size(); ++i) index[p.dual[i].label] = i;
    std::vector<Irrep> kept;
    std::vector<std::size_t> self, shifted;
    for (std::size_t i = 0; i < p.dual.size(); ++i) {
      std::vector<int> ks = p.dual[i].label;
      ks[std::size_t(ej)] += 1;
      auto it = index.find(ks);
      if (it == index.end()) continue;
      if (!p.is_certified(i) || !p.is_certified(it->second)) continue;
      kept.push_back(p.dual[i]);
      self.push_back(i);
      shifted.push_back(it->second);
    }
    require(!kept.empty(), errc::truncation, "no interior dual left for the difference");
    Symbol out = make_symbol(p.grid, kept, p.order_hint - 1.0);
    for (std::size_t j = 0; j < p.blocks.size(); ++j)
      for (std::size_t i = 0; i < kept.size(); ++i)
        out.blocks[j][i] = p.blocks[j][shifted[i]] - p.blocks[j][self[i]];
    return out;
  }

  // su2: multiply the inverse-transformed kernel by (rho(y^{-1}) - I)_{ij}
  require(ei >= 0 && ei < 2 && ej >= 0 && ej < 2, errc::invalid_argument,
          "difference index out of range");
  const int band = dual_band(p.dual);
  std::vector<Irrep> kept;
  std::vector<std::size_t> src;
  for (std::size_t i = 0; i < p.dual.size(); ++i)
    if (p.dual[i].twol() + 1 <= band && p.is_certified(i)) {
      kept.push_back(p.dual[i]);
      src.push_back(i);
    }
  require(!kept.empty(), errc::truncation, "no interior dual left for the difference");

  const int res_int = (2 * band + 3) / 4 + 1;
  GridPtr g = haar_grid(p.group, res_int);
  RepTable reps = tabulate(*g, p.dual);
  RepTable reps_out = tabulate(*g, kept);
  CVec dfac(Eigen::Index(g->nodes.size()));
  for (std::size_t y = 0; y < g->nodes.size(); ++y)
    dfac[Eigen::Index(y)] = (g->nodes[y].u.adjoint() - Eigen::Matrix2cd::Identity())(ei, ej);

  Symbol out = make_symbol(p.grid, kept, p.order_hint - 1.0);
  const bool x_const = [&] {
    for (std::size_t j = 1; j < p.blocks.size(); ++j)
      for (std::size_t i = 0; i < p.dual.size(); ++i)
        if (p.blocks[j][i] != p.blocks[0][i]) return false;
    return true;
  }();
  const std::size_t limit = x_const ? 1 : p.blocks.size();
  for (std::size_t x = 0; x < limit; ++x) {
    CVec kernel = CVec::Zero(Eigen::Index(g->nodes.size()));
    for (std::size_t i = 0; i < p.dual.size(); ++i)
      for (std::size_t y = 0; y < g->nodes.size(); ++y)
        kernel[Eigen::Index(y)] +=
            double(p.dual[i].dim) * (reps.value[i][y] * p.blocks[x][i]).trace();
    kernel = kernel.cwiseProduct(dfac);
    for (std::size_t e = 0; e < kept.size(); ++e) {
      Mat acc = Mat::Zero(kept[e].dim, kept[e].dim);
      for (std::size_t y = 0; y < g->nodes.size(); ++y)
        acc += g->weights[Eigen::Index(y)] * kernel[Eigen::Index(y)] *
               reps_out.value[e][y].adjoint();
      out.blocks[x][e] = acc;
    }
  }
  if (x_const)
    for (std::size_t x = 1; x < p.blocks.size(); ++x) out.blocks[x] = out.blocks[0];
  return out;
}

}  // namespace

Symbol delta_xi(const Symbol& p, const DualIndex& alpha) {
  Symbol out = p;
  for (const auto& [i, j] : alpha) out = delta_xi_single(out, i, j);
  return out;
}

Symbol derivative_x(const Symbol& p, const std::vector<int>& beta) {
  const int total = [&] {
    int t = 0;
    for (int b : beta) {
      require(b >= 0, errc::invalid_argument, "negative derivative order");
      t += b;
    }
    return t;
  }();
  if (total == 0) return p;

  if (p.group.kind == GroupKind::torus) {
    require(int(beta.size()) == p.group.n, errc::invalid_argument, "beta size mismatch");
    TorusModes tm = torus_modes(*p.grid);
    Symbol out = make_symbol(p.grid, p.dual, p.order_hint);
    out.certified = p.certified;
    for (std::size_t i = 0; i < p.dual.size(); ++i) {
      CVec f(Eigen::Index(p.blocks.size()));
      for (std::size_t j = 0; j < p.blocks.size(); ++j) f[Eigen::Index(j)] = p.blocks[j][i](0, 0);
      CVec c = torus_mode_forward(*p.grid, tm, f);
      double total_mass = std::max(c.squaredNorm(), 1e-300);
      double top_mass = 0.0;
      for (std::size_t mi = 0; mi < tm.modes.size(); ++mi) {
        int b = 0;
        for (int mj : tm.modes[mi]) b = std::max(b, std::abs(mj));
        if (b >= tm.half) top_mass += std::norm(c[Eigen::Index(mi)]);
      }
      require(top_mass <= 1e-9 * total_mass, errc::invalid_argument,
              "spatial band of the symbol is not resolvable on the grid");
      for (std::size_t j = 0; j < p.blocks.size(); ++j) {
        cplx acc(0.0, 0.0);
        for (std::size_t mi = 0; mi < tm.modes.size(); ++mi) {
          cplx factor(1.0, 0.0);
          double phase = 0.0;
          for (std::size_t ax = 0; ax < tm.modes[mi].size(); ++ax) {
            for (int t = 0; t < beta[ax]; ++t) factor *= kI * double(tm.modes[mi][ax]);
            phase += tm.modes[mi][ax] * p.grid->nodes[j].angles[int(ax)];
          }
          acc += factor * c[Eigen::Index(mi)] * std::exp(kI * phase);
        }
        out.blocks[j][i](0, 0) = acc;
      }
    }
    return out;
  }

  require(int(beta.size()) == 3, errc::invalid_argument, "beta size mismatch");
  std::vector<Irrep> exp_dual = su2_expansion_dual(*p.grid);
  RepTable reps = tabulate(*p.grid, exp_dual);
  std::vector<Mat> dops(exp_dual.size());
  for (std::size_t mi = 0; mi < exp_dual.size(); ++mi) {
    Mat d = Mat::Identity(exp_dual[mi].dim, exp_dual[mi].dim);
    for (int ax = 0; ax < 3; ++ax) {
      Mat gen = su2_wigner_derivative(exp_dual[mi].twol(), su2_basis(ax));
      for (int t = 0; t < beta[std::size_t(ax)]; ++t) d = gen * d;
    }
    dops[mi] = d;
  }

  Symbol out = make_symbol(p.grid, p.dual, p.order_hint);
  out.certified = p.certified;
  for (std::size_t i = 0; i < p.dual.size(); ++i) {
    const int d = p.dual[i].dim;
    for (int r = 0; r < d; ++r)
      for (int cdx = 0; cdx < d; ++cdx) {
        double total_mass = 0.0, top_mass = 0.0;
        std::vector<Mat> coeff(exp_dual.size());
        for (std::size_t mi = 0; mi < exp_dual.size(); ++mi) {
          Mat acc = Mat::Zero(exp_dual[mi].dim, exp_dual[mi].dim);
          for (std::size_t j = 0; j < p.blocks.size(); ++j)
            acc += p.grid->weights[Eigen::Index(j)] * p.blocks[j][i](r, cdx) *
                   reps.value[mi][j].adjoint();
          coeff[mi] = acc;
          double w = exp_dual[mi].dim * acc.squaredNorm();
          total_mass += w;
          if (exp_dual[mi].twol() >= int(exp_dual.size()) - 2) top_mass += w;
        }
        require(top_mass <= 1e-9 * std::max(total_mass, 1e-300), errc::invalid_argument,
                "spatial band of the symbol is not resolvable on the grid");
        for (std::size_t j = 0; j < p.blocks.size(); ++j) {
          cplx acc(0.0, 0.0);
          for (std::size_t mi = 0; mi < exp_dual.size(); ++mi)
            acc += double(exp_dual[mi].dim) *
                   (reps.value[mi][j] * dops[mi] * coeff[mi]).trace();
          out.blocks[j][i](r, cdx) = acc;
        }
      }
  }
  return out;
}

double symbol_seminorm(const Symbol& p, double d, const DualIndex& alpha,
                       const std::vector<int>& beta) {
  Symbol w = p;
  int tb = 0;
  for (int b : beta) tb += b;
  if (tb > 0) w = derivative_x(w, beta);
  if (!alpha.empty()) w = delta_xi(w, alpha);
  const double expo = double(alpha.size()) - d;
  double sup = 0.0;
  for (std::size_t j = 0; j < w.blocks.size(); ++j)
    for (std::size_t i = 0; i < w.dual.size(); ++i)
      if (w.is_certified(i))
        sup = std::max(sup, std::pow(w.dual[i].bracket(), expo) * spectral_norm(w.blocks[j][i]));
  return sup;
}

double leibniz_defect(const Symbol& a, const Symbol& b, int i, int j) {
  check_compatible(a, b);
  for (std::size_t x = 1; x < a.blocks.size(); ++x)
    for (std::size_t t = 0; t < a.dual.size(); ++t)
      require(a.blocks[x][t] == a.blocks[0][t] && b.blocks[x][t] == b.blocks[0][t],
              errc::invalid_argument, "leibniz_defect needs x-independent sequences");

  using Table = std::map<std::vector<int>, Mat>;
  auto as_table = [](const Symbol& s) {
    Table t;
    for (std::size_t e = 0; e < s.dual.size(); ++e) t[s.dual[e].label] = s.blocks[0][e];
    return t;
  };

  const int m = a.group.kind == GroupKind::torus ? a.group.n : 2;
  Table lhs = as_table(delta_xi(pointwise_product(a, b), {{i, j}}));
  Table da = as_table(delta_xi(a, {{i, j}}));
  Table db = as_table(delta_xi(b, {{i, j}}));
  Table ta = as_table(a);
  Table tb = as_table(b);
  std::vector<std::pair<Table, Table>> cross;
  for (int k = 0; k < m; ++k)
    cross.emplace_back(as_table(delta_xi(a, {{i, k}})), as_table(delta_xi(b, {{k, j}})));

  double sup = 0.0;
  for (const auto& [label, left] : lhs) {
    if (!da.count(label) || !db.count(label)) continue;
    bool have_all = true;
    for (const auto& [ca, cb] : cross)
      if (!ca.count(label) || !cb.count(label)) have_all = false;
    if (!have_all) continue;
    Mat rhs = da.at(label) * tb.at(label) + ta.at(label) * db.at(label);
    for (const auto& [ca, cb] : cross) rhs += ca.at(label) * cb.at(label);
    sup = std::max(sup, spectral_norm(left - rhs));
  }
  return sup;
}

Symbol asymptotic_compose(const Symbol& p, const Symbol& q, int N) {
  require(p.group.kind == GroupKind::torus, errc::unsupported,
          "asymptotic expansion implemented on the torus backend");
  require(N >= 1, errc::invalid_argument, "N must be >= 1");
  check_compatible(p, q);
  const int n = p.group.n;
  TorusModes tm = torus_modes(*p.grid);

  std::set<std::vector<int>> labels;
  for (const auto& xi : p.dual) labels.insert(xi.label);

  // modes of q per retained irrep
  std::vector<CVec> qc(p.dual.size());
  for (std::size_t e = 0; e < p.dual.size(); ++e) {
    CVec f(Eigen::Index(q.blocks.size()));
    for (std::size_t x = 0; x < q.blocks.size(); ++x) f[Eigen::Index(x)] = q.blocks[x][e](0, 0);
    qc[e] = torus_mode_forward(*q.grid, tm, f);
  }

  // all alpha with |alpha| < N
  std::vector<std::vector<int>> alphas;
  std::vector<int> cur(std::size_t(n), 0);
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == n) {
      alphas.push_back(cur);
      return;
    }
    for (int t = 0; t <= left; ++t) {
      cur[std::size_t(axis)] = t;
      rec(axis + 1, left - t);
    }
    cur[std::size_t(axis)] = 0;
  };
  rec(0, N - 1);

  // interior: every forward shift used by some alpha stays retained
  std::vector<std::uint8_t> mask(p.dual.size(), 1);
  for (std::size_t e = 0; e < p.dual.size(); ++e) {
    if (!p.is_certified(e) || !q.is_certified(e)) {
      mask[e] = 0;
      continue;
    }
    bool ok = true;
    for (const auto& alpha : alphas) {
      std::vector<int> g(std::size_t(n), 0);
      while (ok) {
        std::vector<int> shifted = p.dual[e].label;
        for (int ax = 0; ax < n; ++ax) shifted[std::size_t(ax)] += g[std::size_t(ax)];
        if (!labels.count(shifted)) ok = false;
        int axis = n - 1;
        while (axis >= 0 && ++g[std::size_t(axis)] > alpha[std::size_t(axis)])
          g[std::size_t(axis--)] = 0;
        if (axis < 0) break;
      }
      if (!ok) break;
    }
    mask[e] = ok ? 1 : 0;
  }
  require(std::any_of(mask.begin(), mask.end(), [](std::uint8_t v) { return v != 0; }),
          errc::truncation, "no interior dual left for the expansion");

  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t e = 0; e < p.dual.size(); ++e) index[p.dual[e].label] = e;

  auto binom = [](int a, int b) {
    double r = 1.0;
    for (int t = 0; t < b; ++t) r = r * (a - t) / (t + 1);
    return r;
  };

  Symbol out = make_symbol(p.grid, p.dual, p.order_hint + q.order_hint);
  out.certified = mask;
  for (std::size_t x = 0; x < p.blocks.size(); ++x) {
    for (std::size_t e = 0; e < p.dual.size(); ++e) {
      if (!mask[e]) continue;
      cplx total(0.0, 0.0);
      for (const auto& alpha : alphas) {
        // forward difference of p at this label
        cplx dp(0.0, 0.0);
        std::vector<int> g(std::size_t(n), 0);
        double afact = 1.0;
        for (int ax = 0; ax < n; ++ax)
          for (int t = 2; t <= alpha[std::size_t(ax)]; ++t) afact *= t;
        while (true) {
          std::vector<int> shifted = p.dual[e].label;
          double sign = 1.0, ch = 1.0;
          int gs = 0;
          for (int ax = 0; ax < n; ++ax) {
            shifted[std::size_t(ax)] += g[std::size_t(ax)];
            ch *= binom(alpha[std::size_t(ax)], g[std::size_t(ax)]);
            gs += g[std::size_t(ax)];
          }
          int as = 0;
          for (int v : alpha) as += v;
          sign = ((as - gs) % 2 == 0) ? 1.0 : -1.0;
          dp += sign * ch * p.blocks[x][index.at(shifted)](0, 0);
          int axis = n - 1;
          while (axis >= 0 && ++g[std::size_t(axis)] > alpha[std::size_t(axis)])
            g[std::size_t(axis--)] = 0;
          if (axis < 0) break;
        }
        // falling-factorial derivative of q at this node
        cplx dq(0.0, 0.0);
        for (std::size_t mi = 0; mi < tm.modes.size(); ++mi) {
          double ff = 1.0;
          for (int ax = 0; ax < n; ++ax)
            for (int t = 0; t < alpha[std::size_t(ax)]; ++t)
              ff *= double(tm.modes[mi][std::size_t(ax)] - t);
          if (ff == 0.0) continue;
          double phase = 0.0;
          for (int ax = 0; ax < n; ++ax)
            phase += tm.modes[mi][std::size_t(ax)] * p.grid->nodes[x].angles[ax];
          dq += ff * qc[e][Eigen::Index(mi)] * std::exp(kI * phase);
        }
        total += dp * dq / afact;
      }
      out.blocks[x][e](0, 0) = total;
    }
  }
  return out;
}

Mat symbol_value_at(const Symbol& p, const RVec& x, std::size_t xi_index) {
  require(p.group.kind == GroupKind::torus, errc::unsupported,
          "off-grid symbol evaluation implemented on the torus backend");
  TorusModes tm = torus_modes(*p.grid);
  CVec f(Eigen::Index(p.blocks.size()));
  for (std::size_t j = 0; j < p.blocks.size(); ++j) f[Eigen::Index(j)] = p.blocks[j][xi_index](0, 0);
  CVec c = torus_mode_forward(*p.grid, tm, f);
  cplx acc(0.0, 0.0);
  for (std::size_t mi = 0; mi < tm.modes.size(); ++mi) {
    double phase = 0.0;
    for (std::size_t ax = 0; ax < tm.modes[mi].size(); ++ax)
      phase += tm.modes[mi][ax] * x[int(ax)];
    acc += c[Eigen::Index(mi)] * std::exp(kI * phase);
  }
  Mat out(1, 1);
  out(0, 0) = acc;
  return out;
}

}  // namespace grauert
