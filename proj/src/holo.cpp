#include "grauert/holo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace grauert {

namespace {

const cplx kI(0.0, 1.0);

double spectral_norm(const Mat& m) {
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

double smallest_singular(const Mat& m) {
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  auto sv = Eigen::JacobiSVD<Mat>(m).singularValues();
  return sv(sv.size() - 1);
}

// smallest bracket cutoff whose truncation contains every shift of the
// requested dual by at most `margin` label units
double enlarged_cutoff(const GroupSpec& g, const std::vector<Irrep>& dual, int margin) {
  double lmax = 0.0;
  for (const auto& xi : dual) lmax = std::max(lmax, xi.eigenvalue);
  if (g.kind == GroupKind::torus) {
    double r = std::sqrt(lmax) + margin * std::sqrt(double(g.n));
    double lam = r * r;
    return std::sqrt(1.0 + lam * lam) + 1e-9;
  }
  double twol = -1.0 + std::sqrt(1.0 + 4.0 * lmax);  // invert l(l+1), in 2l units
  double tw = twol + margin;
  double lam = 0.5 * tw * (0.5 * tw + 1.0);
  return std::sqrt(1.0 + lam * lam) + 1e-9;
}

Symbol restrict_dual(const Symbol& p, const std::vector<Irrep>& sub) {
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < p.dual.size(); ++i) index[p.dual[i].label] = i;
  Symbol out = make_symbol(p.grid, sub, p.order_hint);
  out.certified.assign(sub.size(), 1);
  for (std::size_t e = 0; e < sub.size(); ++e) {
    auto it = index.find(sub[e].label);
    require(it != index.end(), errc::truncation, "requested label missing from working dual");
    for (std::size_t j = 0; j < p.blocks.size(); ++j) out.blocks[j][e] = p.blocks[j][it->second];
    out.certified[e] = p.is_certified(it->second) ? 1 : 0;
  }
  return out;
}

Symbol scale_by_heat_tail(const Symbol& s, double t) {
  Symbol out = s;
  for (std::size_t j = 0; j < out.blocks.size(); ++j)
    for (std::size_t i = 0; i < out.dual.size(); ++i)
      out.blocks[j][i] *= (1.0 - std::exp(-t * out.dual[i].eigenvalue));
  return out;
}

std::vector<std::vector<int>> multi_indices_up_to(int dim, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(std::size_t(dim), 0);
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == dim) {
      out.push_back(cur);
      return;
    }
    for (int t = 0; t <= left; ++t) {
      cur[std::size_t(axis)] = t;
      rec(axis + 1, left - t);
    }
    cur[std::size_t(axis)] = 0;
  };
  rec(0, total);
  return out;
}

}  // namespace

HoloSymbol holo_from_expr(const ExprPtr& e, const GroupSpec& g, double epsilon, double order) {
  require(epsilon > 0.0, errc::invalid_argument, "tube radius must be positive");
  HoloSymbol p;
  p.group = g;
  p.epsilon = epsilon;
  p.order = order;
  p.sample = [e, g, order](const RVec& Y, const GridPtr& grid, const std::vector<Irrep>& dual) {
    Symbol s = make_symbol(grid, dual, order);
    for (std::size_t j = 0; j < grid->nodes.size(); ++j) {
      TubePoint z{grid->nodes[j], Y};
      for (std::size_t i = 0; i < dual.size(); ++i) s.blocks[j][i] = expr_eval(e, g, z, dual[i]);
    }
    return s;
  };
  p.eval_point = [e, g](const TubePoint& z, const Irrep& xi) { return expr_eval(e, g, z, xi); };
  return p;
}

HoloSymbol holo_sum(const HoloSymbol& a, const HoloSymbol& b) {
  require(a.group == b.group, errc::invalid_argument, "group mismatch");
  HoloSymbol p;
  p.group = a.group;
  p.epsilon = std::min(a.epsilon, b.epsilon);
  p.order = std::max(a.order, b.order);
  auto sa = a.sample, sb = b.sample;
  p.sample = [sa, sb](const RVec& Y, const GridPtr& grid, const std::vector<Irrep>& dual) {
    return symbol_add(sa(Y, grid, dual), sb(Y, grid, dual));
  };
  if (a.eval_point && b.eval_point) {
    auto ea = a.eval_point, eb = b.eval_point;
    p.eval_point = [ea, eb](const TubePoint& z, const Irrep& xi) { return ea(z, xi) + eb(z, xi); };
  }
  return p;
}

HoloSymbol holo_from_sequence(const Symbol& seq, double epsilon) {
  for (std::size_t j = 1; j < seq.blocks.size(); ++j)
    for (std::size_t i = 0; i < seq.dual.size(); ++i)
      require(seq.blocks[j][i] == seq.blocks[0][i], errc::invalid_argument,
              "holo_from_sequence needs an x-independent symbol");
  std::map<std::vector<int>, Mat> table;
  for (std::size_t i = 0; i < seq.dual.size(); ++i) table[seq.dual[i].label] = seq.blocks[0][i];
  HoloSymbol p;
  p.group = seq.group;
  p.epsilon = epsilon;
  p.order = seq.order_hint;
  double order = seq.order_hint;
  p.sample = [table, order](const RVec&, const GridPtr& grid, const std::vector<Irrep>& dual) {
    Symbol s = make_symbol(grid, dual, order);
    for (std::size_t i = 0; i < dual.size(); ++i) {
      auto it = table.find(dual[i].label);
      require(it != table.end(), errc::truncation,
              "sequence family sampled beyond its stored dual");
      for (std::size_t j = 0; j < s.blocks.size(); ++j) s.blocks[j][i] = it->second;
    }
    return s;
  };
  p.eval_point = [table](const TubePoint&, const Irrep& xi) -> Mat {
    auto it = table.find(xi.label);
    require(it != table.end(), errc::truncation,
            "sequence family evaluated beyond its stored dual");
    return it->second;
  };
  return p;
}

int find_node(const HaarGrid& grid, const GroupPoint& x) {
  for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
    if (grid.group.kind == GroupKind::torus) {
      double dmax = 0.0;
      for (int ax = 0; ax < x.angles.size(); ++ax) {
        double diff = std::remainder(grid.nodes[j].angles[ax] - x.angles[ax], 2.0 * M_PI);
        dmax = std::max(dmax, std::abs(diff));
      }
      if (dmax <= 1e-9) return int(j);
    } else {
      if ((grid.nodes[j].u - x.u).norm() <= 1e-9) return int(j);
    }
  }
  return -1;
}

namespace {

// Morera-type check: integrate p around small coordinate discs through
// sampled base points; vanishes for holomorphic families.
struct MoreraResult {
  double defect = 0.0;
  bool checked = false;
};

MoreraResult holomorphy_defect(const HoloSymbol& p, const YGrid& ys, double cutoff,
                               int grid_resolution) {
  MoreraResult res;
  const GroupSpec g = p.group;
  const int dim = g.lie_dim();
  if (!p.eval_point && g.kind != GroupKind::torus) return res;

  std::vector<Irrep> dual = enumerate_dual(g, cutoff);
  GridPtr grid = haar_grid(g, grid_resolution);
  const int ntheta = 24;

  std::vector<RVec> bases;
  bases.push_back(RVec::Zero(dim));
  if (!ys.nodes.empty()) {
    RVec far = ys.nodes.front();
    for (const auto& y : ys.nodes)
      if (y.norm() > far.norm()) far = y;
    bases.push_back(0.5 * far);
  }
  const std::size_t xnode = grid->nodes.size() > 1 ? 1 : 0;
  const GroupPoint x0 = grid->nodes[xnode];

  for (const auto& Y0 : bases) {
    const double room = p.epsilon - Y0.norm();
    if (room <= 1e-6) continue;
    const double r = std::min(0.4 * room, 0.25);
    for (int dir = 0; dir < dim; ++dir) {
      std::vector<Mat> integral(dual.size());
      std::vector<double> scale(dual.size(), 0.0);
      for (std::size_t i = 0; i < dual.size(); ++i)
        integral[i] = Mat::Zero(dual[i].dim, dual[i].dim);
      for (int it = 0; it < ntheta; ++it) {
        const double th = 2.0 * M_PI * it / ntheta;
        const cplx dw = kI * r * std::exp(kI * th) * (2.0 * M_PI / ntheta);
        TubePoint z;
        if (g.kind == GroupKind::torus) {
          RVec xx = x0.angles;
          RVec yy = Y0;
          xx[dir] += r * std::cos(th);
          yy[dir] += r * std::sin(th);
          z.base = torus_point(xx);
          z.imag = yy;
        } else {
          Eigen::Vector3d y3(Y0[0], Y0[1], Y0[2]);
          const cplx w = r * std::exp(kI * th);
          // exp(w X_dir) for complex w, using X^2 = -I/4
          Eigen::Matrix2cd ew = std::cos(0.5 * w) * Eigen::Matrix2cd::Identity() +
                                2.0 * std::sin(0.5 * w) * su2_basis(dir);
          z = su2_cartan(su2_exp_iy(y3) * x0.u * ew);
        }
        for (std::size_t i = 0; i < dual.size(); ++i) {
          Mat v = p.eval_point
                      ? p.eval_point(z, dual[i])
                      : symbol_value_at(p.sample(z.imag, grid, dual), z.base.angles, i);
          integral[i] += dw * v;
          scale[i] = std::max(scale[i], spectral_norm(v));
        }
      }
      for (std::size_t i = 0; i < dual.size(); ++i) {
        double d = spectral_norm(integral[i]) / (2.0 * M_PI * r * std::max(scale[i], 1e-12));
        res.defect = std::max(res.defect, d);
      }
    }
  }
  res.checked = true;
  return res;
}

}  // namespace

MembershipReport membership_check(const HoloSymbol& p, double d, const YGrid& ys,
                                  const std::vector<SeminormOrder>& orders, double cutoff,
                                  int grid_resolution) {
  require(!orders.empty(), errc::invalid_argument, "orders must be nonempty");
  std::vector<Irrep> dual1 = enumerate_dual(p.group, cutoff);
  std::vector<Irrep> dual2 = enumerate_dual(p.group, 2.0 * cutoff);
  GridPtr grid = haar_grid(p.group, grid_resolution);
  require_nyquist(*grid, dual2);

  MembershipReport rep;
  rep.entries.resize(orders.size());
  for (std::size_t o = 0; o < orders.size(); ++o) rep.entries[o].order = orders[o];

  for (const auto& Y : ys.nodes) {
    Symbol s1 = p.sample(Y, grid, dual1);
    Symbol s2 = p.sample(Y, grid, dual2);
    for (std::size_t o = 0; o < orders.size(); ++o) {
      rep.entries[o].sup_base = std::max(
          rep.entries[o].sup_base, symbol_seminorm(s1, d, orders[o].alpha, orders[o].beta));
      rep.entries[o].sup_doubled = std::max(
          rep.entries[o].sup_doubled, symbol_seminorm(s2, d, orders[o].alpha, orders[o].beta));
    }
  }
  bool all_stable = true;
  for (auto& e : rep.entries) {
    e.ratio = e.sup_doubled / std::max(e.sup_base, 1e-300);
    e.stable = e.sup_doubled <= 2.0 * e.sup_base + 1e-12;
    all_stable = all_stable && e.stable;
  }
  MoreraResult mr = holomorphy_defect(p, ys, cutoff, grid_resolution);
  rep.holomorphy_defect = mr.defect;
  rep.holomorphy_checked = mr.checked;
  rep.certified = all_stable && (!mr.checked || mr.defect <= 1e-8);
  return rep;
}

EllipticityReport ellipticity_check(const HoloSymbol& p, double d, const YGrid& ys, double cutoff,
                                    int grid_resolution) {
  std::vector<Irrep> dual = enumerate_dual(p.group, cutoff);
  GridPtr grid = haar_grid(p.group, grid_resolution);
  require_nyquist(*grid, dual);

  EllipticityReport rep;
  std::set<std::vector<int>> exceptional;
  double bound = 0.0, bound_inner = 0.0;

  std::vector<std::vector<double>> min_sv(ys.nodes.size());
  std::vector<Symbol> samples;
  samples.reserve(ys.nodes.size());
  for (const auto& Y : ys.nodes) samples.push_back(p.sample(Y, grid, dual));

  for (std::size_t i = 0; i < dual.size(); ++i) {
    for (std::size_t yi = 0; yi < samples.size(); ++yi) {
      for (std::size_t j = 0; j < samples[yi].blocks.size(); ++j) {
        if (smallest_singular(samples[yi].blocks[j][i]) < rep.singular_threshold) {
          exceptional.insert(dual[i].label);
          goto next_irrep;
        }
      }
    }
  next_irrep:;
  }

  for (std::size_t i = 0; i < dual.size(); ++i) {
    if (exceptional.count(dual[i].label)) continue;
    const double w = std::pow(dual[i].bracket(), d);
    for (std::size_t yi = 0; yi < samples.size(); ++yi) {
      for (std::size_t j = 0; j < samples[yi].blocks.size(); ++j) {
        const double inv = 1.0 / smallest_singular(samples[yi].blocks[j][i]);
        const double v = w * inv;
        if (v > bound) {
          bound = v;
          rep.worst_Y = ys.nodes[yi];
          rep.worst_node = int(j);
          rep.worst_label = dual[i].label;
        }
        if (dual[i].bracket() <= 0.5 * cutoff) bound_inner = std::max(bound_inner, v);
      }
    }
  }

  rep.exceptional.assign(exceptional.begin(), exceptional.end());
  rep.bound = bound;
  rep.bound_inner = bound_inner;
  rep.ratio = bound / std::max(bound_inner, 1e-300);
  bool f_stable = true;
  for (const auto& lab : rep.exceptional) {
    Irrep xi = p.group.kind == GroupKind::torus ? torus_irrep(lab) : su2_irrep(lab[0]);
    if (xi.bracket() > 0.5 * cutoff) f_stable = false;
  }
  rep.elliptic = f_stable && bound_inner > 0.0 && rep.ratio <= 2.0;
  return rep;
}

HoloSymbol default_q0(const HoloSymbol& p, double d, const EllipticityReport& rep) {
  require(rep.elliptic, errc::invalid_argument, "default_q0 needs an elliptic report");
  std::set<std::vector<int>> F(rep.exceptional.begin(), rep.exceptional.end());
  HoloSymbol q;
  q.group = p.group;
  q.epsilon = p.epsilon;
  q.order = -d;
  auto sp = p.sample;
  q.sample = [sp, F, d](const RVec& Y, const GridPtr& grid, const std::vector<Irrep>& dual) {
    Symbol s = sp(Y, grid, dual);
    Symbol out = s;
    out.order_hint = -d;
    for (std::size_t i = 0; i < dual.size(); ++i) {
      const bool in_f = F.count(dual[i].label) > 0;
      for (std::size_t j = 0; j < s.blocks.size(); ++j) {
        if (in_f)
          out.blocks[j][i] = Mat::Identity(dual[i].dim, dual[i].dim);
        else
          out.blocks[j][i] = s.blocks[j][i].partialPivLu().inverse();
      }
    }
    return out;
  };
  if (p.eval_point) {
    auto ep = p.eval_point;
    q.eval_point = [ep, F](const TubePoint& z, const Irrep& xi) -> Mat {
      if (F.count(xi.label)) return Mat::Identity(xi.dim, xi.dim);
      return ep(z, xi).partialPivLu().inverse();
    };
  }
  return q;
}

namespace {

Symbol parametrix_symbol_at(const HoloSymbol& p, const HoloSymbol& q0, int N, ParametrixSide side,
                            const RVec& Y, const GridPtr& grid, const std::vector<Irrep>& dual) {
  Symbol sp_req = p.sample(Y, grid, dual);
  Symbol sq_req = q0.sample(Y, grid, dual);
  const int band = std::max(x_band(sp_req), x_band(sq_req));
  const int margin = N * band;
  std::vector<Irrep> work =
      margin == 0 ? dual : enumerate_dual(p.group, enlarged_cutoff(p.group, dual, margin));
  Symbol sp = margin == 0 ? sp_req : p.sample(Y, grid, work);
  Symbol sq = margin == 0 ? sq_req : q0.sample(Y, grid, work);

  Symbol one = constant_symbol(grid, work, 1.0, 0.0);
  Symbol r = side == ParametrixSide::left ? symbol_sub(one, compose_exact(sq, sp))
                                          : symbol_sub(one, compose_exact(sp, sq));
  Symbol q = sq;
  Symbol term = sq;
  const double floor = 1e-13 * (1.0 + symbol_sup_norm(sq));
  for (int j = 1; j < N; ++j) {
    // remaining terms below rounding noise carry no information and their
    // measured bandwidth is meaningless
    if (symbol_sup_norm(r) < floor || symbol_sup_norm(term) < floor) break;
    term = side == ParametrixSide::left ? compose_exact(r, term) : compose_exact(term, r);
    q = symbol_add(q, term);
  }
  return restrict_dual(q, dual);
}

}  // namespace

HoloSymbol parametrix(const HoloSymbol& p, const HoloSymbol& q0, int N, ParametrixSide side,
                      double check_cutoff, int check_grid_resolution) {
  require(N >= 1, errc::invalid_argument, "parametrix needs N >= 1");
  // precondition: the one-step residual must fall off at the outer band
  {
    std::vector<Irrep> dual = enumerate_dual(p.group, check_cutoff);
    GridPtr grid = haar_grid(p.group, check_grid_resolution);
    RVec y0 = RVec::Zero(p.group.lie_dim());
    Symbol sp = p.sample(y0, grid, dual);
    Symbol sq = q0.sample(y0, grid, dual);
    Symbol one = constant_symbol(grid, dual, 1.0, 0.0);
    Symbol r = side == ParametrixSide::left ? symbol_sub(one, compose_exact(sq, sp))
                                            : symbol_sub(one, compose_exact(sp, sq));
    double certified_max = 0.0;
    for (std::size_t i = 0; i < r.dual.size(); ++i)
      if (r.is_certified(i)) certified_max = std::max(certified_max, r.dual[i].bracket());
    double outer = 0.0;
    for (std::size_t i = 0; i < r.dual.size(); ++i) {
      if (!r.is_certified(i) || r.dual[i].bracket() < 0.5 * certified_max) continue;
      for (std::size_t j = 0; j < r.blocks.size(); ++j)
        outer = std::max(outer, spectral_norm(r.blocks[j][i]));
    }
    require(outer < 1.0, errc::no_parametrix,
            "order-0 residual at the outer band is >= 1; no Neumann parametrix");
  }

  HoloSymbol q;
  q.group = p.group;
  q.epsilon = std::min(p.epsilon, q0.epsilon);
  q.order = q0.order;
  HoloSymbol pc = p, qc = q0;
  q.sample = [pc, qc, N, side](const RVec& Y, const GridPtr& grid,
                               const std::vector<Irrep>& dual) {
    return parametrix_symbol_at(pc, qc, N, side, Y, grid, dual);
  };
  return q;
}

ResidualReport parametrix_residual(const HoloSymbol& p, const HoloSymbol& q, int N,
                                   ParametrixSide side, const YGrid& ys, double cutoff_lo,
                                   double cutoff_hi, int grid_resolution) {
  GridPtr grid = haar_grid(p.group, grid_resolution);
  ResidualReport rep;
  for (int pass = 0; pass < 2; ++pass) {
    const double cutoff = pass == 0 ? cutoff_lo : cutoff_hi;
    std::vector<Irrep> dual = enumerate_dual(p.group, cutoff);
    double sup = 0.0;
    for (const auto& Y : ys.nodes) {
      // compose on an enlarged dual so the measured band is certified
      Symbol sq_req = q.sample(Y, grid, dual);
      Symbol sp_req = p.sample(Y, grid, dual);
      const int band = std::max(x_band(sp_req), x_band(sq_req));
      std::vector<Irrep> work =
          band == 0 ? dual : enumerate_dual(p.group, enlarged_cutoff(p.group, dual, band));
      Symbol sp = band == 0 ? sp_req : p.sample(Y, grid, work);
      Symbol sq = band == 0 ? sq_req : q.sample(Y, grid, work);
      Symbol one = constant_symbol(grid, work, 1.0, 0.0);
      Symbol res = side == ParametrixSide::left ? symbol_sub(compose_exact(sq, sp), one)
                                                : symbol_sub(compose_exact(sp, sq), one);
      Symbol r = restrict_dual(res, dual);
      sup = std::max(sup, symbol_seminorm(r, -double(N), {}, std::vector<int>(
                                                                std::size_t(p.group.lie_dim()), 0)));
    }
    if (pass == 0)
      rep.sup_base = sup;
    else
      rep.sup_doubled = sup;
  }
  rep.ratio = rep.sup_doubled / std::max(rep.sup_base, 1e-300);
  return rep;
}

LeadingTermResult leading_term_parametrix(const Symbol& pk, const HoloSymbol& pkm1, int N,
                                          const YGrid& ys, double cutoff, int grid_resolution) {
  for (std::size_t j = 1; j < pk.blocks.size(); ++j)
    for (std::size_t i = 0; i < pk.dual.size(); ++i)
      require(pk.blocks[j][i] == pk.blocks[0][i], errc::invalid_argument,
              "leading term must be independent of x");
  HoloSymbol combined = holo_sum(holo_from_sequence(pk, pkm1.epsilon), pkm1);
  combined.order = pk.order_hint;
  EllipticityReport rep = ellipticity_check(combined, pk.order_hint, ys, cutoff, grid_resolution);
  require(rep.elliptic, errc::no_parametrix,
          "leading term is not elliptic at the requested order");
  HoloSymbol q0 = default_q0(combined, pk.order_hint, rep);
  HoloSymbol q = parametrix(combined, q0, N, ParametrixSide::left, cutoff, grid_resolution);
  return {q, rep};
}

AsymptoticSumResult asymptotic_sum(const std::vector<HoloSymbol>& terms, double epsilon,
                                   const YGrid& ys, double cutoff, int grid_resolution) {
  require(!terms.empty(), errc::invalid_argument, "empty term list");
  for (std::size_t j = 1; j < terms.size(); ++j)
    require(terms[j].order < terms[j - 1].order, errc::invalid_argument,
            "orders must be strictly decreasing");

  const GroupSpec g = terms.front().group;
  const int n = g.lie_dim();
  const int half_ceil = (n + 1) / 2;
  std::vector<Irrep> dual = enumerate_dual(g, cutoff);
  GridPtr grid = haar_grid(g, grid_resolution);
  require_nyquist(*grid, dual);

  AsymptoticSumResult out;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const double dj = terms[j].order;
    const double sobolev_order = -dj - double(half_ceil);
    // x-derivative rows per sampled Y, reweighted during the bisection
    std::vector<Symbol> rows;
    for (const auto& Y : ys.nodes) {
      Symbol s = terms[j].sample(Y, grid, dual);
      for (const auto& beta : multi_indices_up_to(n, int(j)))
        rows.push_back(derivative_x(s, beta));
    }
    auto value = [&](double t) {
      double vmax = 0.0;
      for (const auto& w : rows) {
        for (std::size_t x = 0; x < w.blocks.size(); ++x) {
          double acc = 0.0;
          for (std::size_t i = 0; i < w.dual.size(); ++i) {
            const double tail = 1.0 - std::exp(-t * w.dual[i].eigenvalue);
            acc += w.dual[i].dim * std::pow(w.dual[i].bracket(), 2.0 * sobolev_order) *
                   tail * tail * w.blocks[x][i].squaredNorm();
          }
          vmax = std::max(vmax, std::sqrt(acc));
        }
      }
      return vmax;
    };
    const double bound = std::pow(2.0, -double(j) - 1.0);
    const double target = 0.98 * bound;
    double t = 1e6;
    if (value(t) > target) {
      double lo = 1e-9, hi = t;
      for (int it = 0; it < 100; ++it) {
        double mid = std::sqrt(lo * hi);
        if (value(mid) <= target)
          lo = mid;
        else
          hi = mid;
      }
      t = lo;
    }
    const double achieved = value(t);
    require(achieved < bound, errc::certificate, "heat cutoff selection missed its dyadic bound");
    out.t.push_back(t);
    out.achieved.push_back(achieved);
    out.bound.push_back(bound);
  }

  HoloSymbol sum;
  sum.group = g;
  sum.epsilon = epsilon;
  sum.order = terms.front().order;
  std::vector<HoloSymbol> tcopy = terms;
  std::vector<double> tsel = out.t;
  sum.sample = [tcopy, tsel](const RVec& Y, const GridPtr& grid,
                             const std::vector<Irrep>& dual) {
    Symbol acc = scale_by_heat_tail(tcopy[0].sample(Y, grid, dual), tsel[0]);
    for (std::size_t j = 1; j < tcopy.size(); ++j)
      acc = symbol_add(acc, scale_by_heat_tail(tcopy[j].sample(Y, grid, dual), tsel[j]));
    return acc;
  };
  bool have_points = true;
  for (const auto& trm : terms) have_points = have_points && bool(trm.eval_point);
  if (have_points) {
    sum.eval_point = [tcopy, tsel](const TubePoint& z, const Irrep& xi) -> Mat {
      Mat acc = Mat::Zero(xi.dim, xi.dim);
      for (std::size_t j = 0; j < tcopy.size(); ++j)
        acc += (1.0 - std::exp(-tsel[j] * xi.eigenvalue)) * tcopy[j].eval_point(z, xi);
      return acc;
    };
  }
  out.sum = sum;
  return out;
}

cplx holo_apply(const HoloSymbol& p, const FourierCoefficients& u, const TubePoint& z,
                const GridPtr& grid) {
  require(z.imag.norm() < p.epsilon, errc::out_of_tube, "evaluation point outside the tube");
  Symbol s = p.sample(z.imag, grid, u.dual);
  GroupPoint e = identity_point(GroupSpec{p.group.kind, p.group.n});
  const int node = find_node(*grid, z.base);
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < u.dual.size(); ++i) {
    TubePoint shift{e, z.imag};
    Mat tube_factor = irrep_eval_tube(u.dual[i], shift);
    Mat row;
    if (node >= 0)
      row = s.blocks[std::size_t(node)][i];
    else if (p.eval_point)
      row = p.eval_point(TubePoint{z.base, z.imag}, u.dual[i]);
    else
      row = symbol_value_at(s, z.base.angles, i);
    acc += double(u.dual[i].dim) *
           (irrep_eval(u.dual[i], z.base) * row * u.blocks[i] * tube_factor).trace();
  }
  return acc;
}

}  // namespace grauert
