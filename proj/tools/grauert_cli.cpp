#include <filesystem>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "grauert/holo.hpp"
#include "grauert/serialize.hpp"
#include "grauert/spectral.hpp"
#include "grauert/tube.hpp"

namespace fs = std::filesystem;
using namespace grauert;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  double cutoff = 20.0;
  double epsilon = 0.5;
  bool quiet = false;
  Json config = Json::object();

  bool has(const std::string& key) const { return config.contains(key); }
  template <typename T>
  T get(const std::string& key, T fallback) const {
    return config.value(key, fallback);
  }
};

GroupSpec group_of(const Options& opt) {
  if (opt.has("group")) return group_from_json(opt.config.at("group"));
  return torus_group(1);
}

void emit(const Options& opt, const std::string& op, Json record) {
  record["schema"] = "grauert.record.v1";
  record["op"] = op;
  record["config_digest"] = json_digest(opt.config);
  fs::create_directories(opt.out_dir);
  save_json_file(opt.out_dir + "/" + op + ".json", record);
  if (!opt.quiet) std::cout << record.dump(2) << "\n";
}

void write_csv(const Options& opt, const std::string& name,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  fs::create_directories(opt.out_dir);
  std::ofstream out(opt.out_dir + "/" + name);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  out.precision(17);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

int grid_resolution(const Options& opt, const GroupSpec& g, const std::vector<Irrep>& dual) {
  if (opt.has("grid_resolution")) return opt.config.at("grid_resolution").get<int>();
  const int band = dual_band(dual);
  return g.kind == GroupKind::torus ? std::max(4 * band + 9, 16) : (band + 3) / 2 + 1;
}

ExprPtr symbol_expr(const Options& opt, const std::string& key) {
  require(opt.has(key), errc::invalid_argument, "config needs a '" + key + "' expression");
  return expr_from_json(opt.config.at(key));
}

YGrid default_ygrid(const Options& opt, const GroupSpec& g) {
  const double factor = opt.get("ygrid_radius_factor", 0.95);
  const int count = opt.get("ygrid_count", 3);
  return ygrid_mesh(g.lie_dim(), factor * opt.epsilon, count);
}

FourierCoefficients seeded_function(const Options& opt, const std::vector<Irrep>& dual,
                                    int band_margin, std::uint64_t salt) {
  const double decay = dual.front().kind == GroupKind::torus ? 2.0 : 4.0;
  auto f = random_band_limited(dual, opt.seed + salt, decay);
  const int band = dual_band(dual) - band_margin;
  for (std::size_t i = 0; i < dual.size(); ++i) {
    int b = 0;
    if (dual[i].kind == GroupKind::torus) {
      for (int kj : dual[i].label) b = std::max(b, std::abs(kj));
    } else {
      b = dual[i].twol();
    }
    if (b > band) f.blocks[i].setZero();
  }
  return f;
}

// ---- commands --------------------------------------------------------------

int cmd_dual(const Options& opt) {
  GroupSpec g = group_of(opt);
  auto dual = enumerate_dual(g, opt.cutoff);
  Json rows = Json::array();
  for (const auto& xi : dual)
    rows.push_back(Json{{"label", xi.label},
                        {"dim", xi.dim},
                        {"eigenvalue", xi.eigenvalue},
                        {"bracket", xi.bracket()}});
  emit(opt, "dual", Json{{"group", group_to_json(g)}, {"cutoff", opt.cutoff}, {"irreps", rows}});
  return 0;
}

int cmd_apply(const Options& opt) {
  GroupSpec g = group_of(opt);
  auto dual = enumerate_dual(g, opt.cutoff);
  auto grid = haar_grid(g, grid_resolution(opt, g, dual));
  Symbol p = symbol_from_expr(symbol_expr(opt, "symbol"), grid, dual, opt.get("order", 0.0));
  auto f = seeded_function(opt, dual, x_band(p) + 1, 11);
  auto u = fourier_inverse(f, grid);
  auto v = quantize_apply(p, u);
  auto vf = fourier_forward(v, dual);
  save_json_file(opt.out_dir + "/apply_output.json", coeffs_to_json(g, vf));
  emit(opt, "apply",
       Json{{"group", group_to_json(g)},
            {"cutoff", opt.cutoff},
            {"input_l2", l2_norm(u)},
            {"output_l2", l2_norm(v)},
            {"output", "apply_output.json"}});
  return 0;
}

int cmd_compose(const Options& opt) {
  GroupSpec g = group_of(opt);
  auto dual = enumerate_dual(g, opt.cutoff);
  auto grid = haar_grid(g, grid_resolution(opt, g, dual));
  Symbol p = symbol_from_expr(symbol_expr(opt, "symbol"), grid, dual, opt.get("order", 0.0));
  Symbol q = symbol_from_expr(symbol_expr(opt, "symbol2"), grid, dual, opt.get("order2", 0.0));
  Symbol pq = compose_exact(p, q);
  save_json_file(opt.out_dir + "/compose_symbol.json", symbol_to_json(pq));

  auto f = seeded_function(opt, dual, x_band(p) + x_band(q) + 1, 23);
  auto u = fourier_inverse(f, grid);
  GridFunction lhs = quantize_apply(pq, u);
  GridFunction rhs = quantize_apply(p, quantize_apply(q, u));
  GridFunction diff{lhs.grid, lhs.values - rhs.values};
  const double defect = l2_norm(diff) / std::max(l2_norm(u), 1e-300);
  Json certified = Json::array();
  for (std::size_t i = 0; i < pq.dual.size(); ++i)
    if (pq.is_certified(i)) certified.push_back(pq.dual[i].label);
  emit(opt, "compose",
       Json{{"group", group_to_json(g)},
            {"cutoff", opt.cutoff},
            {"operator_side_defect", defect},
            {"certified_labels", certified},
            {"symbol", "compose_symbol.json"}});
  require(defect <= opt.get("tolerance", 1e-8), errc::certificate,
          "operator-side composition defect above tolerance");
  return 0;
}

int cmd_adjoint(const Options& opt) {
  GroupSpec g = group_of(opt);
  auto dual = enumerate_dual(g, opt.cutoff);
  auto grid = haar_grid(g, grid_resolution(opt, g, dual));
  Symbol p = symbol_from_expr(symbol_expr(opt, "symbol"), grid, dual, opt.get("order", 0.0));
  Symbol padj = adjoint_exact(p);
  save_json_file(opt.out_dir + "/adjoint_symbol.json", symbol_to_json(padj));

  auto u = fourier_inverse(seeded_function(opt, dual, x_band(p) + 1, 31), grid);
  auto v = fourier_inverse(seeded_function(opt, dual, x_band(p) + 1, 37), grid);
  const cplx lhs = l2_inner(quantize_apply(p, u), v);
  const cplx rhs = l2_inner(u, quantize_apply(padj, v));
  const double defect = std::abs(lhs - rhs) / std::max(l2_norm(u) * l2_norm(v), 1e-300);
  emit(opt, "adjoint",
       Json{{"group", group_to_json(g)},
            {"duality_defect", defect},
            {"symbol", "adjoint_symbol.json"}});
  require(defect <= opt.get("tolerance", 1e-8), errc::certificate,
          "adjoint duality defect above tolerance");
  return 0;
}

int cmd_elliptic(const Options& opt) {
  GroupSpec g = group_of(opt);
  const double d = opt.get("order", 1.0);
  auto p = holo_from_expr(symbol_expr(opt, "symbol"), g, opt.epsilon, d);
  auto dual = enumerate_dual(g, opt.cutoff);
  auto rep =
      ellipticity_check(p, d, default_ygrid(opt, g), opt.cutoff, grid_resolution(opt, g, dual));
  Json f = Json::array();
  for (const auto& lab : rep.exceptional) f.push_back(lab);
  emit(opt, "elliptic",
       Json{{"group", group_to_json(g)},
            {"order", d},
            {"epsilon", opt.epsilon},
            {"elliptic", rep.elliptic},
            {"exceptional", f},
            {"bound", rep.bound},
            {"bound_inner", rep.bound_inner},
            {"ratio", rep.ratio},
            {"worst_label", rep.worst_label}});
  require(rep.elliptic, errc::certificate, "symbol is not elliptic at the requested order");
  return 0;
}

int cmd_parametrix(const Options& opt) {
  GroupSpec g = group_of(opt);
  const double d = opt.get("order", 1.0);
  const int N = opt.get("N", 3);
  const auto side = opt.get<std::string>("side", "left") == "right" ? ParametrixSide::right
                                                                    : ParametrixSide::left;
  auto p = holo_from_expr(symbol_expr(opt, "symbol"), g, opt.epsilon, d);
  auto dual = enumerate_dual(g, opt.cutoff);
  const int res = grid_resolution(opt, g, dual);
  YGrid ys = default_ygrid(opt, g);
  auto rep = ellipticity_check(p, d, ys, opt.cutoff, res);
  require(rep.elliptic, errc::certificate, "symbol is not elliptic at the requested order");
  auto q0 = default_q0(p, d, rep);

  std::vector<std::vector<double>> rows;
  Json table = Json::array();
  for (int n = 1; n <= N; ++n) {
    auto q = parametrix(p, q0, n, side, opt.cutoff, res);
    auto rr = parametrix_residual(p, q, n, side, ys, opt.cutoff, 2.0 * opt.cutoff, res);
    rows.push_back({double(n), rr.sup_base, rr.sup_doubled, rr.ratio});
    table.push_back(Json{{"N", n},
                         {"residual_sup", rr.sup_base},
                         {"residual_sup_doubled", rr.sup_doubled},
                         {"ratio", rr.ratio}});
  }
  write_csv(opt, "parametrix_residuals.csv",
            {"N", "residual_sup", "residual_sup_doubled", "ratio"}, rows);
  emit(opt, "parametrix",
       Json{{"group", group_to_json(g)},
            {"order", d},
            {"side", side == ParametrixSide::left ? "left" : "right"},
            {"elliptic_bound", rep.bound},
            {"residuals", table},
            {"csv", "parametrix_residuals.csv"}});
  for (const auto& row : rows)
    require(row[3] <= 2.0, errc::certificate, "residual order test failed the two-cutoff ratio");
  return 0;
}

int cmd_asum(const Options& opt) {
  GroupSpec g = group_of(opt);
  require(opt.has("symbols"), errc::invalid_argument, "config needs a 'symbols' list");
  std::vector<HoloSymbol> terms;
  for (const auto& item : opt.config.at("symbols"))
    terms.push_back(holo_from_expr(expr_from_json(item.at("expr")), g, opt.epsilon,
                                   item.at("order").get<double>()));
  auto dual = enumerate_dual(g, opt.cutoff);
  auto res = asymptotic_sum(terms, opt.epsilon, default_ygrid(opt, g), opt.cutoff,
                            grid_resolution(opt, g, dual));
  Json table = Json::array();
  for (std::size_t j = 0; j < res.t.size(); ++j)
    table.push_back(
        Json{{"j", j}, {"t", res.t[j]}, {"tail", res.achieved[j]}, {"bound", res.bound[j]}});
  emit(opt, "asum", Json{{"group", group_to_json(g)}, {"terms", table}});
  return 0;
}

int cmd_power(const Options& opt) {
  GroupSpec g = group_of(opt);
  auto dual = enumerate_dual(g, opt.cutoff);
  auto A = laplacian_operator(dual);
  const cplx z(opt.get("z_re", 0.5), opt.get("z_im", 0.0));
  const int k = opt.get("k", 1);
  const double R = opt.get("R", 0.5);
  const int Q = opt.get("Q", 400);
  auto res = complex_power_contour(A, z, k, R, Q);
  auto res2 = complex_power_contour(A, z, k, R, 2 * Q);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < dual.size(); ++i) {
    const double mu = std::abs(A.action[i](0, 0));
    const cplx direct = mu > 1e-12 ? std::pow(cplx(mu, 0.0), z) : cplx(0, 0);
    rows.push_back({mu, res.op.action[i](0, 0).real(), direct.real(),
                    std::abs(res.op.action[i](0, 0) - direct)});
  }
  write_csv(opt, "power_table.csv", {"eigenvalue", "contour", "spectral", "abs_error"}, rows);
  emit(opt, "power",
       Json{{"z", Json::array({z.real(), z.imag()})},
            {"k", k},
            {"R", R},
            {"Q", Q},
            {"defect", res.reported_defect},
            {"defect_doubled_Q", res2.reported_defect},
            {"csv", "power_table.csv"}});
  require(res.reported_defect <= opt.get("tolerance", 1e-6), errc::certificate,
          "contour power misses the spectral oracle");
  return 0;
}

int cmd_semigroup(const Options& opt) {
  GroupSpec g = group_of(opt);
  auto dual = enumerate_dual(g, opt.cutoff);
  auto A = laplacian_operator(dual);
  const cplx z(opt.get("z_re", 0.5), opt.get("z_im", 0.0));
  const double t = opt.get("t", 0.3);
  const double R = opt.get("R", 0.5);
  const int Q = opt.get("Q", 400);
  auto res = exp_power_contour(A, t, z, R, Q);
  auto res2 = exp_power_contour(A, t, z, R, 2 * Q);
  emit(opt, "semigroup",
       Json{{"t", t},
            {"z", Json::array({z.real(), z.imag()})},
            {"R", R},
            {"Q", Q},
            {"defect", res.reported_defect},
            {"defect_doubled_Q", res2.reported_defect}});
  require(res.reported_defect <= opt.get("tolerance", 1e-6), errc::certificate,
          "contour semigroup misses the spectral oracle");
  return 0;
}

int cmd_poisson(const Options& opt) {
  GroupSpec g = group_of(opt);
  auto dual = enumerate_dual(g, opt.cutoff);
  auto spec = make_tube(g, opt.epsilon, opt.get("ball_degree", 8));
  auto f = seeded_function(opt, dual, 0, 41);
  auto pf = poisson_transform(f, spec);
  save_json_file(opt.out_dir + "/poisson_coefficients.json", coeffs_to_json(g, pf.coeffs));
  auto rf = restrict_boundary(pf);
  double factor_defect = 0.0;
  for (std::size_t i = 0; i < dual.size(); ++i) {
    Mat expect = f.blocks[i] * std::exp(-opt.epsilon * std::sqrt(dual[i].eigenvalue));
    factor_defect = std::max(factor_defect, (rf.blocks[i] - expect).norm());
  }
  Json record{{"group", group_to_json(g)},
              {"epsilon", opt.epsilon},
              {"factorization_defect", factor_defect},
              {"coefficients", "poisson_coefficients.json"}};
  if (g.kind == GroupKind::torus) {
    record["hl2_norm"] = hl2_norm(pf, spec);
    record["hh_norm_s2"] = hh_norm(pf, 2.0, spec);
    auto [c1, c2] = hh_equivalence_constants(spec, dual, opt.get("s", 0.0));
    record["equivalence_c1"] = c1;
    record["equivalence_c2"] = c2;
  }
  emit(opt, "poisson", record);
  return 0;
}

int cmd_diagram(const Options& opt) {
  GroupSpec g = group_of(opt);
  auto dual = enumerate_dual(g, opt.cutoff);
  auto spec = make_tube(g, opt.epsilon, opt.get("ball_degree", 8));
  const double s = opt.get("s", 0.0);
  const int ntests = opt.get("tests", 5);
  std::vector<FourierCoefficients> tests;
  for (int i = 0; i < ntests; ++i) tests.push_back(seeded_function(opt, dual, 4, 100 + i));

  double defect = 0.0;
  double tolerance = 0.0;
  std::string kind;
  if (opt.has("symbol")) {
    kind = "symbol";
    auto p = holo_from_expr(symbol_expr(opt, "symbol"), g, opt.epsilon, opt.get("order", 0.0));
    auto grid = haar_grid(g, grid_resolution(opt, g, dual));
    defect = diagram_defect(p, s, spec, grid, tests);
    tolerance = opt.get("tolerance", 1e-8);
  } else {
    kind = opt.get<std::string>("multiplier", "poisson");
    SpectralOperator A;
    if (kind == "poisson")
      A = poisson_multiplier(dual, opt.get("t", 0.5));
    else if (kind == "bessel")
      A = bessel_multiplier(dual, opt.get("bessel_s", 1.0));
    else if (kind == "heat")
      A = multiplier(dual, [&](double l) { return cplx(std::exp(-opt.get("t", 0.5) * l), 0.0); });
    else if (kind == "laplacian")
      A = laplacian_operator(dual);
    else if (kind == "laplacian_parametrix")
      A = laplacian_parametrix(dual);
    else
      fail(errc::invalid_argument, "unknown multiplier: " + kind);
    defect = diagram_defect(A, s, spec, tests);
    tolerance = opt.get("tolerance", 1e-10);
  }
  emit(opt, "diagram",
       Json{{"group", group_to_json(g)},
            {"operator", kind},
            {"s", s},
            {"epsilon", opt.epsilon},
            {"defect", defect},
            {"tolerance", tolerance}});
  require(defect <= tolerance, errc::certificate, "extension diagram defect above tolerance");
  return 0;
}

int cmd_halfwave(const Options& opt) {
  GroupSpec g = group_of(opt);
  require(g.kind == GroupKind::torus && g.n == 1, errc::unsupported,
          "half-wave ladder runs on the one-dimensional torus");
  auto spec = make_tube(g, opt.epsilon, 6);
  TubePoint z{torus_point(RVec::Constant(1, opt.get("x_re", 0.0))),
              RVec::Constant(1, opt.get("x_im", 0.0))};
  auto res = half_wave_kernel(z, spec, opt.get("halfwave_cutoff", 16.0));
  Json deltas = Json::array();
  for (double d : res.deltas) deltas.push_back(std::isfinite(d) ? Json(d) : Json("inf"));
  emit(opt, "halfwave",
       Json{{"x_re", opt.get("x_re", 0.0)},
            {"x_im", opt.get("x_im", 0.0)},
            {"epsilon", opt.epsilon},
            {"value", Json::array({res.value.real(), res.value.imag()})},
            {"deltas", deltas},
            {"growth", std::isfinite(res.growth) ? Json(res.growth) : Json("inf")},
            {"diverged", res.diverged}});
  require(!res.diverged, errc::divergence, "partial sums diverge at this point");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-symbol calculus workbench on compact groups and their tubes"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--config", opt.config_path, "JSON experiment configuration");
  app.add_option("--out", opt.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", opt.seed, "random seed");
  auto* cutoff_opt = app.add_option("--cutoff", opt.cutoff, "dual bracket cutoff");
  auto* eps_opt = app.add_option("--eps", opt.epsilon, "tube radius");
  app.add_flag("--quiet", opt.quiet, "suppress stdout records");

  std::map<std::string, int (*)(const Options&)> commands = {
      {"dual", cmd_dual},         {"apply", cmd_apply},       {"compose", cmd_compose},
      {"adjoint", cmd_adjoint},   {"elliptic", cmd_elliptic}, {"parametrix", cmd_parametrix},
      {"asum", cmd_asum},         {"power", cmd_power},       {"semigroup", cmd_semigroup},
      {"poisson", cmd_poisson},   {"diagram", cmd_diagram},   {"halfwave", cmd_halfwave}};
  for (auto& [name, fn] : commands) app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!opt.config_path.empty()) {
      opt.config = load_json_file(opt.config_path);
      require(opt.config.value("schema", "grauert.config.v1") == "grauert.config.v1", errc::io,
              "unexpected config schema");
      if (cutoff_opt->count() == 0 && opt.config.contains("cutoff"))
        opt.cutoff = opt.config.at("cutoff").get<double>();
      if (eps_opt->count() == 0 && opt.config.contains("epsilon"))
        opt.epsilon = opt.config.at("epsilon").get<double>();
      if (seed_opt->count() == 0 && opt.config.contains("seed"))
        opt.seed = opt.config.at("seed").get<std::uint64_t>();
      if (opt.config.contains("out") && opt.out_dir == "out")
        opt.out_dir = opt.config.at("out").get<std::string>();
    }
    opt.config["cutoff"] = opt.cutoff;
    opt.config["epsilon"] = opt.epsilon;
    opt.config["seed"] = opt.seed;

    for (auto& [name, fn] : commands)
      if (app.got_subcommand(name)) return fn(opt);
    return 2;
  } catch (const Error& e) {
    Json err{{"schema", "grauert.error.v1"},
             {"code", e.exit_code()},
             {"name", errc_name(e.code())},
             {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    std::error_code ignore;
    fs::create_directories(opt.out_dir, ignore);
    save_json_file(opt.out_dir + "/error.json", err);
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
