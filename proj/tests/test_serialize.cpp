#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "grauert/serialize.hpp"

using namespace grauert;

TEST_CASE("group and dual round trips") {
  for (auto g : {torus_group(2), su2_group()}) {
    auto j = group_to_json(g);
    CHECK(group_from_json(j) == g);
    auto dual = enumerate_dual(g, g.kind == GroupKind::torus ? 5.0 : 20.2);
    auto dj = dual_to_json(g, dual);
    auto back = dual_from_json(dj, g);
    REQUIRE(back.size() == dual.size());
    for (std::size_t i = 0; i < dual.size(); ++i) CHECK(back[i] == dual[i]);
  }
  CHECK(group_to_json(torus_group(1)).dump() == R"({"kind":"torus","n":1})");
  CHECK(group_to_json(su2_group()).dump() == R"({"kind":"su2"})");
}

TEST_CASE("coefficients round trip exactly") {
  for (auto g : {torus_group(1), su2_group()}) {
    auto dual = enumerate_dual(g, g.kind == GroupKind::torus ? 20.0 : 20.2);
    auto a = random_band_limited(dual, 99, 1.5);
    auto j = coeffs_to_json(g, a);
    auto b = coeffs_from_json(j);
    REQUIRE(b.dual.size() == a.dual.size());
    for (std::size_t i = 0; i < a.dual.size(); ++i) CHECK(a.blocks[i] == b.blocks[i]);
    // serialization is deterministic
    CHECK(j.dump() == coeffs_to_json(g, a).dump());
    CHECK(json_digest(j) == json_digest(coeffs_to_json(g, a)));
  }
}

TEST_CASE("symbols round trip exactly") {
  auto g = su2_group();
  auto grid = haar_grid(g, 2);
  auto dual = enumerate_dual(g, 7.0);
  auto p = symbol_from_expr(
      expr_sum({expr_casimir({1.0, 0.5}),
                expr_product({expr_const(cplx(0, 0.2)), expr_coord_su2(1, 0, 0)})}),
      grid, dual, 2.0);
  p.certified.assign(dual.size(), 1);
  p.certified[dual.size() - 1] = 0;
  auto q = symbol_from_json(symbol_to_json(p));
  CHECK(q.order_hint == p.order_hint);
  CHECK(q.grid->resolution == p.grid->resolution);
  REQUIRE(q.dual.size() == p.dual.size());
  for (std::size_t j = 0; j < p.blocks.size(); ++j)
    for (std::size_t i = 0; i < p.dual.size(); ++i) CHECK(q.blocks[j][i] == p.blocks[j][i]);
  CHECK(!q.is_certified(dual.size() - 1));
}

TEST_CASE("expression round trip and evaluation equivalence") {
  std::vector<SymbolExpr::PolyTerm> terms = {{cplx(0, 1), {1}}, {cplx(0.5, 0), {0}}};
  auto e = expr_sum({expr_product({expr_coord({1}), expr_dual_poly(terms)}),
                     expr_power(expr_casimir({1.0, 0.0, 1.0}), -0.5),
                     expr_const(cplx(2.0, -1.0))});
  auto j = expr_to_json(e);
  auto back = expr_from_json(j);
  CHECK(expr_to_json(back).dump() == j.dump());

  auto g = torus_group(1);
  auto dual = enumerate_dual(g, 20.0);
  TubePoint z{torus_point(RVec::Constant(1, 0.77)), RVec::Constant(1, 0.15)};
  for (const auto& xi : dual)
    CHECK(std::abs(expr_eval(e, g, z, xi)(0, 0) - expr_eval(back, g, z, xi)(0, 0)) == 0.0);

  auto m = expr_mat_literal({{{2}, Mat::Identity(3, 3) * cplx(0, 2)}});
  auto mb = expr_from_json(expr_to_json(m));
  auto gs = su2_group();
  TubePoint zs{identity_point(gs), RVec::Zero(3)};
  CHECK((expr_eval(mb, gs, zs, su2_irrep(2)) - cplx(0, 2) * Mat::Identity(3, 3)).norm() == 0.0);
  CHECK(expr_eval(mb, gs, zs, su2_irrep(1)).norm() == 0.0);

  CHECK_THROWS_AS(expr_from_json(Json{{"op", "unknown"}}), Error);
  CHECK_THROWS_AS(expr_power(m, 2.0), Error);  // matrix literal is not scalar
}
