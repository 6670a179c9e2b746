#include "grauert/serialize.hpp"

#include <fstream>

namespace grauert {

namespace {

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), errc::io, "bad matrix payload");
  const std::size_t rows = j.size();
  const std::size_t cols = j.at(0).size();
  Mat m{Eigen::Index(rows), Eigen::Index(cols)};
  for (std::size_t r = 0; r < rows; ++r) {
    require(j.at(r).size() == cols, errc::io, "ragged matrix payload");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& e = j.at(r).at(c);
      require(e.is_array() && e.size() == 2, errc::io, "matrix entries must be [re, im]");
      m(Eigen::Index(r), Eigen::Index(c)) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

Irrep irrep_from_label(const GroupSpec& g, const std::vector<int>& label) {
  if (g.kind == GroupKind::torus) {
    require(int(label.size()) == g.n, errc::io, "label dimension mismatch");
    return torus_irrep(label);
  }
  require(label.size() == 1, errc::io, "su2 label must be the doubled half-integer");
  return su2_irrep(label[0]);
}

}  // namespace

Json group_to_json(const GroupSpec& g) {
  if (g.kind == GroupKind::su2) return Json{{"kind", "su2"}};
  return Json{{"kind", "torus"}, {"n", g.n}};
}

GroupSpec group_from_json(const Json& j) {
  require(j.contains("kind"), errc::io, "group payload needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "su2") return su2_group();
  require(kind == "torus", errc::io, "unknown group kind");
  return torus_group(j.at("n").get<int>());
}

Json dual_to_json(const GroupSpec& g, const std::vector<Irrep>& dual) {
  Json labels = Json::array();
  for (const auto& xi : dual) labels.push_back(xi.label);
  return Json{{"group", group_to_json(g)}, {"labels", labels}};
}

std::vector<Irrep> dual_from_json(const Json& j, const GroupSpec& g) {
  std::vector<Irrep> dual;
  for (const auto& lab : j.at("labels")) dual.push_back(irrep_from_label(g, lab.get<std::vector<int>>()));
  return dual;
}

Json coeffs_to_json(const GroupSpec& g, const FourierCoefficients& a) {
  Json blocks = Json::array();
  for (const auto& m : a.blocks) {
    Json flat = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        flat.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    blocks.push_back(flat);
  }
  return Json{{"schema", "grauert.coefficients.v1"},
              {"dual", dual_to_json(g, a.dual)},
              {"blocks", blocks}};
}

FourierCoefficients coeffs_from_json(const Json& j) {
  require(j.value("schema", "") == "grauert.coefficients.v1", errc::io,
          "unexpected coefficients schema");
  GroupSpec g = group_from_json(j.at("dual").at("group"));
  FourierCoefficients a;
  a.dual = dual_from_json(j.at("dual"), g);
  const auto& blocks = j.at("blocks");
  require(blocks.size() == a.dual.size(), errc::io, "block count mismatch");
  for (std::size_t i = 0; i < a.dual.size(); ++i) {
    const int d = a.dual[i].dim;
    const auto& flat = blocks.at(i);
    require(int(flat.size()) == d * d, errc::io, "block shape mismatch");
    Mat m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        const auto& e = flat.at(std::size_t(r * d + c));
        m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
      }
    a.blocks.push_back(m);
  }
  return a;
}

Json symbol_to_json(const Symbol& p) {
  Json nodes = Json::array();
  for (const auto& row : p.blocks) {
    Json per_irrep = Json::array();
    for (const auto& m : row) {
      Json flat = Json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          flat.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
      per_irrep.push_back(flat);
    }
    nodes.push_back(per_irrep);
  }
  Json certified = Json::array();
  for (std::size_t i = 0; i < p.dual.size(); ++i) certified.push_back(p.is_certified(i));
  return Json{{"schema", "grauert.symbol.v1"},
              {"dual", dual_to_json(p.group, p.dual)},
              {"grid_resolution", p.grid->resolution},
              {"order_hint", p.order_hint},
              {"certified", certified},
              {"blocks", nodes}};
}

Symbol symbol_from_json(const Json& j) {
  require(j.value("schema", "") == "grauert.symbol.v1", errc::io, "unexpected symbol schema");
  GroupSpec g = group_from_json(j.at("dual").at("group"));
  std::vector<Irrep> dual = dual_from_json(j.at("dual"), g);
  GridPtr grid = haar_grid(g, j.at("grid_resolution").get<int>());
  Symbol p = make_symbol(grid, dual, j.at("order_hint").get<double>());
  const auto& nodes = j.at("blocks");
  require(nodes.size() == grid->nodes.size(), errc::io, "node count mismatch");
  for (std::size_t x = 0; x < nodes.size(); ++x) {
    const auto& per_irrep = nodes.at(x);
    require(per_irrep.size() == dual.size(), errc::io, "irrep count mismatch");
    for (std::size_t i = 0; i < dual.size(); ++i) {
      const int d = dual[i].dim;
      const auto& flat = per_irrep.at(i);
      require(int(flat.size()) == d * d, errc::io, "block shape mismatch");
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          const auto& e = flat.at(std::size_t(r * d + c));
          p.blocks[x][i](r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
  }
  if (j.contains("certified")) {
    p.certified.assign(dual.size(), 1);
    for (std::size_t i = 0; i < dual.size(); ++i)
      p.certified[i] = j.at("certified").at(i).get<bool>() ? 1 : 0;
  }
  return p;
}

Json expr_to_json(const ExprPtr& e) {
  switch (e->op) {
    case SymbolExpr::Op::constant:
      return Json{{"op", "const"}, {"re", e->value.real()}, {"im", e->value.imag()}};
    case SymbolExpr::Op::coord:
      return Json{{"op", "coord"}, {"mode", e->mode}};
    case SymbolExpr::Op::dual_poly: {
      Json terms = Json::array();
      for (const auto& t : e->poly)
        terms.push_back(Json{{"re", t.coeff.real()}, {"im", t.coeff.imag()}, {"powers", t.powers}});
      return Json{{"op", "dualpoly"}, {"terms", terms}};
    }
    case SymbolExpr::Op::casimir_poly: {
      Json coeffs = Json::array();
      for (const auto& c : e->casimir) coeffs.push_back(Json::array({c.real(), c.imag()}));
      return Json{{"op", "casimir"}, {"coeffs", coeffs}};
    }
    case SymbolExpr::Op::mat_literal: {
      Json entries = Json::array();
      for (const auto& [label, m] : e->entries)
        entries.push_back(Json{{"label", label}, {"matrix", mat_to_json(m)}});
      return Json{{"op", "matlit"}, {"entries", entries}};
    }
    case SymbolExpr::Op::sum:
    case SymbolExpr::Op::product: {
      Json kids = Json::array();
      for (const auto& k : e->kids) kids.push_back(expr_to_json(k));
      return Json{{"op", e->op == SymbolExpr::Op::sum ? "sum" : "product"}, {"terms", kids}};
    }
    case SymbolExpr::Op::power:
      return Json{{"op", "power"}, {"base", expr_to_json(e->kids.at(0))}, {"exponent", e->exponent}};
  }
  fail(errc::io, "bad expression node");
}

ExprPtr expr_from_json(const Json& j) {
  require(j.contains("op"), errc::io, "expression node needs an op");
  const std::string op = j.at("op").get<std::string>();
  if (op == "const") return expr_const(cplx(j.at("re").get<double>(), j.value("im", 0.0)));
  if (op == "coord") return expr_coord(j.at("mode").get<std::vector<int>>());
  if (op == "dualpoly") {
    std::vector<SymbolExpr::PolyTerm> terms;
    for (const auto& t : j.at("terms"))
      terms.push_back({cplx(t.at("re").get<double>(), t.value("im", 0.0)),
                       t.at("powers").get<std::vector<int>>()});
    return expr_dual_poly(terms);
  }
  if (op == "casimir") {
    std::vector<cplx> coeffs;
    for (const auto& c : j.at("coeffs"))
      coeffs.push_back(cplx(c.at(0).get<double>(), c.at(1).get<double>()));
    return expr_casimir(coeffs);
  }
  if (op == "matlit") {
    std::vector<std::pair<std::vector<int>, Mat>> entries;
    for (const auto& e : j.at("entries"))
      entries.emplace_back(e.at("label").get<std::vector<int>>(), mat_from_json(e.at("matrix")));
    return expr_mat_literal(entries);
  }
  if (op == "sum" || op == "product") {
    std::vector<ExprPtr> kids;
    for (const auto& k : j.at("terms")) kids.push_back(expr_from_json(k));
    return op == "sum" ? expr_sum(kids) : expr_product(kids);
  }
  if (op == "power")
    return expr_power(expr_from_json(j.at("base")), j.at("exponent").get<double>());
  fail(errc::io, "unknown expression op: " + op);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    fail(errc::io, "cannot parse " + path + ": " + ex.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  require(out.good(), errc::io, "cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string json_digest(const Json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace grauert
