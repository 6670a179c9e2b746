#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "grauert/holo.hpp"
#include "grauert/serialize.hpp"
#include "grauert/spectral.hpp"
#include "grauert/tube.hpp"

namespace py = pybind11;
using namespace grauert;

namespace {

ExprPtr expr_from_string(const std::string& text) { return expr_from_json(Json::parse(text)); }

TubePoint make_tube_point(const GroupPoint& x, const RVec& y) { return TubePoint{x, y}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "matrix-symbol calculus on compact groups and their Grauert tubes";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<GroupSpec>(m, "GroupSpec")
      .def_property_readonly("name", &group_name)
      .def_property_readonly("lie_dim", &GroupSpec::lie_dim)
      .def("__repr__", [](const GroupSpec& g) { return "<GroupSpec " + group_name(g) + ">"; });
  m.def("torus_group", &torus_group, py::arg("n"));
  m.def("su2_group", &su2_group);

  py::class_<Irrep>(m, "Irrep")
      .def_readonly("label", &Irrep::label)
      .def_readonly("dim", &Irrep::dim)
      .def_readonly("eigenvalue", &Irrep::eigenvalue)
      .def_property_readonly("bracket", &Irrep::bracket)
      .def("__repr__", [](const Irrep& xi) { return "<Irrep " + irrep_name(xi) + ">"; });
  m.def("enumerate_dual", &enumerate_dual, py::arg("group"), py::arg("cutoff"));

  py::class_<GroupPoint>(m, "GroupPoint")
      .def_readonly("angles", &GroupPoint::angles)
      .def_property_readonly("matrix", [](const GroupPoint& x) { return Eigen::MatrixXcd(x.u); });
  m.def("torus_point", &torus_point, py::arg("angles"));
  m.def("su2_point", [](const Eigen::MatrixXcd& u) {
    require(u.rows() == 2 && u.cols() == 2, errc::invalid_argument, "need a 2x2 matrix");
    return su2_point(Eigen::Matrix2cd(u));
  });
  m.def("identity_point", &identity_point);
  m.def("group_mul", &group_mul);
  m.def("group_inv", &group_inv);

  py::class_<TubePoint>(m, "TubePoint")
      .def(py::init(&make_tube_point), py::arg("base"), py::arg("imag"))
      .def_readonly("base", &TubePoint::base)
      .def_readonly("imag", &TubePoint::imag);

  m.def("irrep_eval", &irrep_eval);
  m.def("irrep_eval_tube", &irrep_eval_tube);
  m.def("su2_wigner", [](int twol, const Eigen::MatrixXcd& u) {
    return su2_wigner(twol, Eigen::Matrix2cd(u));
  });

  py::class_<HaarGrid, std::shared_ptr<HaarGrid>>(m, "HaarGrid")
      .def_readonly("resolution", &HaarGrid::resolution)
      .def_property_readonly("size", [](const HaarGrid& g) { return g.nodes.size(); })
      .def_readonly("weights", &HaarGrid::weights)
      .def("node", [](const HaarGrid& g, std::size_t i) { return g.nodes.at(i); });
  m.def("haar_grid", [](const GroupSpec& g, int resolution) {
    return std::const_pointer_cast<HaarGrid>(haar_grid(g, resolution));
  }, py::arg("group"), py::arg("resolution"));

  py::class_<FourierCoefficients>(m, "FourierCoefficients")
      .def_readonly("dual", &FourierCoefficients::dual)
      .def_readonly("blocks", &FourierCoefficients::blocks);
  py::class_<GridFunction>(m, "GridFunction")
      .def_readonly("values", &GridFunction::values)
      .def_readonly("grid", &GridFunction::grid);
  m.def("grid_function", [](const GridPtr& grid, const CVec& values) {
    require(values.size() == Eigen::Index(grid->nodes.size()), errc::invalid_argument,
            "value count does not match node count");
    return GridFunction{grid, values};
  });
  m.def("fourier_forward", &fourier_forward);
  m.def("fourier_inverse", &fourier_inverse);
  m.def("sobolev_norm", &sobolev_norm);
  m.def("sequence_norm", &sequence_norm);
  m.def("l2_norm", &l2_norm);
  m.def("random_band_limited", &random_band_limited, py::arg("dual"), py::arg("seed"),
        py::arg("decay"));

  py::class_<Symbol>(m, "Symbol")
      .def_readonly("dual", &Symbol::dual)
      .def_readonly("order_hint", &Symbol::order_hint)
      .def("block", [](const Symbol& p, std::size_t node, std::size_t irrep) {
        return p.blocks.at(node).at(irrep);
      })
      .def("certified", [](const Symbol& p, std::size_t i) { return p.is_certified(i); });
  m.def("symbol_from_expr", [](const std::string& expr_json, const GridPtr& grid,
                               const std::vector<Irrep>& dual, double order) {
    return symbol_from_expr(expr_from_string(expr_json), grid, dual, order);
  });
  m.def("constant_symbol", &constant_symbol);
  m.def("quantize_apply", &quantize_apply);
  m.def("compose_exact", &compose_exact);
  m.def("adjoint_exact", &adjoint_exact);
  m.def("delta_xi", &delta_xi);
  m.def("derivative_x", &derivative_x);
  m.def("symbol_seminorm", &symbol_seminorm);
  m.def("leibniz_defect", &leibniz_defect);
  m.def("asymptotic_compose", &asymptotic_compose);
  m.def("x_band", &x_band);
  m.def("diag_index", &diag_index);

  py::class_<YGrid>(m, "YGrid")
      .def_readonly("nodes", &YGrid::nodes)
      .def_readonly("weights", &YGrid::weights)
      .def_readonly("radius", &YGrid::radius);
  m.def("ygrid_mesh", &ygrid_mesh);
  m.def("ball_quadrature", &ball_quadrature);

  py::class_<HoloSymbol>(m, "HoloSymbol")
      .def_readonly("epsilon", &HoloSymbol::epsilon)
      .def_readonly("order", &HoloSymbol::order)
      .def("sample", [](const HoloSymbol& p, const RVec& y, const GridPtr& grid,
                        const std::vector<Irrep>& dual) { return p.sample(y, grid, dual); });
  m.def("holo_from_expr", [](const std::string& expr_json, const GroupSpec& g, double eps,
                             double order) {
    return holo_from_expr(expr_from_string(expr_json), g, eps, order);
  });

  py::class_<SeminormOrder>(m, "SeminormOrder")
      .def(py::init([](const DualIndex& alpha, const std::vector<int>& beta) {
        return SeminormOrder{alpha, beta};
      }));
  py::class_<MembershipEntry>(m, "MembershipEntry")
      .def_readonly("sup_base", &MembershipEntry::sup_base)
      .def_readonly("sup_doubled", &MembershipEntry::sup_doubled)
      .def_readonly("ratio", &MembershipEntry::ratio)
      .def_readonly("stable", &MembershipEntry::stable);
  py::class_<MembershipReport>(m, "MembershipReport")
      .def_readonly("entries", &MembershipReport::entries)
      .def_readonly("holomorphy_defect", &MembershipReport::holomorphy_defect)
      .def_readonly("holomorphy_checked", &MembershipReport::holomorphy_checked)
      .def_readonly("certified", &MembershipReport::certified);
  m.def("membership_check", &membership_check);

  py::class_<EllipticityReport>(m, "EllipticityReport")
      .def_readonly("elliptic", &EllipticityReport::elliptic)
      .def_readonly("exceptional", &EllipticityReport::exceptional)
      .def_readonly("bound", &EllipticityReport::bound)
      .def_readonly("bound_inner", &EllipticityReport::bound_inner)
      .def_readonly("ratio", &EllipticityReport::ratio)
      .def_readonly("worst_label", &EllipticityReport::worst_label);
  m.def("ellipticity_check", &ellipticity_check);
  m.def("default_q0", &default_q0);

  py::enum_<ParametrixSide>(m, "ParametrixSide")
      .value("left", ParametrixSide::left)
      .value("right", ParametrixSide::right);
  m.def("parametrix", &parametrix);
  py::class_<ResidualReport>(m, "ResidualReport")
      .def_readonly("sup_base", &ResidualReport::sup_base)
      .def_readonly("sup_doubled", &ResidualReport::sup_doubled)
      .def_readonly("ratio", &ResidualReport::ratio);
  m.def("parametrix_residual", &parametrix_residual);

  py::class_<AsymptoticSumResult>(m, "AsymptoticSumResult")
      .def_readonly("sum", &AsymptoticSumResult::sum)
      .def_readonly("t", &AsymptoticSumResult::t)
      .def_readonly("achieved", &AsymptoticSumResult::achieved)
      .def_readonly("bound", &AsymptoticSumResult::bound);
  m.def("asymptotic_sum", &asymptotic_sum);
  m.def("holo_apply", &holo_apply);

  py::class_<SpectralOperator>(m, "SpectralOperator")
      .def_readonly("dual", &SpectralOperator::dual)
      .def_readonly("action", &SpectralOperator::action);
  m.def("multiplier", &multiplier);
  m.def("laplacian_operator", &laplacian_operator);
  m.def("bessel_multiplier", &bessel_multiplier);
  m.def("poisson_multiplier", &poisson_multiplier);
  m.def("laplacian_parametrix", &laplacian_parametrix);
  m.def("spectral_apply", &spectral_apply);
  py::class_<PowerResult>(m, "PowerResult")
      .def_readonly("op", &PowerResult::op)
      .def_readonly("reported_defect", &PowerResult::reported_defect);
  m.def("complex_power_contour", &complex_power_contour);
  m.def("exp_power_contour", &exp_power_contour);
  m.def("commutator_norm", &commutator_norm);

  py::class_<TubeSpec>(m, "TubeSpec")
      .def_readonly("epsilon", &TubeSpec::epsilon)
      .def_readonly("ball", &TubeSpec::ball);
  m.def("make_tube", &make_tube, py::arg("group"), py::arg("epsilon"), py::arg("degree") = 8);
  py::class_<HoloFunction>(m, "HoloFunction")
      .def_readonly("coeffs", &HoloFunction::coeffs)
      .def_readonly("epsilon", &HoloFunction::epsilon);
  m.def("poisson_transform", &poisson_transform);
  m.def("restrict_boundary", &restrict_boundary);
  m.def("tube_evaluate", &tube_evaluate);
  m.def("tube_weight", &tube_weight);
  m.def("hl2_inner", &hl2_inner);
  m.def("hl2_norm", &hl2_norm);
  m.def("hh_norm", &hh_norm);
  m.def("diagram_defect",
        py::overload_cast<const SpectralOperator&, double, const TubeSpec&,
                          const std::vector<FourierCoefficients>&>(&diagram_defect));
  m.def("diagram_defect_symbol",
        py::overload_cast<const HoloSymbol&, double, const TubeSpec&, const GridPtr&,
                          const std::vector<FourierCoefficients>&>(&diagram_defect));
  py::class_<HalfWaveResult>(m, "HalfWaveResult")
      .def_readonly("value", &HalfWaveResult::value)
      .def_readonly("deltas", &HalfWaveResult::deltas)
      .def_readonly("growth", &HalfWaveResult::growth)
      .def_readonly("diverged", &HalfWaveResult::diverged);
  m.def("half_wave_kernel", &half_wave_kernel);
}
