#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "grauert/errors.hpp"

namespace grauert {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

enum class GroupKind { torus, su2 };

struct GroupSpec {
  GroupKind kind = GroupKind::torus;
  int n = 1;  // torus dimension; ignored for su2
  int lie_dim() const { return kind == GroupKind::torus ? n : 3; }
  bool operator==(const GroupSpec& o) const {
    return kind == o.kind && (kind == GroupKind::su2 || n == o.n);
  }
};

GroupSpec torus_group(int n);
GroupSpec su2_group();
std::string group_name(const GroupSpec&);

// One irreducible unitary representation class.
//   torus: label = k in Z^n, dim 1, eigenvalue |k|^2
//   su2:   label = {2l},     dim 2l+1, eigenvalue l(l+1)
// bracket() is the quartic weight (1 + eigenvalue^2)^(1/2) used by the
// symbol seminorms; the Sobolev scale uses (1 + eigenvalue) instead.
struct Irrep {
  GroupKind kind = GroupKind::torus;
  std::vector<int> label;
  int dim = 1;
  double eigenvalue = 0.0;

  double bracket() const { return std::sqrt(1.0 + eigenvalue * eigenvalue); }
  int twol() const { return label.at(0); }
  bool operator==(const Irrep& o) const { return kind == o.kind && label == o.label; }
};

Irrep torus_irrep(const std::vector<int>& k);
Irrep su2_irrep(int twol);
std::string irrep_name(const Irrep&);

// All irreps with bracket() <= cutoff, sorted by (eigenvalue, label).
std::vector<Irrep> enumerate_dual(const GroupSpec&, double cutoff);

struct GroupPoint {
  GroupKind kind = GroupKind::torus;
  RVec angles;         // torus
  Eigen::Matrix2cd u;  // su2
};

GroupPoint torus_point(const RVec& angles);
GroupPoint su2_point(const Eigen::Matrix2cd& u);
GroupPoint identity_point(const GroupSpec&);
GroupPoint group_mul(const GroupPoint&, const GroupPoint&);
GroupPoint group_inv(const GroupPoint&);

// Cartan pair (x, Y) representing exp(iY) x in the complexified group.
struct TubePoint {
  GroupPoint base;
  RVec imag;
};

Mat irrep_eval(const Irrep&, const GroupPoint&);
Mat irrep_eval_tube(const Irrep&, const TubePoint&);

// Representation matrix of the (2l+1)-dimensional representation for an
// arbitrary invertible 2x2 argument, via the symmetric tensor power action.
// Rows and columns are ordered by descending weight, so the fundamental
// representation returns its argument unchanged.
Mat su2_wigner(int twol, const Eigen::Matrix2cd&);
// Derivative of su2_wigner at the identity in direction A in gl(2,C).
Mat su2_wigner_derivative(int twol, const Eigen::Matrix2cd& A);
// Orthonormal basis X_j = -(i/2) sigma_j of su(2), normalized so that the
// Laplace eigenvalue on the spin-l representation is l(l+1).
Eigen::Matrix2cd su2_basis(int j);
// exp(i Y.X) in SL(2,C): the positive-definite Cartan factor exp((Y.sigma)/2).
Eigen::Matrix2cd su2_exp_iy(const Eigen::Vector3d& Y);
// Polar decomposition m = exp(iY) u with u in SU(2).
TubePoint su2_cartan(const Eigen::Matrix2cd& m);

struct HaarGrid {
  GroupSpec group;
  int resolution = 0;
  std::vector<GroupPoint> nodes;
  RVec weights;
};
using GridPtr = std::shared_ptr<const HaarGrid>;

// torus: uniform product grid with resolution^n equally weighted nodes.
// su2: Euler angle product rule, uniform in the two axial angles and
// Gauss-Legendre in the polar cosine; exact for matrix coefficients with
// 2l <= 4*resolution.
GridPtr haar_grid(const GroupSpec&, int resolution);

// largest |k_j| (torus) resp. largest 2l (su2) occurring in the dual list
int dual_band(const std::vector<Irrep>&);
// true when the grid integrates products of two coefficient functions of the
// dual truncation exactly
bool grid_resolves(const HaarGrid&, const std::vector<Irrep>& dual);
void require_nyquist(const HaarGrid&, const std::vector<Irrep>& dual);

struct RepTable {  // value[i][j] = xi_i(x_j)
  std::vector<std::vector<Mat>> value;
};
RepTable tabulate(const HaarGrid&, const std::vector<Irrep>&);

}  // namespace grauert
