#pragma once

#include <array>
#include <functional>

#include "framelift/error.hpp"
#include "framelift/jet.hpp"

// Levi-Civita calculus for an orthonormal frame in dimension 2 or 3, driven
// only by the structure functions [e_i, e_j] = c^k_{ij} e_k and their frame
// derivatives. All frame indices are zero-based: index 0 is e_1.
namespace framelift {

inline constexpr int kMaxFrameDim = 3;

template <class T>
using Table3 = std::array<std::array<std::array<T, kMaxFrameDim>, kMaxFrameDim>, kMaxFrameDim>;

// c[k][i][j] = c^k_{ij}.
struct StructureTable {
  int dim = 2;
  Table3<double> c{};
};

// Structure functions plus dc[m][k][i][j] = e_m c^k_{ij}.
struct StructureSample {
  StructureTable table;
  std::array<Table3<double>, kMaxFrameDim> dc{};
};

// gamma[k][i][j] = Gamma^k_{ij}, i.e. nabla_{e_i} e_j = Gamma^k_{ij} e_k.
struct ConnectionTable {
  int dim = 2;
  Table3<double> gamma{};
};

// Curvature R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
// stored lowered: r[l][i][j][k] = <R(e_i, e_j) e_k, e_l>.
struct CurvatureTable {
  int dim = 2;
  std::array<Table3<double>, kMaxFrameDim> r{};

  double lowered(int l, int i, int j, int k) const { return r[l][i][j][k]; }
  // <R(e_a, e_b) e_c, e_d>, the ordering used for the six lifted components.
  double component(int a, int b, int c, int d) const { return r[d][a][b][c]; }
};

// Coefficients of a frame in chart coordinates (x1, x2[, phi]):
// frame vector a is sum_mu coeff[a][mu] d_mu. Coefficients depend on (x1, x2)
// only; the third chart direction, when present, is a symmetry direction.
struct FrameFields {
  int dim = 2;
  std::array<std::array<Jet, kMaxFrameDim>, kMaxFrameDim> coeff{};
};

// Brackets of the frame fields expanded back in the frame. Coefficient jets
// must be of order >= 2 for the derivative table to be available.
StructureSample structure_from_fields(const FrameFields& fields);

class FrameSampler {
 public:
  using FieldFunction = std::function<FrameFields(Point)>;

  FrameSampler(int dim, FieldFunction fields);

  int dim() const noexcept { return dim_; }
  FrameFields fields(Point x) const;
  StructureSample sample(Point x) const;

 private:
  int dim_;
  FieldFunction fields_;
};

// Gamma^k_{ij} = (c^k_{ij} + c^j_{ki} + c^i_{kj}) / 2.
ConnectionTable koszul(const StructureTable& c);
ConnectionTable koszul(const FrameSampler& frame, Point x);

// Solves metric compatibility Gamma^k_{ij} + Gamma^j_{ik} = 0 together with
// torsion-freeness Gamma^k_{ij} - Gamma^k_{ji} = c^k_{ij} as a linear system.
ConnectionTable solve_levi_civita(const StructureTable& c);

CurvatureTable curvature(const StructureSample& s);
CurvatureTable curvature(const FrameSampler& frame, Point x);

// <R(e_i, e_j) e_j, e_i>; throws InvalidArgument for i == j or out-of-range indices.
double sectional(const CurvatureTable& table, int i, int j);

}  // namespace framelift
