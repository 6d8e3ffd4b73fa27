#include "framelift/connection.hpp"

#include <Eigen/Dense>
#include <string>
#include <utility>

namespace framelift {
namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 3) throw InvalidArgument("frame dimension must be 2 or 3, got " + std::to_string(dim));
}

using JetMatrix = std::array<std::array<Jet, kMaxFrameDim>, kMaxFrameDim>;

JetMatrix inverse(const JetMatrix& m, int dim) {
  JetMatrix inv{};
  if (dim == 2) {
    const Jet det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const Jet r = reciprocal(det);
    inv[0][0] = m[1][1] * r;
    inv[0][1] = -(m[0][1] * r);
    inv[1][0] = -(m[1][0] * r);
    inv[1][1] = m[0][0] * r;
    return inv;
  }
  // Adjugate over the jet ring.
  auto cof = [&](int r0, int r1, int c0, int c1) { return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]; };
  const Jet a00 = cof(1, 2, 1, 2), a01 = -cof(1, 2, 0, 2), a02 = cof(1, 2, 0, 1);
  const Jet det = m[0][0] * a00 + m[0][1] * a01 + m[0][2] * a02;
  const Jet r = reciprocal(det);
  inv[0][0] = a00 * r;
  inv[1][0] = a01 * r;
  inv[2][0] = a02 * r;
  inv[0][1] = -cof(0, 2, 1, 2) * r;
  inv[1][1] = cof(0, 2, 0, 2) * r;
  inv[2][1] = -cof(0, 2, 0, 1) * r;
  inv[0][2] = cof(0, 1, 1, 2) * r;
  inv[1][2] = -cof(0, 1, 0, 2) * r;
  inv[2][2] = cof(0, 1, 0, 1) * r;
  return inv;
}

// Directional derivative along frame vector a; only x1, x2 carry dependence.
Jet along(const FrameFields& f, int a, const Jet& g) {
  const int n = g.order() - 1;
  return f.coeff[a][0].truncated(n) * g.derivative(1) + f.coeff[a][1].truncated(n) * g.derivative(2);
}

Table3<double> koszul_linear(const Table3<double>& c, int dim) {
  Table3<double> g{};
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) g[k][i][j] = 0.5 * (c[k][i][j] + c[j][k][i] + c[i][k][j]);
    }
  }
  return g;
}

}  // namespace

StructureSample structure_from_fields(const FrameFields& f) {
  check_dim(f.dim);
  const int dim = f.dim;
  int order = Jet::kMaxOrder;
  for (int a = 0; a < dim; ++a) {
    for (int mu = 0; mu < dim; ++mu) order = std::min(order, f.coeff[a][mu].order());
  }
  if (order < 2) throw InvalidArgument("frame coefficient jets must have order >= 2");

  const JetMatrix inv = inverse(f.coeff, dim);
  StructureSample s;
  s.table.dim = dim;
  std::array<std::array<std::array<Jet, kMaxFrameDim>, kMaxFrameDim>, kMaxFrameDim> cj{};
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      std::array<Jet, kMaxFrameDim> bracket{};
      for (int mu = 0; mu < dim; ++mu) {
        bracket[mu] = along(f, a, f.coeff[b][mu]) - along(f, b, f.coeff[a][mu]);
      }
      for (int k = 0; k < dim; ++k) {
        Jet ck = Jet::constant(0.0, order - 1);
        for (int mu = 0; mu < dim; ++mu) ck += bracket[mu] * inv[mu][k];
        cj[k][a][b] = ck;
        cj[k][b][a] = -ck;
      }
    }
  }
  for (int k = 0; k < dim; ++k) {
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        if (a == b) continue;
        s.table.c[k][a][b] = cj[k][a][b].value();
        for (int m = 0; m < dim; ++m) s.dc[m][k][a][b] = along(f, m, cj[k][a][b]).value();
      }
    }
  }
  return s;
}

FrameSampler::FrameSampler(int dim, FieldFunction fields) : dim_(dim), fields_(std::move(fields)) {
  check_dim(dim);
  if (!fields_) throw InvalidArgument("frame sampler needs a field function");
}

FrameFields FrameSampler::fields(Point x) const {
  FrameFields f = fields_(x);
  if (f.dim != dim_) throw InvalidArgument("frame field function returned the wrong dimension");
  return f;
}

StructureSample FrameSampler::sample(Point x) const { return structure_from_fields(fields(x)); }

ConnectionTable koszul(const StructureTable& c) {
  check_dim(c.dim);
  return ConnectionTable{c.dim, koszul_linear(c.c, c.dim)};
}

ConnectionTable koszul(const FrameSampler& frame, Point x) { return koszul(frame.sample(x).table); }

ConnectionTable solve_levi_civita(const StructureTable& c) {
  check_dim(c.dim);
  const int n = c.dim;
  const int unknowns = n * n * n;
  auto var = [n](int k, int i, int j) { return (k * n + i) * n + j; };
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * unknowns, unknowns);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * unknowns);
  int row = 0;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        A(row, var(k, i, j)) += 1.0;
        A(row, var(j, i, k)) += 1.0;
        ++row;
        A(row, var(k, i, j)) += 1.0;
        A(row, var(k, j, i)) -= 1.0;
        rhs(row) = c.c[k][i][j];
        ++row;
      }
    }
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(rhs);
  ConnectionTable out{n, {}};
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out.gamma[k][i][j] = x(var(k, i, j));
    }
  }
  return out;
}

CurvatureTable curvature(const StructureSample& s) {
  const int n = s.table.dim;
  check_dim(n);
  const auto& c = s.table.c;
  const Table3<double> g = koszul_linear(c, n);
  std::array<Table3<double>, kMaxFrameDim> dg{};  // dg[m][l][j][k] = e_m Gamma^l_{jk}
  for (int m = 0; m < n; ++m) dg[m] = koszul_linear(s.dc[m], n);

  CurvatureTable out;
  out.dim = n;
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double v = dg[i][l][j][k] - dg[j][l][i][k];
          for (int q = 0; q < n; ++q) {
            v += g[l][i][q] * g[q][j][k] - g[l][j][q] * g[q][i][k] - c[q][i][j] * g[l][q][k];
          }
          out.r[l][i][j][k] = v;
        }
      }
    }
  }
  return out;
}

CurvatureTable curvature(const FrameSampler& frame, Point x) { return curvature(frame.sample(x)); }

double sectional(const CurvatureTable& table, int i, int j) {
  if (i < 0 || j < 0 || i >= table.dim || j >= table.dim) {
    throw InvalidArgument("frame index out of range for dimension " + std::to_string(table.dim));
  }
  if (i == j) throw InvalidArgument("sectional curvature needs two distinct frame vectors");
  return table.lowered(i, i, j, j);
}

}  // namespace framelift
