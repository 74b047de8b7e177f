// Copyright 2026 The rpdhg Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RPDHG_LINALG_H_
#define RPDHG_LINALG_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "Eigen/Core"

namespace rpdhg {

using Vec = Eigen::VectorXd;

struct Triplet {
  int row;
  int col;
  double value;
};

// Compressed-row sparse matrix. Column indices are strictly increasing within
// each row. Immutable after construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  // Validates the layout and throws InputError on violation.
  SparseMatrix(int nrows, int ncols, std::vector<int> row_ptr,
               std::vector<int> col_idx, std::vector<double> values);

  // Duplicate entries are summed; explicit zeros are kept.
  static SparseMatrix FromTriplets(int nrows, int ncols,
                                   std::vector<Triplet> triplets);
  static SparseMatrix FromDense(const Eigen::MatrixXd& dense,
                                double drop_tol = 0.0);
  static SparseMatrix Identity(int n);

  int rows() const { return nrows_; }
  int cols() const { return ncols_; }
  int64_t nnz() const { return static_cast<int64_t>(values_.size()); }
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  Eigen::MatrixXd ToDense() const;
  SparseMatrix Transposed() const;
  // Returns diag(row_scale) * A * diag(col_scale).
  SparseMatrix Scaled(const Vec& row_scale, const Vec& col_scale) const;
  bool IsZero() const;

 private:
  int nrows_ = 0;
  int ncols_ = 0;
  std::vector<int> row_ptr_ = {0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

// out = A x, summing each row in ascending column order.
void Spmv(const SparseMatrix& a, const Vec& x, Vec& out);
Vec Spmv(const SparseMatrix& a, const Vec& x);
// out = A^T y, one pass over rows scattering into out in row order.
void SpmvT(const SparseMatrix& a, const Vec& y, Vec& out);
Vec SpmvT(const SparseMatrix& a, const Vec& y);

enum class SpectralMethod { kPowerIteration, kDenseSvd };

struct SpectralEstimates {
  double lambda_max = 0.0;
  // Absent when the matrix is too large for a dense SVD.
  std::optional<double> lambda_min;
  std::optional<double> kappa;
  SpectralMethod method = SpectralMethod::kPowerIteration;
  double lambda_max_power = 0.0;
  bool converged = false;
};

struct SpectralOptions {
  double tol = 1e-10;
  int max_iter = 5000;
  int dense_threshold = 512;
  double zero_threshold = 1e-10;
  uint64_t seed = 20240601;
};

// Largest and smallest positive singular values of A. Throws InputError on
// the zero matrix.
SpectralEstimates EstimateSpectra(const SparseMatrix& a,
                                  const SpectralOptions& options = {});

// Positive singular values of a dense matrix, descending, with values at or
// below zero_threshold * sigma_max dropped.
Vec PositiveSingularValues(const Eigen::MatrixXd& a,
                           double zero_threshold = 1e-10);

// sqrt(z^T M z) with M = [[I/tau, A^T], [A, I/sigma]], matrix free. OnePdhg
// is nonexpansive in this metric.
double MNorm(const Vec& x, const Vec& y, double tau, double sigma,
             const SparseMatrix& a);
double MNorm(const Vec& z, double tau, double sigma, const SparseMatrix& a);
double NNorm(const Vec& x, const Vec& y, double tau, double sigma);

using LinearOperator = std::function<void(const Vec& in, Vec& out)>;

struct CgOptions {
  double tol = 1e-10;
  int max_iter = 1000;
  bool check_symmetry = false;
  // Optional extra stopping test, evaluated after every iteration.
  std::function<bool(const Vec& x, int iteration)> stop;
};

struct CgResult {
  Vec x;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradients. `precond_diag` holds the
// diagonal of the preconditioner (empty for none). Returns the best iterate
// seen when the iteration cap is hit.
CgResult CgSolve(const LinearOperator& apply, const Vec& b,
                 const Vec& precond_diag, const CgOptions& options = {},
                 const Vec* x0 = nullptr);

// Solves A diag(w) A^T u = rhs by Jacobi-preconditioned CG. An empty `w`
// means w = 1.
CgResult SolveNormalEquations(const SparseMatrix& a, const Vec& rhs,
                              const Vec& w, const CgOptions& options = {});

struct NearestPointResult {
  Vec point;
  Vec weights;  // convex weights over the input columns
  double distance = 0.0;
};

// Wolfe's min-norm-point algorithm: the point of conv(columns of `points`)
// nearest to `query` in the Euclidean norm.
NearestPointResult NearestPointInHull(const Eigen::MatrixXd& points,
                                      const Vec& query, double tol = 1e-10);

struct DiagonalScaling {
  Vec row_scale;
  Vec col_scale;
};

// Iterative sup-norm equilibration. Returns cumulative scales.
DiagonalScaling RuizScaling(const SparseMatrix& a, int iters = 10);
// The alpha = 1 scaling: rows by 1/sqrt(row l1), columns by 1/sqrt(col l1).
DiagonalScaling PockChambolleScaling(const SparseMatrix& a);
// Applies Ruiz then Pock-Chambolle and returns the composed scales.
DiagonalScaling RuizPockChambolleScaling(const SparseMatrix& a,
                                         int ruiz_iters = 10);

}  // namespace rpdhg

#endif  // RPDHG_LINALG_H_
