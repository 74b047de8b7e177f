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

#include "rpdhg/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "Eigen/SVD"
#include "rpdhg/errors.h"

namespace rpdhg {

SparseMatrix::SparseMatrix(int nrows, int ncols, std::vector<int> row_ptr,
                           std::vector<int> col_idx,
                           std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (nrows_ < 0 || ncols_ < 0) throw InputError("negative matrix dimension");
  if (row_ptr_.size() != static_cast<size_t>(nrows_) + 1 || row_ptr_[0] != 0) {
    throw InputError("row offsets must have nrows+1 entries starting at 0");
  }
  if (col_idx_.size() != values_.size() ||
      static_cast<size_t>(row_ptr_.back()) != values_.size()) {
    throw InputError("row offsets do not match the entry count");
  }
  for (int i = 0; i < nrows_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i]) {
      throw InputError("row offsets must be non-decreasing");
    }
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int j = col_idx_[k];
      if (j < 0 || j >= ncols_) throw InputError("column index out of range");
      if (k > row_ptr_[i] && col_idx_[k - 1] >= j) {
        throw InputError("column indices must increase within a row");
      }
      if (!std::isfinite(values_[k])) throw InputError("non-finite entry");
    }
  }
}

SparseMatrix SparseMatrix::FromTriplets(int nrows, int ncols,
                                        std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
      throw InputError("triplet index out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  std::vector<int> row_ptr(nrows + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> values;
  for (size_t k = 0; k < triplets.size(); ++k) {
    const Triplet& t = triplets[k];
    if (!col_idx.empty() && k > 0 && triplets[k - 1].row == t.row &&
        triplets[k - 1].col == t.col) {
      values.back() += t.value;
      continue;
    }
    col_idx.push_back(t.col);
    values.push_back(t.value);
    ++row_ptr[t.row + 1];
  }
  for (int i = 0; i < nrows; ++i) row_ptr[i + 1] += row_ptr[i];
  return SparseMatrix(nrows, ncols, std::move(row_ptr), std::move(col_idx),
                      std::move(values));
}

SparseMatrix SparseMatrix::FromDense(const Eigen::MatrixXd& dense,
                                     double drop_tol) {
  std::vector<int> row_ptr(dense.rows() + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> values;
  for (int i = 0; i < dense.rows(); ++i) {
    for (int j = 0; j < dense.cols(); ++j) {
      if (std::abs(dense(i, j)) > drop_tol) {
        col_idx.push_back(j);
        values.push_back(dense(i, j));
      }
    }
    row_ptr[i + 1] = static_cast<int>(values.size());
  }
  return SparseMatrix(static_cast<int>(dense.rows()),
                      static_cast<int>(dense.cols()), std::move(row_ptr),
                      std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::Identity(int n) {
  std::vector<int> row_ptr(n + 1);
  std::vector<int> col_idx(n);
  for (int i = 0; i <= n; ++i) row_ptr[i] = i;
  for (int i = 0; i < n; ++i) col_idx[i] = i;
  return SparseMatrix(n, n, std::move(row_ptr), std::move(col_idx),
                      std::vector<double>(n, 1.0));
}

Eigen::MatrixXd SparseMatrix::ToDense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(nrows_, ncols_);
  for (int i = 0; i < nrows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      dense(i, col_idx_[k]) += values_[k];
    }
  }
  return dense;
}

SparseMatrix SparseMatrix::Transposed() const {
  std::vector<int> row_ptr(ncols_ + 1, 0);
  for (int j : col_idx_) ++row_ptr[j + 1];
  for (int j = 0; j < ncols_; ++j) row_ptr[j + 1] += row_ptr[j];
  std::vector<int> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<int> col_idx(values_.size());
  std::vector<double> values(values_.size());
  for (int i = 0; i < nrows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int pos = next[col_idx_[k]]++;
      col_idx[pos] = i;
      values[pos] = values_[k];
    }
  }
  return SparseMatrix(ncols_, nrows_, std::move(row_ptr), std::move(col_idx),
                      std::move(values));
}

SparseMatrix SparseMatrix::Scaled(const Vec& row_scale,
                                  const Vec& col_scale) const {
  if (row_scale.size() != nrows_ || col_scale.size() != ncols_) {
    throw InputError("scaling vector length mismatch");
  }
  std::vector<double> values(values_.size());
  for (int i = 0; i < nrows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      values[k] = row_scale[i] * values_[k] * col_scale[col_idx_[k]];
    }
  }
  return SparseMatrix(nrows_, ncols_, row_ptr_, col_idx_, std::move(values));
}

bool SparseMatrix::IsZero() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0; });
}

void Spmv(const SparseMatrix& a, const Vec& x, Vec& out) {
  if (x.size() != a.cols()) throw InputError("spmv: dimension mismatch");
  out.resize(a.rows());
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& v = a.values();
  for (int i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (int k = rp[i]; k < rp[i + 1]; ++k) sum += v[k] * x[ci[k]];
    out[i] = sum;
  }
}

Vec Spmv(const SparseMatrix& a, const Vec& x) {
  Vec out;
  Spmv(a, x, out);
  return out;
}

void SpmvT(const SparseMatrix& a, const Vec& y, Vec& out) {
  if (y.size() != a.rows()) throw InputError("spmv_t: dimension mismatch");
  out.setZero(a.cols());
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& v = a.values();
  for (int i = 0; i < a.rows(); ++i) {
    const double yi = y[i];
    for (int k = rp[i]; k < rp[i + 1]; ++k) out[ci[k]] += v[k] * yi;
  }
}

Vec SpmvT(const SparseMatrix& a, const Vec& y) {
  Vec out;
  SpmvT(a, y, out);
  return out;
}

Vec PositiveSingularValues(const Eigen::MatrixXd& a, double zero_threshold) {
  if (a.size() == 0) return Vec();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Vec& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return Vec();
  int count = 0;
  while (count < sv.size() && sv[count] > zero_threshold * sv[0]) ++count;
  return sv.head(count);
}

SpectralEstimates EstimateSpectra(const SparseMatrix& a,
                                  const SpectralOptions& options) {
  if (a.rows() == 0 || a.cols() == 0 || a.IsZero()) {
    throw InputError("spectral estimates of a zero matrix");
  }
  SpectralEstimates est;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec u(a.rows());
  for (int i = 0; i < u.size(); ++i) u[i] = normal(rng);
  u.normalize();
  Vec atu, aatu;
  double eig = 0.0;
  for (int it = 0; it < options.max_iter; ++it) {
    SpmvT(a, u, atu);
    Spmv(a, atu, aatu);
    const double next = u.dot(aatu);
    const double norm = aatu.norm();
    if (norm == 0.0) {
      // Started in the null space of A^T; restart from a coordinate vector.
      u.setZero();
      u[it % u.size()] = 1.0;
      continue;
    }
    u = aatu / norm;
    if (it > 0 && std::abs(next - eig) <= options.tol * std::abs(next)) {
      eig = next;
      est.converged = true;
      break;
    }
    eig = next;
  }
  est.lambda_max_power = std::sqrt(std::max(eig, 0.0));
  est.lambda_max = est.lambda_max_power;
  if (std::min(a.rows(), a.cols()) <= options.dense_threshold) {
    const Vec sv = PositiveSingularValues(a.ToDense(), options.zero_threshold);
    est.lambda_max = sv[0];
    est.lambda_min = sv[sv.size() - 1];
    est.kappa = est.lambda_max / *est.lambda_min;
    est.method = SpectralMethod::kDenseSvd;
  }
  return est;
}

namespace {

double MNormSquared(const Vec& x, const Vec& y, double tau, double sigma,
                    const SparseMatrix& a) {
  const double n2 = x.squaredNorm() / tau + y.squaredNorm() / sigma;
  const double cross = y.dot(Spmv(a, x));
  double val = n2 + 2.0 * cross;
  if (val < 0.0) {
    if (val < -1e-12 * std::max(n2, 1e-300)) {
      throw NumericalError("M-norm squared is negative; step sizes violate "
                           "tau*sigma <= 1/lambda_max^2");
    }
    val = 0.0;
  }
  return val;
}

}  // namespace

double MNorm(const Vec& x, const Vec& y, double tau, double sigma,
             const SparseMatrix& a) {
  if (tau <= 0.0 || sigma <= 0.0) throw InputError("step sizes must be > 0");
  if (x.size() != a.cols() || y.size() != a.rows()) {
    throw InputError("m_norm: dimension mismatch");
  }
  return std::sqrt(MNormSquared(x, y, tau, sigma, a));
}

double MNorm(const Vec& z, double tau, double sigma, const SparseMatrix& a) {
  if (z.size() != a.cols() + a.rows()) {
    throw InputError("m_norm: dimension mismatch");
  }
  return MNorm(z.head(a.cols()), z.tail(a.rows()), tau, sigma, a);
}

double NNorm(const Vec& x, const Vec& y, double tau, double sigma) {
  if (tau <= 0.0 || sigma <= 0.0) throw InputError("step sizes must be > 0");
  return std::sqrt(x.squaredNorm() / tau + y.squaredNorm() / sigma);
}

namespace {

void CheckSymmetry(const LinearOperator& apply, int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec u(n), v(n), au, av;
  for (int i = 0; i < n; ++i) {
    u[i] = normal(rng);
    v[i] = normal(rng);
  }
  apply(u, au);
  apply(v, av);
  const double lhs = v.dot(au);
  const double rhs = u.dot(av);
  const double scale = au.norm() * v.norm() + av.norm() * u.norm();
  if (std::abs(lhs - rhs) > 1e-8 * std::max(scale, 1e-300)) {
    throw InputError("cg_solve: operator is not symmetric");
  }
}

}  // namespace

CgResult CgSolve(const LinearOperator& apply, const Vec& b,
                 const Vec& precond_diag, const CgOptions& options,
                 const Vec* x0) {
  const int n = static_cast<int>(b.size());
  if (precond_diag.size() != 0 && precond_diag.size() != n) {
    throw InputError("cg_solve: preconditioner length mismatch");
  }
  if (options.check_symmetry && n > 0) CheckSymmetry(apply, n);
  CgResult result;
  Vec x = x0 != nullptr ? *x0 : Vec::Zero(n);
  if (x.size() != n) throw InputError("cg_solve: initial point mismatch");
  const double bnorm = b.norm();
  Vec r = b;
  Vec ax(n);
  if (x0 != nullptr) {
    apply(x, ax);
    r -= ax;
  }
  auto precondition = [&](const Vec& in) {
    if (precond_diag.size() == 0) return Vec(in);
    Vec out(n);
    for (int i = 0; i < n; ++i) {
      const double d = precond_diag[i];
      out[i] = d > 0.0 ? in[i] / d : in[i];
    }
    return out;
  };
  const double target = options.tol * bnorm;
  double rnorm = r.norm();
  result.x = x;
  result.residual = rnorm;
  if (rnorm <= target || bnorm == 0.0) {
    result.converged = true;
    return result;
  }
  Vec zvec = precondition(r);
  Vec p = zvec;
  double rz = r.dot(zvec);
  Vec ap(n);
  for (int it = 1; it <= options.max_iter; ++it) {
    apply(p, ap);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    rnorm = r.norm();
    result.iterations = it;
    if (rnorm < result.residual) {
      result.residual = rnorm;
      result.x = x;
    }
    if (rnorm <= target) {
      result.converged = true;
      result.x = x;
      result.residual = rnorm;
      return result;
    }
    if (options.stop && options.stop(x, it)) {
      result.converged = true;
      result.x = x;
      result.residual = rnorm;
      return result;
    }
    zvec = precondition(r);
    const double rz_next = r.dot(zvec);
    p = zvec + (rz_next / rz) * p;
    rz = rz_next;
  }
  return result;
}

CgResult SolveNormalEquations(const SparseMatrix& a, const Vec& rhs,
                              const Vec& w, const CgOptions& options) {
  if (rhs.size() != a.rows()) throw InputError("normal equations: mismatch");
  if (w.size() != 0 && w.size() != a.cols()) {
    throw InputError("normal equations: weight length mismatch");
  }
  Vec diag = Vec::Zero(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const double v = a.values()[k];
      diag[i] += v * v * (w.size() ? w[a.col_idx()[k]] : 1.0);
    }
  }
  Vec tmp;
  LinearOperator apply = [&](const Vec& in, Vec& out) {
    SpmvT(a, in, tmp);
    if (w.size()) tmp.array() *= w.array();
    Spmv(a, tmp, out);
  };
  return CgSolve(apply, rhs, diag, options);
}

namespace {

Vec RowSupNorms(const SparseMatrix& a) {
  Vec out = Vec::Zero(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      out[i] = std::max(out[i], std::abs(a.values()[k]));
    }
  }
  return out;
}

Vec ColSupNorms(const SparseMatrix& a) {
  Vec out = Vec::Zero(a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      out[a.col_idx()[k]] =
          std::max(out[a.col_idx()[k]], std::abs(a.values()[k]));
    }
  }
  return out;
}

Vec InvSqrtOrOne(const Vec& v) {
  Vec out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    out[i] = v[i] > 0.0 ? 1.0 / std::sqrt(v[i]) : 1.0;
  }
  return out;
}

}  // namespace

DiagonalScaling RuizScaling(const SparseMatrix& a, int iters) {
  if (iters < 1) throw InputError("ruiz_scaling: iters must be >= 1");
  DiagonalScaling s{Vec::Ones(a.rows()), Vec::Ones(a.cols())};
  SparseMatrix cur = a;
  for (int it = 0; it < iters; ++it) {
    const Vec r = InvSqrtOrOne(RowSupNorms(cur));
    const Vec c = InvSqrtOrOne(ColSupNorms(cur));
    s.row_scale.array() *= r.array();
    s.col_scale.array() *= c.array();
    cur = cur.Scaled(r, c);
  }
  return s;
}

DiagonalScaling PockChambolleScaling(const SparseMatrix& a) {
  Vec row_l1 = Vec::Zero(a.rows());
  Vec col_l1 = Vec::Zero(a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const double v = std::abs(a.values()[k]);
      row_l1[i] += v;
      col_l1[a.col_idx()[k]] += v;
    }
  }
  return {InvSqrtOrOne(row_l1), InvSqrtOrOne(col_l1)};
}

DiagonalScaling RuizPockChambolleScaling(const SparseMatrix& a,
                                         int ruiz_iters) {
  DiagonalScaling ruiz = RuizScaling(a, ruiz_iters);
  const SparseMatrix scaled = a.Scaled(ruiz.row_scale, ruiz.col_scale);
  const DiagonalScaling pc = PockChambolleScaling(scaled);
  return {ruiz.row_scale.cwiseProduct(pc.row_scale),
          ruiz.col_scale.cwiseProduct(pc.col_scale)};
}

}  // namespace rpdhg

namespace rpdhg {

NearestPointResult NearestPointInHull(const Eigen::MatrixXd& points,
                                      const Vec& query, double tol) {
  const int dim = static_cast<int>(points.rows());
  const int np = static_cast<int>(points.cols());
  if (np == 0) throw InputError("nearest point: empty point set");
  if (query.size() != dim) throw InputError("nearest point: dimension mismatch");
  const Eigen::MatrixXd p = points.colwise() - query;
  double scale = 1.0;
  for (int j = 0; j < np; ++j) scale = std::max(scale, p.col(j).squaredNorm());
  // Start from the point nearest to the origin.
  int start = 0;
  for (int j = 1; j < np; ++j) {
    if (p.col(j).squaredNorm() < p.col(start).squaredNorm()) start = j;
  }
  std::vector<int> active = {start};
  Vec lambda = Vec::Zero(np);
  lambda[start] = 1.0;
  Vec x = p.col(start);
  for (int major = 0; major < 100 * (np + 1); ++major) {
    // Most promising new vertex.
    int best = -1;
    double best_val = x.squaredNorm() - tol * scale;
    for (int j = 0; j < np; ++j) {
      const double v = x.dot(p.col(j));
      if (v < best_val) {
        best_val = v;
        best = j;
      }
    }
    if (best < 0 ||
        std::find(active.begin(), active.end(), best) != active.end()) {
      break;
    }
    active.push_back(best);
    for (int minor = 0; minor < 100 * (np + 1); ++minor) {
      // Affine minimizer over the active set.
      const int k = static_cast<int>(active.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
      Vec rhs = Vec::Zero(k + 1);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          kkt(a, b) = p.col(active[a]).dot(p.col(active[b]));
        }
        kkt(a, k) = 1.0;
        kkt(k, a) = 1.0;
      }
      rhs[k] = 1.0;
      const Vec sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      const Vec mu = sol.head(k);
      if (mu.minCoeff() > 1e-14) {
        lambda.setZero();
        for (int a = 0; a < k; ++a) lambda[active[a]] = mu[a];
        break;
      }
      // Step from lambda toward mu until a weight hits zero.
      double theta = 1.0;
      for (int a = 0; a < k; ++a) {
        const double la = lambda[active[a]];
        if (mu[a] <= 1e-14 && la - mu[a] > 0.0) {
          theta = std::min(theta, la / (la - mu[a]));
        }
      }
      std::vector<int> next;
      for (int a = 0; a < k; ++a) {
        const double v = lambda[active[a]] + theta * (mu[a] - lambda[active[a]]);
        lambda[active[a]] = v;
        if (v > 1e-14) {
          next.push_back(active[a]);
        } else {
          lambda[active[a]] = 0.0;
        }
      }
      if (next.empty()) next.push_back(active[0]);
      active = next;
      const double total = lambda.sum();
      if (total > 0.0) lambda /= total;
    }
    x = p * lambda;
  }
  NearestPointResult out;
  out.weights = lambda;
  out.point = x + query;
  out.distance = x.norm();
  return out;
}

}  // namespace rpdhg
