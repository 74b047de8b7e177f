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

#include "rpdhg/cones.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "Eigen/Eigenvalues"
#include "rpdhg/errors.h"

namespace rpdhg {

ConeSpec::ConeSpec(std::vector<ConeBlock> blocks) : blocks_(std::move(blocks)) {
  for (const ConeBlock& b : blocks_) {
    if (b.dim < 1) throw InputError("cone block dimension must be >= 1");
    if (b.type == ConeType::kSecondOrder && b.dim < 2) {
      throw InputError("second-order block dimension must be >= 2");
    }
    dim_ += b.dim;
  }
}

ConeSpec ConeSpec::NonNeg(int n) {
  if (n == 0) return ConeSpec();
  return ConeSpec({{ConeType::kNonNeg, n}});
}

ConeSpec ConeSpec::SecondOrder(int d) {
  return ConeSpec({{ConeType::kSecondOrder, d}});
}

bool ConeSpec::IsOrthant() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const ConeBlock& b) {
    return b.type == ConeType::kNonNeg;
  });
}

ConeSpec ConeSpec::Product(const ConeSpec& other) const {
  std::vector<ConeBlock> blocks = blocks_;
  blocks.insert(blocks.end(), other.blocks_.begin(), other.blocks_.end());
  return ConeSpec(std::move(blocks));
}

std::string ConeSpec::ToString() const {
  std::ostringstream out;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    if (i > 0) out << " x ";
    out << (blocks_[i].type == ConeType::kNonNeg ? "NonNeg(" : "SecondOrder(")
        << blocks_[i].dim << ")";
  }
  return out.str();
}

namespace {

void CheckDim(const ConeSpec& k, const Vec& v) {
  if (v.size() != k.dim()) throw InputError("cone dimension mismatch");
}

void ProjectSoc(double* p, int dim) {
  const int d = dim - 1;
  double vnorm2 = 0.0;
  for (int i = 0; i < d; ++i) vnorm2 += p[i] * p[i];
  const double vnorm = std::sqrt(vnorm2);
  const double t = p[d];
  if (vnorm <= -t) {
    for (int i = 0; i < dim; ++i) p[i] = 0.0;
  } else if (vnorm <= t) {
    return;
  } else {
    const double scale = 0.5 * (1.0 + t / vnorm);
    for (int i = 0; i < d; ++i) p[i] *= scale;
    p[d] = scale * vnorm;
  }
}

}  // namespace

void ProjectInPlace(const ConeSpec& k, Vec& v) {
  CheckDim(k, v);
  int off = 0;
  for (const ConeBlock& b : k.blocks()) {
    if (b.type == ConeType::kNonNeg) {
      for (int i = off; i < off + b.dim; ++i) v[i] = std::max(v[i], 0.0);
    } else {
      ProjectSoc(v.data() + off, b.dim);
    }
    off += b.dim;
  }
}

Vec Project(const ConeSpec& k, const Vec& v) {
  Vec out = v;
  ProjectInPlace(k, out);
  return out;
}

double Distance(const ConeSpec& k, const Vec& v) {
  return (v - Project(k, v)).norm();
}

ConeSpec Dual(const ConeSpec& k) { return k; }

double Width(const ConeSpec& k) {
  // Combining tau1, tau2 into tau1*tau2/sqrt(tau1^2+tau2^2) is associative:
  // it equals 1/sqrt(1/tau1^2 + 1/tau2^2).
  double inv_sq = 0.0;
  for (const ConeBlock& b : k.blocks()) {
    const double w =
        b.type == ConeType::kNonNeg ? 1.0 / std::sqrt(b.dim) : 1.0 / std::sqrt(2.0);
    inv_sq += 1.0 / (w * w);
  }
  if (inv_sq == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(inv_sq);
}

BarrierInfo BarrierTheta(const ConeSpec& k) {
  BarrierInfo info;
  for (const ConeBlock& b : k.blocks()) {
    const int t = b.type == ConeType::kNonNeg ? b.dim : 2;
    info.block_theta.push_back(t);
    info.theta += t;
  }
  return info;
}

double BoundaryMargin(const ConeSpec& k, const Vec& x) {
  CheckDim(k, x);
  double margin = std::numeric_limits<double>::infinity();
  int off = 0;
  for (const ConeBlock& b : k.blocks()) {
    if (b.type == ConeType::kNonNeg) {
      for (int i = off; i < off + b.dim; ++i) margin = std::min(margin, x[i]);
    } else {
      const double vnorm = x.segment(off, b.dim - 1).norm();
      margin = std::min(margin, (x[off + b.dim - 1] - vnorm) / std::sqrt(2.0));
    }
    off += b.dim;
  }
  return margin;
}

bool IsStrictlyInterior(const ConeSpec& k, const Vec& x) {
  return BoundaryMargin(k, x) >= 1e-12 * (1.0 + x.norm());
}

BlockDiagOperator BlockDiagOperator::Identity(const ConeSpec& k) {
  BlockDiagOperator op;
  for (const ConeBlock& b : k.blocks()) op.AddDiagonalBlock(Vec::Ones(b.dim));
  return op;
}

BlockDiagOperator BlockDiagOperator::Diagonal(const Vec& d) {
  BlockDiagOperator op;
  op.AddDiagonalBlock(d);
  return op;
}

void BlockDiagOperator::AddDiagonalBlock(const Vec& d) {
  Block b;
  b.offset = dim_;
  b.dim = static_cast<int>(d.size());
  b.diagonal = true;
  b.diag = d;
  dim_ += b.dim;
  blocks_.push_back(std::move(b));
}

void BlockDiagOperator::AddDenseBlock(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InputError("dense block must be square");
  Block b;
  b.offset = dim_;
  b.dim = static_cast<int>(m.rows());
  b.diagonal = false;
  b.dense = m;
  dim_ += b.dim;
  blocks_.push_back(std::move(b));
}

bool BlockDiagOperator::IsDiagonal() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](const Block& b) { return b.diagonal; });
}

Vec BlockDiagOperator::DiagonalEntries() const {
  Vec out(dim_);
  for (const Block& b : blocks_) {
    out.segment(b.offset, b.dim) = b.diagonal ? b.diag : Vec(b.dense.diagonal());
  }
  return out;
}

Vec BlockDiagOperator::Apply(const Vec& v) const {
  if (v.size() != dim_) throw InputError("operator dimension mismatch");
  Vec out(dim_);
  for (const Block& b : blocks_) {
    if (b.diagonal) {
      out.segment(b.offset, b.dim) =
          b.diag.cwiseProduct(v.segment(b.offset, b.dim));
    } else {
      out.segment(b.offset, b.dim) = b.dense * v.segment(b.offset, b.dim);
    }
  }
  return out;
}

Vec BlockDiagOperator::ApplyInverse(const Vec& v) const {
  if (v.size() != dim_) throw InputError("operator dimension mismatch");
  Vec out(dim_);
  for (const Block& b : blocks_) {
    if (b.diagonal) {
      out.segment(b.offset, b.dim) =
          v.segment(b.offset, b.dim).cwiseQuotient(b.diag);
    } else {
      out.segment(b.offset, b.dim) =
          b.dense.ldlt().solve(Vec(v.segment(b.offset, b.dim)));
    }
  }
  return out;
}

Eigen::MatrixXd BlockDiagOperator::ToDense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const Block& b : blocks_) {
    if (b.diagonal) {
      out.block(b.offset, b.offset, b.dim, b.dim) = b.diag.asDiagonal();
    } else {
      out.block(b.offset, b.offset, b.dim, b.dim) = b.dense;
    }
  }
  return out;
}

BlockDiagOperator BlockDiagOperator::Compose(
    const BlockDiagOperator& other) const {
  if (other.dim_ != dim_ || other.blocks_.size() != blocks_.size()) {
    throw InputError("compose: block structure mismatch");
  }
  BlockDiagOperator out;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const Block& a = blocks_[i];
    const Block& b = other.blocks_[i];
    if (a.dim != b.dim) throw InputError("compose: block size mismatch");
    if (a.diagonal && b.diagonal) {
      out.AddDiagonalBlock(a.diag.cwiseProduct(b.diag));
    } else {
      const Eigen::MatrixXd ma =
          a.diagonal ? Eigen::MatrixXd(a.diag.asDiagonal()) : a.dense;
      const Eigen::MatrixXd mb =
          b.diagonal ? Eigen::MatrixXd(b.diag.asDiagonal()) : b.dense;
      out.AddDenseBlock(ma * mb);
    }
  }
  return out;
}

SparseMatrix BlockDiagOperator::ScaleColumns(const SparseMatrix& a) const {
  if (a.cols() != dim_) throw InputError("scale_columns: dimension mismatch");
  if (IsDiagonal()) return a.Scaled(Vec::Ones(a.rows()), DiagonalEntries());
  return SparseMatrix::FromDense(a.ToDense() * ToDense());
}

namespace {

Eigen::MatrixXd SocHessian(const Vec& x) {
  const int dim = static_cast<int>(x.size());
  Vec jx = -x;
  jx[dim - 1] = x[dim - 1];
  const double q = x.dot(jx);
  Eigen::MatrixXd j = -Eigen::MatrixXd::Identity(dim, dim);
  j(dim - 1, dim - 1) = 1.0;
  return -2.0 * j / q + 4.0 * jx * jx.transpose() / (q * q);
}

}  // namespace

BlockDiagOperator BarrierHessian(const ConeSpec& k, const Vec& x) {
  if (!IsStrictlyInterior(k, x)) {
    throw InputError("barrier Hessian requires a strictly interior point");
  }
  BlockDiagOperator h;
  int off = 0;
  for (const ConeBlock& b : k.blocks()) {
    if (b.type == ConeType::kNonNeg) {
      h.AddDiagonalBlock(x.segment(off, b.dim).array().square().inverse());
    } else {
      h.AddDenseBlock(SocHessian(x.segment(off, b.dim)));
    }
    off += b.dim;
  }
  return h;
}

BlockDiagOperator HessianSqrtInvScaled(const ConeSpec& k, const Vec& x,
                                       double eta) {
  if (!(eta > 0.0)) throw InputError("eta must be positive");
  if (!IsStrictlyInterior(k, x)) {
    throw InputError("rescaling point is not strictly interior");
  }
  const double se = std::sqrt(eta);
  BlockDiagOperator d1;
  int off = 0;
  for (const ConeBlock& b : k.blocks()) {
    if (b.type == ConeType::kNonNeg) {
      d1.AddDiagonalBlock(se * x.segment(off, b.dim));
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
          SocHessian(x.segment(off, b.dim)));
      const Vec inv_sqrt = eig.eigenvalues().array().rsqrt();
      d1.AddDenseBlock(se * eig.eigenvectors() * inv_sqrt.asDiagonal() *
                       eig.eigenvectors().transpose());
    }
    off += b.dim;
  }
  return d1;
}

BlockDiagOperator ClipDiagonal(const BlockDiagOperator& d, double lo,
                               double hi) {
  if (lo > hi) throw InputError("clip_diagonal: lo > hi");
  BlockDiagOperator out;
  for (const auto& b : d.blocks()) {
    if (b.diagonal) {
      out.AddDiagonalBlock(b.diag.cwiseMax(lo).cwiseMin(hi));
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b.dense);
      const Vec clipped = eig.eigenvalues().cwiseMax(lo).cwiseMin(hi);
      out.AddDenseBlock(eig.eigenvectors() * clipped.asDiagonal() *
                        eig.eigenvectors().transpose());
    }
  }
  return out;
}

}  // namespace rpdhg
