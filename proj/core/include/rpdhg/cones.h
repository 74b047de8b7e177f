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

#ifndef RPDHG_CONES_H_
#define RPDHG_CONES_H_

#include <string>
#include <vector>

#include "Eigen/Core"
#include "rpdhg/linalg.h"

namespace rpdhg {

enum class ConeType { kNonNeg, kSecondOrder };

// A second-order block of dimension d stores (v, t) with t last.
struct ConeBlock {
  ConeType type = ConeType::kNonNeg;
  int dim = 0;
  bool operator==(const ConeBlock&) const = default;
};

class ConeSpec {
 public:
  ConeSpec() = default;
  // Throws InputError on invalid block dimensions.
  explicit ConeSpec(std::vector<ConeBlock> blocks);
  static ConeSpec NonNeg(int n);
  static ConeSpec SecondOrder(int d);

  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  int dim() const { return dim_; }
  bool IsOrthant() const;
  ConeSpec Product(const ConeSpec& other) const;
  std::string ToString() const;
  bool operator==(const ConeSpec&) const = default;

 private:
  std::vector<ConeBlock> blocks_;
  int dim_ = 0;
};

struct BarrierInfo {
  int theta = 0;
  std::vector<int> block_theta;
};

Vec Project(const ConeSpec& k, const Vec& v);
void ProjectInPlace(const ConeSpec& k, Vec& v);
double Distance(const ConeSpec& k, const Vec& v);
ConeSpec Dual(const ConeSpec& k);
double Width(const ConeSpec& k);
BarrierInfo BarrierTheta(const ConeSpec& k);

// Smallest blockwise distance to the boundary (negative outside the cone).
double BoundaryMargin(const ConeSpec& k, const Vec& x);
// True when the margin is at least 1e-12 * (1 + ||x||).
bool IsStrictlyInterior(const ConeSpec& k, const Vec& x);

// Block-diagonal symmetric operator. Orthant blocks are stored as
// diagonals, second-order blocks as dense symmetric matrices.
class BlockDiagOperator {
 public:
  struct Block {
    int offset = 0;
    int dim = 0;
    bool diagonal = true;
    Vec diag;
    Eigen::MatrixXd dense;
  };

  BlockDiagOperator() = default;
  static BlockDiagOperator Identity(const ConeSpec& k);
  static BlockDiagOperator Diagonal(const Vec& d);

  void AddDiagonalBlock(const Vec& d);
  void AddDenseBlock(const Eigen::MatrixXd& m);

  int dim() const { return dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  bool IsDiagonal() const;
  // Entries of the diagonal blocks in place, dense blocks contribute their
  // diagonal.
  Vec DiagonalEntries() const;
  Vec Apply(const Vec& v) const;
  Vec ApplyInverse(const Vec& v) const;
  Eigen::MatrixXd ToDense() const;
  // Returns this * other for operators with identical block structure.
  BlockDiagOperator Compose(const BlockDiagOperator& other) const;
  // Right-multiplies a sparse matrix: A * this. Only diagonal operators.
  SparseMatrix ScaleColumns(const SparseMatrix& a) const;

 private:
  std::vector<Block> blocks_;
  int dim_ = 0;
};

// Barrier Hessian of -sum ln x_i (orthant) and -ln(t^2 - ||v||^2) (SOC).
BlockDiagOperator BarrierHessian(const ConeSpec& k, const Vec& x);

// D1 = sqrt(eta) * H(x)^{-1/2}. Throws InputError unless x is strictly
// interior and eta > 0.
BlockDiagOperator HessianSqrtInvScaled(const ConeSpec& k, const Vec& x,
                                       double eta);

// Clamps diagonal entries (or eigenvalues of dense blocks) into [lo, hi].
BlockDiagOperator ClipDiagonal(const BlockDiagOperator& d, double lo = 1e-5,
                               double hi = 1e5);

}  // namespace rpdhg

#endif  // RPDHG_CONES_H_
