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

#include "rpdhg/simplex.h"

#include <cmath>

#include "rpdhg/errors.h"

namespace rpdhg {
namespace {

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Vec& b)
      : m_(a.rows()), n_(a.cols()), t_(a.rows() + 1, a.cols() + a.rows() + 1) {
    t_.setZero();
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign * a.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, Rhs()) = sign * b[i];
      basis_[i] = n_ + i;
    }
  }

  int Rhs() const { return n_ + m_; }

  void SetObjective(const Vec& cost) {
    // cost covers all n_ + m_ columns; reduced costs relative to the basis.
    t_.row(m_).setZero();
    t_.row(m_).head(n_ + m_) = cost.transpose();
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  // Returns false when unbounded.
  bool Run(int allowed_cols, double tol, int max_pivots, int& pivots,
           bool& limit_hit) {
    limit_hit = false;
    while (true) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (t_(m_, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double p = t_(i, enter);
        if (p <= tol) continue;
        const double ratio = t_(i, Rhs()) / p;
        if (leave < 0 || ratio < best - tol * (1.0 + std::abs(best)) ||
            (std::abs(ratio - best) <= tol * (1.0 + std::abs(best)) &&
             basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      Pivot(leave, enter);
      if (++pivots >= max_pivots) {
        limit_hit = true;
        return true;
      }
    }
  }

  void Pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  int m() const { return m_; }
  int n() const { return n_; }
  double& at(int i, int j) { return t_(i, j); }
  double objective() const { return -t_(m_, Rhs()); }
  std::vector<int>& basis() { return basis_; }

  Vec Solution() const {
    Vec x = Vec::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = t_(i, n_ + m_);
    }
    return x;
  }

 private:
  int m_;
  int n_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

DenseLpResult SolveDenseLp(const Eigen::MatrixXd& a, const Vec& b,
                           const Vec& c, const DenseLpOptions& options) {
  if (a.rows() != b.size() || a.cols() != c.size()) {
    throw InputError("dense LP: dimension mismatch");
  }
  const int m = a.rows();
  const int n = a.cols();
  const double tol = options.tol;
  Tableau tab(a, b);
  DenseLpResult res;
  bool limit = false;

  Vec phase1 = Vec::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.SetObjective(phase1);
  tab.Run(n + m, tol, options.max_pivots, res.pivots, limit);
  if (limit) {
    res.status = DenseLpStatus::kPivotLimit;
    return res;
  }
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (tab.objective() > 1e3 * tol * scale) {
    res.status = DenseLpStatus::kInfeasible;
    return res;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[i] < n) continue;
    int col = -1;
    double big = tol;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.at(i, j)) > big) {
        big = std::abs(tab.at(i, j));
        col = j;
      }
    }
    if (col >= 0) tab.Pivot(i, col);
  }

  Vec phase2 = Vec::Zero(n + m);
  phase2.head(n) = c;
  tab.SetObjective(phase2);
  const bool bounded =
      tab.Run(n, tol, options.max_pivots, res.pivots, limit);
  res.x = tab.Solution();
  res.basis = tab.basis();
  res.objective = c.dot(res.x);
  if (limit) {
    res.status = DenseLpStatus::kPivotLimit;
  } else if (!bounded) {
    res.status = DenseLpStatus::kUnbounded;
  } else {
    res.status = DenseLpStatus::kOptimal;
  }
  return res;
}

}  // namespace rpdhg
