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


#ifndef RPDHG_TESTS_TEST_UTIL_H_
#define RPDHG_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "rpdhg/model.h"

namespace rpdhg::testing {

inline std::string DataPath(const std::string& file) {
  return std::string(RPDHG_TEST_DATA_DIR) + "/" + file;
}

// min ((2+nu)/10) x1 + x2 + (1+nu) x3  s.t.  -10 x1 + x2 + x3 = 1,  x >= 0.
inline ClpInstance Pnu(double nu) {
  Eigen::MatrixXd a(1, 3);
  a << -10.0, 1.0, 1.0;
  Vec b(1);
  b << 1.0;
  Vec c(3);
  c << (2.0 + nu) / 10.0, 1.0, 1.0 + nu;
  return MakeInstance("p_nu", SparseMatrix::FromDense(a), b, c,
                      ConeSpec::NonNeg(3));
}

// Portable uniform stream: the standard distributions are not specified
// bit-for-bit across library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}
  double Uniform() { return (gen_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal() {
    const double u1 = std::max(Uniform(), 1e-300);
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  Vec NormalVec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = Normal();
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

// Strictly feasible, bounded LP: b = A x0, c = A^T y0 + s0 with x0, s0 > 0.
inline ClpInstance RandomLp(uint64_t seed, int m, int n) {
  Rng rng(seed);
  Eigen::MatrixXd a(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.Normal();
  }
  Vec x0(n), s0(n);
  for (int j = 0; j < n; ++j) x0[j] = rng.Uniform(0.5, 1.5);
  for (int j = 0; j < n; ++j) s0[j] = rng.Uniform(0.5, 1.5);
  const Vec y0 = rng.NormalVec(m);
  return MakeInstance("random_" + std::to_string(seed),
                      SparseMatrix::FromDense(a), a * x0,
                      a.transpose() * y0 + s0, ConeSpec::NonNeg(n));
}

inline std::vector<ClpInstance> RandomSuite(int count, uint64_t first_seed) {
  std::vector<ClpInstance> out;
  for (int k = 0; k < count; ++k) {
    const uint64_t seed = first_seed + k;
    const int m = 2 + static_cast<int>(seed % 3);
    out.push_back(RandomLp(seed, m, m + 3));
  }
  return out;
}

// Optimal values of RandomSuite(20, 101), cross-checked with HiGHS.
inline constexpr double kRandomSuiteOptima[20] = {
    1.806941487549386,   12.135522624152316, 4.445856314832543,
    2.396712218909817,   0.26776225030706446, -9.787985570210745,
    3.481851541036766,   2.4937892175071426, 7.90364455692149,
    2.555446096597,      1.4536662003270104, 2.441524462782457,
    3.2483418047695802,  0.8893469332784254, 1.5311354566070363,
    -1.7757929208144554, 0.8780882864114645, 2.039882939242975,
    2.9055109144986213,  5.2566359538068825};

// Standard-form optimal values of the MPS fixtures, cross-checked with HiGHS
// on the original row/bound form.
inline constexpr double kDietOptimum = 2.132042253521127;
inline constexpr double kTransportOptimum = 400.0;
inline constexpr double kProductionOptimum = -1832.1428571428569;

struct BasisOptimum {
  bool found = false;
  Vec x;
  Vec y;
  double objective = 0.0;
};

// Exhaustive basis enumeration: the optimal basic feasible solution and its
// dual multipliers. Independent of the library solvers.
inline BasisOptimum BruteForceLp(const Eigen::MatrixXd& a, const Vec& b,
                                 const Vec& c) {
  const int m = a.rows();
  const int n = a.cols();
  BasisOptimum best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<int> pick(n, 0);
  std::fill(pick.end() - m, pick.end(), 1);
  do {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) {
      if (pick[j]) cols.push_back(j);
    }
    Eigen::MatrixXd basis(m, m);
    Vec cb(m);
    for (int k = 0; k < m; ++k) {
      basis.col(k) = a.col(cols[k]);
      cb[k] = c[cols[k]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (lu.rank() < m) continue;
    const Vec xb = lu.solve(b);
    if (xb.minCoeff() < -1e-12) continue;
    Vec x = Vec::Zero(n);
    for (int k = 0; k < m; ++k) x[cols[k]] = std::max(xb[k], 0.0);
    const double obj = c.dot(x);
    const Vec y = basis.transpose().fullPivLu().solve(cb);
    const Vec s = c - a.transpose() * y;
    const bool dual_feasible = s.minCoeff() >= -1e-10;
    if (dual_feasible && obj < best.objective + 1e-12) {
      best.found = true;
      best.x = x;
      best.y = y;
      best.objective = obj;
    }
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

inline BasisOptimum BruteForceLp(const ClpInstance& inst) {
  return BruteForceLp(inst.a.ToDense(), inst.b, inst.c);
}

}  // namespace rpdhg::testing

#endif  // RPDHG_TESTS_TEST_UTIL_H_
