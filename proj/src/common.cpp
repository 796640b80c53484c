#include "sigmak/common.hpp"

#include <cmath>

namespace sigmak {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

Vec unit_vector(int n, int i) {
  Vec e = Vec::Zero(n);
  e[i] = 1.0;
  return e;
}

Mat tangent_basis(const Vec& y) {
  const int n = static_cast<int>(y.size());
  // Householder reflection H with H e_1 = y; its remaining columns span y^perp.
  Vec v = y - unit_vector(n, 0);
  Mat H = Mat::Identity(n, n);
  const double vv = v.squaredNorm();
  if (vv > 1e-30) H -= 2.0 * v * v.transpose() / vv;
  return H.rightCols(n - 1);
}

}  // namespace sigmak
