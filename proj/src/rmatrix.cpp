#include "collatt/rmatrix.hpp"

#include <complex>
#include <random>
#include <string>

#include "collatt/rng.hpp"

namespace collatt {

TwoQubitUnitary TwoQubitUnitary::identity() {
  return TwoQubitUnitary(Eigen::Matrix4cd::Identity());
}

TwoQubitUnitary TwoQubitUnitary::swap_gate() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 1;
  m(1, 2) = 1;  // |01> <- |10>
  m(2, 1) = 1;
  m(3, 3) = 1;
  return TwoQubitUnitary(m);
}

TwoQubitUnitary TwoQubitUnitary::haar_random(uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed ^ 0x756e697461727933ull));
  Eigen::Matrix4cd z;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      z(r, c) = std::complex<double>(standard_normal(rng), standard_normal(rng));
  Eigen::HouseholderQR<Eigen::Matrix4cd> qr(z);
  Eigen::Matrix4cd q = qr.householderQ();
  const Eigen::Matrix4cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the gauge so the distribution is Haar, not just unitary.
  for (int c = 0; c < 4; ++c) {
    const std::complex<double> d = r(c, c);
    q.col(c) *= d / std::abs(d);
  }
  return TwoQubitUnitary(q);
}

TwoQubitUnitary TwoQubitUnitary::from_matrix(const Eigen::Matrix4cd& m) {
  TwoQubitUnitary u(m);
  const double defect = u.unitarity_defect();
  if (defect > kUnitarityTol)
    throw config_error("rmatrix: matrix is not unitary (defect " +
                       std::to_string(defect) + ")");
  return u;
}

double TwoQubitUnitary::unitarity_defect() const {
  return (m_.adjoint() * m_ - Eigen::Matrix4cd::Identity())
      .cwiseAbs()
      .maxCoeff();
}

void RAssignment::add_override(int slot, int first_ordinal, int last_ordinal,
                               TwoQubitUnitary u) {
  if (first_ordinal < 0 || last_ordinal < first_ordinal)
    throw config_error("rmatrix override: bad ordinal range");
  rules_.push_back(Rule{slot, first_ordinal, last_ordinal, std::move(u)});
}

const TwoQubitUnitary& RAssignment::resolve(int slot, int pair_ordinal) const {
  for (auto it = rules_.rbegin(); it != rules_.rend(); ++it) {
    if (it->slot == slot && pair_ordinal >= it->first_ordinal &&
        pair_ordinal <= it->last_ordinal)
      return it->u;
  }
  return base_;
}

}  // namespace collatt
