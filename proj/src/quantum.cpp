#include "collatt/quantum.hpp"

#include <cmath>
#include <random>
#include <string>

#include "collatt/rng.hpp"

namespace collatt {

SlotPair adjacent_pair(int first, int num_slots) {
  if (num_slots < 2) throw std::invalid_argument("slot pair: need >= 2 slots");
  if (first < 0 || first >= num_slots)
    throw std::invalid_argument("slot pair: slot " + std::to_string(first) +
                                " out of range");
  return SlotPair{first, (first + 1) % num_slots};
}

namespace {

void check_pair(const StateVector& psi, SlotPair pair) {
  const int n = psi.num_qubits();
  if (pair.first < 0 || pair.first >= n || pair.second != (pair.first + 1) % n)
    throw std::invalid_argument("slot pair (" + std::to_string(pair.first) +
                                "," + std::to_string(pair.second) +
                                ") is not an adjacent cyclic pair");
}

void check_slot(const StateVector& psi, int slot) {
  if (slot < 0 || slot >= psi.num_qubits())
    throw std::invalid_argument("slot " + std::to_string(slot) +
                                " out of range");
}

void check_bit(int value, const char* what) {
  if (value != 0 && value != 1)
    throw std::invalid_argument(std::string(what) + " must be 0 or 1");
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 40)
    throw std::invalid_argument("state vector: bad qubit count");
  amps_.assign(dim(), cd(0.0, 0.0));
  amps_[0] = cd(1.0, 0.0);
}

StateVector StateVector::basis_state(int num_qubits, uint64_t index) {
  StateVector psi(num_qubits);
  psi.amps_[0] = cd(0.0, 0.0);
  psi.amps_.at(index) = cd(1.0, 0.0);
  return psi;
}

StateVector::StateVector(int num_qubits, std::vector<cd> amps)
    : num_qubits_(num_qubits), amps_(std::move(amps)) {
  if (num_qubits < 1 || num_qubits > 40)
    throw std::invalid_argument("state vector: bad qubit count");
  if (amps_.size() != dim())
    throw std::invalid_argument("state vector: expected 2^" +
                                std::to_string(num_qubits) + " amplitudes");
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const cd& a : amps_) s += std::norm(a);
  return s;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw config_error("state vector: cannot normalize zero state");
  StateVector out = *this;
  for (cd& a : out.amps_) a /= n;
  return out;
}

void StateVector::check_normalized(double tol) const {
  const double n2 = norm_squared();
  if (std::abs(n2 - 1.0) > tol)
    throw std::logic_error("state vector norm drifted: |psi|^2 = " +
                           std::to_string(n2));
}

double StateVector::max_abs_diff(const StateVector& other) const {
  if (other.num_qubits_ != num_qubits_)
    throw std::invalid_argument("state vector: dimension mismatch");
  double m = 0.0;
  for (uint64_t i = 0; i < dim(); ++i)
    m = std::max(m, std::abs(amps_[i] - other.amps_[i]));
  return m;
}

void apply_two_site_inplace(StateVector& psi, SlotPair pair,
                            const Eigen::Matrix4cd& m) {
  check_pair(psi, pair);
  const uint64_t bit_first = uint64_t{1} << pair.first;
  const uint64_t bit_second = uint64_t{1} << pair.second;
  const uint64_t mask = bit_first | bit_second;
  auto& a = psi.amplitudes();
  const uint64_t dim = psi.dim();
  // Matrix index convention: 2*b_first + b_second.
  const uint64_t sub[4] = {0, bit_second, bit_first, bit_first | bit_second};
  for (uint64_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    cd in[4];
    for (int k = 0; k < 4; ++k) in[k] = a[base | sub[k]];
    for (int r = 0; r < 4; ++r) {
      cd acc(0.0, 0.0);
      for (int c = 0; c < 4; ++c) acc += m(r, c) * in[c];
      a[base | sub[r]] = acc;
    }
  }
}

void apply_jump_inplace(StateVector& psi, SlotPair pair, VertexOutcome outcome,
                        JumpSpec spec) {
  check_pair(psi, pair);
  spec.validate();
  check_bit(outcome.alpha_l, "outcome alpha_L");
  check_bit(outcome.alpha_r, "outcome alpha_R");
  const double j_agree = jump_factor(spec, 0, 0);
  const double j_differ = jump_factor(spec, 0, 1);
  const uint64_t bit_l = uint64_t{1} << pair.first;
  const uint64_t bit_r = uint64_t{1} << pair.second;
  auto& a = psi.amplitudes();
  const uint64_t dim = psi.dim();
  for (uint64_t idx = 0; idx < dim; ++idx) {
    const int bl = (idx & bit_l) ? 1 : 0;
    const int br = (idx & bit_r) ? 1 : 0;
    const double jl = (bl == outcome.alpha_l) ? j_agree : j_differ;
    const double jr = (br == outcome.alpha_r) ? j_agree : j_differ;
    a[idx] *= jl * jr;
  }
}

void apply_link_jump_inplace(StateVector& psi, int slot, int alpha_hat,
                             JumpSpec spec) {
  check_slot(psi, slot);
  spec.validate();
  check_bit(alpha_hat, "alpha_hat");
  const double j_agree = jump_factor(spec, 0, 0);
  const double j_differ = jump_factor(spec, 0, 1);
  const uint64_t bit = uint64_t{1} << slot;
  auto& a = psi.amplitudes();
  const uint64_t dim = psi.dim();
  for (uint64_t idx = 0; idx < dim; ++idx) {
    const int b = (idx & bit) ? 1 : 0;
    a[idx] *= (b == alpha_hat) ? j_agree : j_differ;
  }
}

StateVector apply_unitary(const StateVector& psi, SlotPair pair,
                          const TwoQubitUnitary& u) {
  StateVector out = psi;
  apply_unitary_inplace(out, pair, u);
  return out;
}

void apply_unitary_inplace(StateVector& psi, SlotPair pair,
                           const TwoQubitUnitary& u) {
  psi.check_normalized();
  apply_two_site_inplace(psi, pair, u.matrix());
}

double jump_factor(JumpSpec spec, int alpha, int alpha_hat) {
  const double s = 1.0 / std::sqrt(1.0 + spec.x * spec.x);
  return alpha == alpha_hat ? s : spec.x * s;
}

HitResult link_hit(const StateVector& psi, int slot, int alpha_hat,
                   JumpSpec spec) {
  StateVector out = psi;
  double norm = 0.0;
  link_hit_inplace(out, slot, alpha_hat, spec, &norm);
  return HitResult{std::move(out), norm};
}

void link_hit_inplace(StateVector& psi, int slot, int alpha_hat, JumpSpec spec,
                      double* norm_out) {
  psi.check_normalized();
  apply_link_jump_inplace(psi, slot, alpha_hat, spec);
  const double n2 = psi.norm_squared();
  if (n2 <= 0.0)
    throw impossible_outcome("link hit: outcome " + std::to_string(alpha_hat) +
                             " on slot " + std::to_string(slot) +
                             " has zero probability");
  const double n = std::sqrt(n2);
  for (cd& a : psi.amplitudes()) a /= n;
  if (norm_out) *norm_out = n;
}

std::array<double, 2> link_jump_distribution(const StateVector& psi, int slot,
                                             JumpSpec spec) {
  psi.check_normalized();
  check_slot(psi, slot);
  spec.validate();
  const uint64_t bit = uint64_t{1} << slot;
  double w[2] = {0.0, 0.0};
  const auto& a = psi.amplitudes();
  for (uint64_t idx = 0; idx < psi.dim(); ++idx)
    w[(idx & bit) ? 1 : 0] += std::norm(a[idx]);
  const double s2 = 1.0 / (1.0 + spec.x * spec.x);
  const double x2 = spec.x * spec.x;
  return {s2 * (w[0] + x2 * w[1]), s2 * (w[1] + x2 * w[0])};
}

std::array<double, 4> vertex_jump_distribution(const StateVector& psi,
                                               SlotPair pair, JumpSpec spec) {
  psi.check_normalized();
  check_pair(psi, pair);
  spec.validate();
  const uint64_t bit_l = uint64_t{1} << pair.first;
  const uint64_t bit_r = uint64_t{1} << pair.second;
  double w[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  const auto& a = psi.amplitudes();
  for (uint64_t idx = 0; idx < psi.dim(); ++idx)
    w[(idx & bit_l) ? 1 : 0][(idx & bit_r) ? 1 : 0] += std::norm(a[idx]);
  const double s2 = 1.0 / (1.0 + spec.x * spec.x);
  const double x2 = spec.x * spec.x;
  std::array<double, 4> p{};
  for (int al = 0; al < 2; ++al) {
    for (int ar = 0; ar < 2; ++ar) {
      double acc = 0.0;
      for (int bl = 0; bl < 2; ++bl)
        for (int br = 0; br < 2; ++br)
          acc += (bl == al ? 1.0 : x2) * (br == ar ? 1.0 : x2) * w[bl][br];
      p[2 * al + ar] = s2 * s2 * acc;
    }
  }
  return p;
}

HitResult vertex_hit(const StateVector& psi, SlotPair pair,
                     VertexOutcome outcome, JumpSpec spec) {
  // L slot first, R slot second, as in the inductive dynamics; the pair form
  // is order free and the chain rule makes the norms multiply.
  HitResult l = link_hit(psi, pair.first, outcome.alpha_l, spec);
  double norm_r = 0.0;
  link_hit_inplace(l.state, pair.second, outcome.alpha_r, spec, &norm_r);
  return HitResult{std::move(l.state), l.norm * norm_r};
}

std::array<double, 4> born_conditional(const StateVector& psi,
                                       const std::map<int, int>& fixed,
                                       SlotPair free) {
  psi.check_normalized();
  check_pair(psi, free);
  const int n = psi.num_qubits();
  if (static_cast<int>(fixed.size()) != n - 2)
    throw std::invalid_argument(
        "born_conditional: fixed must cover all slots except the free pair");
  uint64_t base = 0;
  for (const auto& [slot, value] : fixed) {
    if (slot < 0 || slot >= n || slot == free.first || slot == free.second)
      throw std::invalid_argument("born_conditional: bad fixed slot " +
                                  std::to_string(slot));
    check_bit(value, "fixed value");
    if (value) base |= uint64_t{1} << slot;
  }
  const uint64_t bit1 = uint64_t{1} << free.first;
  const uint64_t bit2 = uint64_t{1} << free.second;
  std::array<double, 4> p{};
  double denom = 0.0;
  for (int v1 = 0; v1 < 2; ++v1) {
    for (int v2 = 0; v2 < 2; ++v2) {
      const uint64_t idx = base | (v1 ? bit1 : 0) | (v2 ? bit2 : 0);
      const double w = std::norm(psi.amplitude(idx));
      p[2 * v1 + v2] = w;
      denom += w;
    }
  }
  if (denom <= 0.0)
    throw std::domain_error("born_conditional: conditioning on a null event");
  for (double& v : p) v /= denom;
  return p;
}

StateVector random_state(int num_qubits, uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed ^ 0x7374617465000042ull));
  std::vector<cd> amps;
  const uint64_t dim = uint64_t{1} << num_qubits;
  amps.reserve(dim);
  for (uint64_t i = 0; i < dim; ++i)
    amps.emplace_back(standard_normal(rng), standard_normal(rng));
  return StateVector(num_qubits, std::move(amps)).normalized();
}

}  // namespace collatt
