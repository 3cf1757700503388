#include <cmath>

#include "cshmm/machines/bc.hpp"
#include "cshmm/series.hpp"

namespace cshmm {

namespace {

const Alphabet kBcAlphabet = {{0, '0'}, {1, '1'}, {2, '2'}, {3, '3'}, {4, '4'}};

// Start-support indices up to this floor are always enumerated; the tail
// hooks below rely on unenumerated starts being deeper than any analysed
// window (word lengths are capped at kMaxWindow).
constexpr std::int64_t kMinTruncationIndex = 66;
constexpr std::size_t kMaxWindow = 64;

// Series term of the root-mass normalization:
//   f(i) = (1/i^2) [1 + (i-1) p_i] = 1/i - 1/(i+1) + 2/(i+1)^2,
// positive and decreasing on [1, inf), integral_n^inf f = ln((n+1)/n) + 2/(n+1).
double norm_f(double x) {
  return 1.0 / x - 1.0 / (x + 1.0) + 2.0 / ((x + 1.0) * (x + 1.0));
}
double norm_tail_integral(double n) {
  return std::log((n + 1.0) / n) + 2.0 / (n + 1.0);
}

std::uint8_t copy_symbol(bool bit) { return bit ? 3 : 2; }

}  // namespace

RootEntropyCheck bc_root_entropy_check(double q0) {
  if (!(q0 > 0.0 && q0 < 0.5))
    throw ParamError("bc: q0 must lie in (0, 1/2)");
  double p0 = 1.0 - 2.0 * q0;
  double h = xlgx_neg(p0) + 2.0 * xlgx_neg(q0);
  return {h, h <= 1.0 / 300.0};
}

BcNormalizer bc_normalizer(double q0, double tol) {
  auto check = bc_root_entropy_check(q0);
  if (!check.pass)
    throw ParamError("bc: q0 violates the root entropy budget H <= 1/300");
  if (tol <= 0.0) throw ParamError("bc_normalizer: tol must be positive");
  std::int64_t n_terms = 1 << 10;
  for (int round = 0; round < 16; ++round) {
    Enclosure s = bracketed_series(1, n_terms, 1, norm_f, norm_tail_integral);
    Enclosure root = Enclosure(1.0) / (Enclosure(1.0) + 2.0 * q0 * s);
    if (root.width() <= tol)
      return {root, root * (2.0 * q0)};
    n_terms *= 2;
  }
  throw BudgetError("bc_normalizer: tol unreachable within term budget");
}

double bc_q(std::int64_t i) {
  double d = static_cast<double>(i);
  return d * d / (2.0 * (d + 1.0) * (d + 1.0));
}

double bc_p(std::int64_t i) {
  double d = static_cast<double>(i);
  return (2.0 * d + 1.0) / ((d + 1.0) * (d + 1.0));
}

double bc_branch_entropy(std::int64_t i) {
  double p = bc_p(i);
  return binary_entropy(p) + (1.0 - p);
}

Enclosure bc_wt_series(std::int64_t t) {
  if (t < 1) throw ParamError("bc_wt_series: t >= 1");
  double td = static_cast<double>(t);
  // g_t(x) = (2x+1)(x-t+1)/(x^2 (x+1)^2)
  //        = 1/x + (1-t)/x^2 - 1/(x+1) + t/(x+1)^2,
  // decreasing for x >= 2t; integral_n^inf = ln((n+1)/n) + (1-t)/n + t/(n+1).
  auto g = [td](double x) {
    return (2.0 * x + 1.0) * (x - td + 1.0) / (x * x * (x + 1.0) * (x + 1.0));
  };
  auto tail = [td](double n) {
    return std::log((n + 1.0) / n) + (1.0 - td) / n + td / (n + 1.0);
  };
  std::int64_t explicit_to = std::max<std::int64_t>(2 * t + 2, t + 4096);
  return bracketed_series(t, explicit_to, 2 * t + 1, g, tail);
}

// --- analysis presentation ---------------------------------------------

BcMachine::BcMachine(double q0) : MachineSpec(kBcAlphabet), q0_(q0) {
  auto norm = bc_normalizer(q0, 1e-13);
  root_mass_ = norm.root_mass;
  c_ = norm.copy_constant;
  h0_ = bc_root_entropy_check(q0).value;
}

std::vector<Edge> BcMachine::expand(const StateKey& k) const {
  if (k.tag == kRoot) {
    BitPath left, right;
    left.push_back(false);
    right.push_back(true);
    return {{0, q0_, tree(1, 0, left)},
            {1, q0_, tree(1, 0, right)},
            {4, p0(), root()}};
  }
  if (k.tag == kTree) {
    std::int64_t i = k.idx[0], u = k.idx[1];
    double qi = bc_q(i), pi = bc_p(i);
    std::vector<Edge> out;
    out.push_back({0, qi, tree(i + 1, u, k.path.with_back(false))});
    out.push_back({1, qi, tree(i + 1, u, k.path.with_back(true))});
    if (u > 0) {
      StateKey to = ret(u - 1, k.path);
      out.push_back({2, pi / 2.0, to});
      out.push_back({3, pi / 2.0, to});
    } else {
      out.push_back({copy_symbol(k.path.front()), pi,
                     ret(0, k.path.without_front())});
    }
    return out;
  }
  // return path
  std::int64_t u = k.idx[0];
  if (u > 0) {
    StateKey to = ret(u - 1, k.path);
    return {{2, 0.5, to}, {3, 0.5, to}};
  }
  return {{copy_symbol(k.path.front()), 1.0, ret(0, k.path.without_front())}};
}

double BcMachine::stationary_weight(const StateKey& k) const {
  double scale = 2.0 * q0_ * root_mass_.mid();
  if (k.tag == kRoot) return root_mass_.mid();
  if (k.tag == kTree) {
    std::int64_t i = k.idx[0], u = k.idx[1];
    if (u == i && k.path.empty())
      return scale / (static_cast<double>(i) * static_cast<double>(i));
    return 0.0;
  }
  std::int64_t u = k.idx[0];
  if (k.path.empty()) {
    double d = static_cast<double>(u) + 1.0;
    return scale / (d * d);
  }
  return 0.0;
}

Enclosure BcMachine::stationary_weight_bracket(const StateKey& k) const {
  if (k.tag == kRoot) return root_mass_;
  return Enclosure(stationary_weight(k)).widened(c_.width());
}

double BcMachine::enumerate_support(
    double eps, std::uint64_t max_states,
    const std::function<void(const StateKey&, double)>& sink) const {
  double scale = 2.0 * q0_ * root_mass_.hi;
  sink(root(), root_mass_.mid());
  std::uint64_t emitted = 1;
  std::int64_t n = 1;
  for (;; ++n) {
    // remaining mass beyond index n-1: tree tail sum_{i>=n} 1/i^2 plus
    // return tail sum_{r>=n} 1/(r+1)^2
    if (n > kMinTruncationIndex) {
      double tail =
          scale * (zeta2_tail(n).hi + zeta2_tail(n + 1).hi) + root_mass_.width();
      if (tail <= eps) return tail;
      if (emitted + 2 > max_states)
        return tail;
    }
    double base = 2.0 * q0_ * root_mass_.mid();
    double dn = static_cast<double>(n);
    sink(tree(n, n, {}), base / (dn * dn));
    sink(ret(n, {}), base / ((dn + 1.0) * (dn + 1.0)));
    emitted += 2;
  }
}

std::optional<double> BcMachine::state_entropy_override(const StateKey& k) const {
  if (k.tag == kRoot) return h0_;
  if (k.tag == kTree) return bc_branch_entropy(k.idx[0]);
  return 0.0;
}

double BcMachine::post_symbol_entropy_bound(std::uint8_t x) const {
  if (x == 2 || x == 3) return 0.0;  // copies land on return states or root
  if (x == 4) return h0_;
  return std::log2(3.0);  // descents land on tree nodes
}

double BcMachine::tail_survival_factor(const Word& w) const {
  if (w.size() >= kMaxWindow) return 1.0;
  double f = 1.0;
  for (auto c : w) {
    if (c == 4) return 0.0;  // unenumerated starts cannot reach the root here
    if (c == 2 || c == 3) f *= 0.5;
  }
  return f;
}

bool BcMachine::synchronized_key(const StateKey& k) const {
  if (k.tag == kRoot) return true;
  if (k.tag == kTree) return k.idx[1] == 0;
  return k.idx[0] == 0;
}

Enclosure BcMachine::entropy_rate_series(double tol) const {
  std::int64_t n = 1 << 12;
  for (int round = 0; round < 12; ++round) {
    KahanSum partial;
    for (std::int64_t i = 1; i <= n; ++i)
      partial.add(bc_branch_entropy(i) / (static_cast<double>(i) * i));
    Enclosure ztail = zeta2_tail(n + 1);
    // 1 <= H[(p_i, q_i, q_i)] <= lg 3 for all i >= 1
    Enclosure tail(ztail.lo, std::log2(3.0) * ztail.hi);
    Enclosure sum = Enclosure(partial.value()).widened(
                        partial.value() * 1e-14) + tail;
    Enclosure rate = root_mass_ * h0_ + c_ * sum;
    if (rate.width() <= tol) return rate;
    n *= 4;
  }
  throw BudgetError("bc entropy rate series: tol unreachable");
}

std::shared_ptr<const BcMachine> bc_machine(double q0) {
  return std::make_shared<const BcMachine>(q0);
}

// --- ground presentation -------------------------------------------------

BcTrueMachine::BcTrueMachine(double q0) : MachineSpec(kBcAlphabet), q0_(q0) {
  auto norm = bc_normalizer(q0, 1e-13);
  root_mass_ = norm.root_mass;
  c_ = norm.copy_constant;
}

std::vector<Edge> BcTrueMachine::expand(const StateKey& key) const {
  std::int64_t i = key.idx[0], k = key.idx[1];
  if (i == 0) {
    BitPath left, right;
    left.push_back(false);
    right.push_back(true);
    return {{0, q0_, state(1, 1, left)},
            {1, q0_, state(1, 1, right)},
            {4, 1.0 - 2.0 * q0_, root()}};
  }
  if (k == 1) {
    double qi = bc_q(i), pi = bc_p(i);
    StateKey back = i == 1 ? root() : state(i, 2, key.path);
    return {{0, qi, state(i + 1, 1, key.path.with_back(false))},
            {1, qi, state(i + 1, 1, key.path.with_back(true))},
            {copy_symbol(key.path.bit(0)), pi, back}};
  }
  // deterministic return: transition k -> k+1 emits copy symbol #k
  StateKey to = k == i ? root() : state(i, k + 1, key.path);
  return {{copy_symbol(key.path.bit(static_cast<std::uint32_t>(k - 1))), 1.0, to}};
}

double BcTrueMachine::stationary_weight(const StateKey& key) const {
  std::int64_t i = key.idx[0], k = key.idx[1];
  if (i == 0) return root_mass_.mid();
  double d = static_cast<double>(i);
  double base = c_.mid() / (d * d * std::pow(2.0, d));
  return k == 1 ? base : base * bc_p(i);
}

Enclosure BcTrueMachine::stationary_weight_bracket(const StateKey& key) const {
  if (key.idx[0] == 0) return root_mass_;
  return Enclosure(stationary_weight(key)).widened(c_.width());
}

double BcTrueMachine::enumerate_support(
    double eps, std::uint64_t max_states,
    const std::function<void(const StateKey&, double)>& sink) const {
  sink(root(), root_mass_.mid());
  std::uint64_t emitted = 1;
  std::int64_t i = 1;
  for (;; ++i) {
    double tail = 3.0 * c_.hi * zeta2_tail(i).hi + root_mass_.width();
    if (tail <= eps) return tail;
    std::int64_t per_depth = std::max<std::int64_t>(i, 1);
    std::uint64_t count = (std::uint64_t{1} << i) * per_depth;
    if (i >= 40 || emitted + count > max_states) return tail;
    for (std::uint64_t jm1 = 0; jm1 < (std::uint64_t{1} << i); ++jm1) {
      BitPath path = BitPath::from_index(jm1, static_cast<std::uint32_t>(i));
      for (std::int64_t k = 1; k <= per_depth; ++k)
        sink(state(i, k, path), stationary_weight(state(i, k, path)));
    }
    emitted += count;
  }
}

double BcTrueMachine::tail_survival_factor(const Word& w) const {
  // Depth truncation says nothing about the remaining return length, so only
  // the leading copy run (still-uniform path bits) certifies decay.
  if (w.size() >= kMaxWindow) return 1.0;
  double f = 1.0;
  for (auto c : w) {
    if (c != 2 && c != 3) break;
    f *= 0.5;
  }
  return f;
}

StateKey BcTrueMachine::sample_stationary_native(
    const std::function<double()>& unit, double eps) const {
  double u = unit();
  double root_p = root_mass_.mid();
  if (u < root_p) return root();
  double target = u - root_p;
  double c = c_.mid();
  std::int64_t cap = static_cast<std::int64_t>(
      std::min(1e7, std::max(16.0, 4.0 * c / std::max(eps, 1e-12))));
  double cum = 0.0;
  std::int64_t i = 1;
  for (; i < cap; ++i) {
    double d = static_cast<double>(i);
    cum += (c / (d * d)) * (1.0 + (d - 1.0) * bc_p(i));
    if (cum >= target) break;
  }
  double d = static_cast<double>(i);
  double mass_k1 = c / (d * d);
  std::int64_t k = 1;
  if (i >= 2) {
    double v = unit() * (mass_k1 * (1.0 + (d - 1.0) * bc_p(i)));
    if (v >= mass_k1) {
      k = 2 + static_cast<std::int64_t>((v - mass_k1) / (mass_k1 * bc_p(i)));
      k = std::min(k, i);
    }
  }
  BitPath path;
  for (std::int64_t b = 0; b < i; ++b) path.push_back(unit() < 0.5);
  return state(i, k, path);
}

std::shared_ptr<const BcTrueMachine> bc_machine_true(double q0) {
  return std::make_shared<const BcTrueMachine>(q0);
}

// --- state-class quotient --------------------------------------------------

BcClassChain::BcClassChain(double q0)
    : MachineSpec({{0, 'd'}, {1, 'c'}, {2, '4'}}), q0_(q0) {
  auto norm = bc_normalizer(q0, 1e-13);
  root_mass_ = norm.root_mass;
  c_ = norm.copy_constant;
}

std::vector<Edge> BcClassChain::expand(const StateKey& key) const {
  std::int64_t i = key.idx[0], k = key.idx[1];
  if (i == 0) return {{0, 2.0 * q0_, cls(1, 1)}, {2, 1.0 - 2.0 * q0_, root()}};
  if (k == 1) {
    StateKey back = i == 1 ? root() : cls(i, 2);
    return {{0, 2.0 * bc_q(i), cls(i + 1, 1)}, {1, bc_p(i), back}};
  }
  return {{1, 1.0, k == i ? root() : cls(i, k + 1)}};
}

double BcClassChain::stationary_weight(const StateKey& key) const {
  std::int64_t i = key.idx[0], k = key.idx[1];
  if (i == 0) return root_mass_.mid();
  double d = static_cast<double>(i);
  return k == 1 ? c_.mid() / (d * d) : c_.mid() * bc_p(i) / (d * d);
}

double BcClassChain::enumerate_support(
    double eps, std::uint64_t max_states,
    const std::function<void(const StateKey&, double)>& sink) const {
  sink(root(), root_mass_.mid());
  std::uint64_t emitted = 1;
  std::int64_t i = 1;
  for (;; ++i) {
    double tail = 3.0 * c_.hi * zeta2_tail(i).hi + root_mass_.width();
    if (tail <= eps) return tail;
    std::uint64_t count = static_cast<std::uint64_t>(std::max<std::int64_t>(i, 1));
    if (emitted + count > max_states) return tail;
    for (std::int64_t k = 1; k <= std::max<std::int64_t>(i, 1); ++k)
      sink(cls(i, k), stationary_weight(cls(i, k)));
    emitted += count;
  }
}

std::shared_ptr<const BcClassChain> bc_class_chain(double q0) {
  return std::make_shared<const BcClassChain>(q0);
}

}  // namespace cshmm
