#include "cshmm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cshmm/machines/bc.hpp"
#include "cshmm/series.hpp"

namespace cshmm {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next() {
  std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

StateKey sample_stationary_state(const MachineSpec& spec, Rng& rng,
                                 double eps) {
  if (eps <= 0.0 || eps >= 1.0) throw ParamError("eps must lie in (0,1)");
  if (spec.has_native_sampler()) {
    if (auto* bc = dynamic_cast<const BcTrueMachine*>(&spec))
      return bc->sample_stationary_native([&rng] { return rng.unit(); }, eps);
  }
  Support sup = support_enumerator(spec, eps);
  double named = sup.named_mass();
  double u = rng.unit() * named;
  double cum = 0.0;
  for (const auto& [k, m] : sup.entries) {
    cum += m;
    if (cum >= u) return k;
  }
  return sup.entries.back().first;
}

Trajectory sample_path(const MachineSpec& spec, Rng& rng, const StateKey& start,
                       std::uint64_t length) {
  Trajectory traj;
  traj.states.reserve(length + 1);
  traj.symbols.reserve(length);
  traj.states.push_back(start);
  StateKey cur = start;
  for (std::uint64_t step = 0; step < length; ++step) {
    auto edges = spec.expand(cur);
    double u = rng.unit();
    double cum = 0.0;
    const Edge* chosen = &edges.back();
    for (const Edge& e : edges) {
      cum += e.prob;
      if (u < cum) {
        chosen = &e;
        break;
      }
    }
    traj.symbols.push_back(chosen->symbol);
    cur = chosen->to;
    traj.states.push_back(cur);
  }
  traj.seed = 0;
  return traj;
}

EstimateReport empirical_block_entropy(const std::vector<Trajectory>& trajs,
                                       std::int64_t t, const Enclosure& exact) {
  if (t < 1) throw ParamError("empirical_block_entropy: t >= 1");
  std::map<Word, std::uint64_t> counts;
  std::uint64_t windows = 0;
  std::vector<std::map<Word, std::uint64_t>> per_traj(trajs.size());
  for (std::size_t j = 0; j < trajs.size(); ++j) {
    const Word& sym = trajs[j].symbols;
    if (sym.size() < static_cast<std::size_t>(t)) continue;
    for (std::size_t a = 0; a + t <= sym.size(); ++a) {
      Word w(sym.begin() + a, sym.begin() + a + t);
      ++counts[w];
      ++per_traj[j][w];
      ++windows;
    }
  }
  if (windows < 10 * counts.size() || windows == 0)
    throw InsufficientDataError("need >= 10 windows per distinct word");

  auto plugin = [](const std::map<Word, std::uint64_t>& c, double n) {
    double h = 0.0;
    for (const auto& [w, k] : c) h += xlgx_neg(static_cast<double>(k) / n);
    return h;
  };
  double h_all = plugin(counts, static_cast<double>(windows));

  // leave-one-trajectory-out jackknife
  std::vector<double> loo;
  for (std::size_t j = 0; j < trajs.size(); ++j) {
    if (per_traj[j].empty()) continue;
    std::map<Word, std::uint64_t> rest = counts;
    std::uint64_t w_rest = windows;
    for (const auto& [w, k] : per_traj[j]) {
      rest[w] -= k;
      if (rest[w] == 0) rest.erase(w);
      w_rest -= k;
    }
    if (w_rest == 0) continue;
    loo.push_back(plugin(rest, static_cast<double>(w_rest)));
  }
  double se = 0.0;
  if (loo.size() >= 2) {
    double mean = 0.0;
    for (double v : loo) mean += v;
    mean /= static_cast<double>(loo.size());
    double ss = 0.0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    double g = static_cast<double>(loo.size());
    se = std::sqrt(std::max(0.0, (g - 1.0) / g * ss));
  }

  EstimateReport rep;
  rep.quantity = "H[X^" + std::to_string(t) + "]";
  rep.estimate = h_all;
  rep.standard_error = se;
  rep.exact = exact;
  rep.samples = windows;
  return rep;
}

ReturnTimeReport mean_return_time(const MachineSpec& spec, Rng& rng,
                                  const StateKey& state, std::uint64_t n,
                                  const Enclosure& kac) {
  if (n < 1) throw ParamError("mean_return_time: n >= 1");
  ReturnTimeReport rep;
  KahanSum sum, sumsq;
  StateKey cur = state;
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t tau = 0;
    do {
      auto edges = spec.expand(cur);
      double u = rng.unit();
      double cum = 0.0;
      const Edge* chosen = &edges.back();
      for (const Edge& e : edges) {
        cum += e.prob;
        if (u < cum) {
          chosen = &e;
          break;
        }
      }
      cur = chosen->to;
      ++tau;
    } while (!(cur == state));
    double td = static_cast<double>(tau);
    sum.add(td);
    sumsq.add(td * td);
    rep.max_return_time = std::max(rep.max_return_time, tau);
    if (tau != 1 && tau % 2 != 0) rep.all_one_or_even = false;
  }
  double nd = static_cast<double>(n);
  double mean = sum.value() / nd;
  double var = std::max(0.0, sumsq.value() / nd - mean * mean);
  rep.estimate.quantity = "mean return time";
  rep.estimate.estimate = mean;
  rep.estimate.standard_error = std::sqrt(var / nd);
  rep.estimate.exact = kac;
  rep.estimate.samples = n;
  return rep;
}

}  // namespace cshmm
