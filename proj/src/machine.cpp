#include "cshmm/machine.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "cshmm/series.hpp"

namespace cshmm {

std::string word_str(const Alphabet& alpha, const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (auto c : w) s.push_back(alpha.at(c).glyph);
  return s;
}

std::string key_str(const StateKey& k) {
  std::ostringstream os;
  os << "(" << k.tag << ";" << k.idx[0] << "," << k.idx[1];
  if (!k.path.empty()) os << ";" << k.path.str();
  os << ")";
  return os.str();
}

double Support::named_mass() const {
  KahanSum s;
  for (const auto& [k, m] : entries) s.add(m);
  return s.value();
}

double SparseDistribution::named_mass() const {
  KahanSum s;
  for (const auto& [k, m] : mass) s.add(m);
  return s.value();
}

double MachineSpec::lg_alphabet() const {
  return std::log2(static_cast<double>(alphabet_.size()));
}

double MachineSpec::state_entropy(const StateKey& key) const {
  if (auto h = state_entropy_override(key)) return *h;
  double h = 0.0;
  for (const Edge& e : expand(key)) h += xlgx_neg(e.prob);
  return h;
}

Support support_enumerator(const MachineSpec& spec, double eps,
                           std::uint64_t max_states) {
  Support sup;
  sup.tail = spec.enumerate_support(
      eps, max_states, [&sup](const StateKey& k, double w) {
        sup.entries.emplace_back(k, w);
      });
  return sup;
}

ValidationReport validate_machine(const MachineSpec& spec,
                                  const std::vector<StateKey>& sample_keys,
                                  bool require_unifilar) {
  ValidationReport report;
  for (const StateKey& key : sample_keys) {
    auto edges = spec.expand(key);
    double sum = 0.0;
    std::set<std::uint8_t> seen;
    bool unifilar = true;
    for (const Edge& e : edges) {
      if (e.prob <= 0.0)
        throw Error("non-positive edge probability at " + key_str(key));
      if (e.symbol >= spec.alphabet_size())
        throw AlphabetError("edge symbol out of range at " + key_str(key));
      sum += e.prob;
      if (!seen.insert(e.symbol).second) {
        if (require_unifilar)
          throw DuplicateEdgeError("duplicate out-symbol at " + key_str(key));
        unifilar = false;
      }
    }
    if (std::abs(sum - 1.0) > 1e-12) throw NormalizationError(key_str(key), sum);
    report.states.push_back({key, sum, unifilar});
    report.all_unifilar = report.all_unifilar && unifilar;
  }
  return report;
}

SparseDistribution apply_symbol(const SparseDistribution& dist,
                                std::uint8_t symbol, const MachineSpec& spec) {
  if (symbol >= spec.alphabet_size())
    throw AlphabetError("symbol code " + std::to_string(symbol) +
                        " not in alphabet of " + spec.name());
  SparseDistribution out;
  out.tail = dist.tail;
  for (const auto& [key, m] : dist.mass) {
    for (const Edge& e : spec.expand(key)) {
      if (e.symbol == symbol) out.add(e.to, m * e.prob);
    }
  }
  return out;
}

Enclosure word_probability(const MachineSpec& spec, const Word& w, double eps) {
  if (eps <= 0.0 || eps >= 1.0) throw ParamError("eps must lie in (0,1)");
  for (auto c : w)
    if (c >= spec.alphabet_size())
      throw AlphabetError("word contains a symbol outside the alphabet");
  if (w.empty()) return Enclosure(1.0, 1.0);

  Support sup = support_enumerator(spec, eps * 0.5);
  SparseDistribution dist;
  for (const auto& [k, m] : sup.entries) dist.add(k, m);
  for (auto c : w) dist = apply_symbol(dist, c, spec);
  double named = dist.named_mass();
  double tail = sup.tail * spec.tail_survival_factor(w);
  Enclosure enc(named, std::min(1.0, named + tail));
  if (enc.width() > eps)
    throw BudgetError("word_probability cannot reach width " +
                      std::to_string(eps) + " for machine " + spec.name());
  return enc;
}

double step_stationarity_residual(const MachineSpec& spec, double eps) {
  if (eps <= 0.0 || eps >= 1.0) throw ParamError("eps must lie in (0,1)");
  Support sup = support_enumerator(spec, eps);
  auto by_key = [](const std::pair<StateKey, double>& a,
                   const std::pair<StateKey, double>& b) {
    return a.first < b.first;
  };
  auto merge_same_keys = [](std::vector<std::pair<StateKey, double>>& v) {
    std::size_t w = 0;
    for (std::size_t r = 0; r < v.size(); ++r) {
      if (w > 0 && v[w - 1].first == v[r].first)
        v[w - 1].second += v[r].second;
      else
        v[w++] = v[r];
    }
    v.resize(w);
  };

  std::vector<std::pair<StateKey, double>> before = sup.entries;
  std::sort(before.begin(), before.end(), by_key);
  merge_same_keys(before);

  std::vector<std::pair<StateKey, double>> after;
  after.reserve(before.size() * 2);
  for (const auto& [key, m] : before)
    for (const Edge& e : spec.expand(key)) after.emplace_back(e.to, m * e.prob);
  std::sort(after.begin(), after.end(), by_key);
  merge_same_keys(after);

  double residual = 0.0;
  std::size_t i = 0, j = 0;
  while (i < before.size() || j < after.size()) {
    if (j == after.size() ||
        (i < before.size() && before[i].first < after[j].first)) {
      residual += before[i++].second;
    } else if (i == before.size() || after[j].first < before[i].first) {
      residual += after[j++].second;
    } else {
      residual += std::abs(before[i].second - after[j].second);
      ++i;
      ++j;
    }
  }
  return residual;
}

}  // namespace cshmm
