#include "cshmm/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cshmm/series.hpp"

namespace cshmm {

namespace {

constexpr double kInvE = 0.36787944117144233;
constexpr double kMaxEntTerm = 0.5307378454489735;  // -x lg x at x = 1/e

// Intersection of two enclosures of one quantity; falls back to the hull if
// rounding makes them disjoint.
Enclosure meet(const Enclosure& a, const Enclosure& b) {
  double lo = std::max(a.lo, b.lo);
  double hi = std::min(a.hi, b.hi);
  if (lo <= hi) return Enclosure(lo, hi);
  return hull(a, b);
}

// Bounds of -x lg x over [lo, hi] intersected with [0,1].
double xlgx_neg_max(double lo, double hi) {
  hi = std::min(hi, 1.0);
  if (lo <= kInvE && hi >= kInvE) return kMaxEntTerm;
  return std::max(xlgx_neg(lo), xlgx_neg(hi));
}
double xlgx_neg_min(double lo, double hi) {
  hi = std::min(hi, 1.0);
  return std::min(xlgx_neg(lo), xlgx_neg(hi));
}

struct NextSymbolStats {
  std::vector<double> mass;  // named next-symbol masses, indexed by code
  double named = 0.0;        // total named forward mass of the word
  double h_states = 0.0;     // sum over named states of mass * H[X|S=s]
  double max_state_mass = 0.0;
  std::size_t support = 0;
  bool argmax_synchronized = true;
};

NextSymbolStats next_symbol_stats(const MachineSpec& spec,
                                  const SparseDistribution& dist) {
  NextSymbolStats st;
  st.mass.assign(spec.alphabet_size(), 0.0);
  for (const auto& [key, m] : dist.mass) {
    st.named += m;
    st.h_states += m * spec.state_entropy(key);
    if (m > st.max_state_mass) {
      st.max_state_mass = m;
      st.argmax_synchronized = spec.synchronized_key(key);
    }
    for (const Edge& e : spec.expand(key)) st.mass[e.symbol] += m * e.prob;
  }
  st.support = dist.mass.size();
  return st;
}

// Enclosure of H[X_{t}|w] from named next-symbol masses `n` summing to
// `named`, with up to `tail` extra mass distributed adversarially.
Enclosure conditional_entropy(const std::vector<double>& n, double named,
                              double tail, double lg_alpha) {
  double p_hi_total = named + tail;
  double lo = 0.0, hi = 0.0;
  for (double nx : n) {
    double p_lo = nx / p_hi_total;
    double p_hi = named > 0.0 ? std::min(1.0, (nx + tail) / named) : 1.0;
    if (p_hi <= 0.0) continue;
    lo += p_lo * (-std::log2(p_hi));
    hi += xlgx_neg_max(p_lo, p_hi);
  }
  lo = std::max(0.0, lo - 1e-14);
  hi = std::min(hi + 1e-14, lg_alpha);
  return Enclosure(lo, std::max(lo, hi));
}

EntropyGap gap_from_dist(const MachineSpec& spec, const SparseDistribution& dist,
                         double tail, std::optional<std::uint8_t> last_symbol) {
  NextSymbolStats st = next_symbol_stats(spec, dist);
  double p_hi = st.named + tail;
  if (p_hi <= 0.0)
    throw ZeroProbabilityError("entropy gap of a zero-probability word");
  EntropyGap g;
  g.h_word = conditional_entropy(st.mass, st.named, tail, spec.lg_alphabet());
  double tail_bound = last_symbol ? spec.post_symbol_entropy_bound(*last_symbol)
                                  : spec.tail_state_entropy_bound();
  double lo = st.h_states / p_hi;
  double hi = st.named > 0.0
                  ? (st.h_states + tail * tail_bound) / st.named
                  : tail_bound;
  g.h_word_tilde = Enclosure(std::max(0.0, lo - 1e-14),
                             std::min(hi + 1e-14, spec.lg_alphabet()));
  return g;
}

}  // namespace

void forward_levels(const MachineSpec& spec, std::int64_t t_max,
                    double mass_tol, const EnumerationOptions& opts,
                    const std::function<bool(const LevelInfo&)>& visit) {
  if (t_max < 0) throw ParamError("forward expansion needs t >= 0");
  if (!(mass_tol > 0.0 && mass_tol < 1.0))
    throw ParamError("mass_tol must lie in (0,1)");

  Support sup = support_enumerator(spec, mass_tol * 0.5, opts.support_budget);
  if (sup.tail > mass_tol)
    throw BudgetError(spec.name() + ": start support cannot reach mass 1 - " +
                      std::to_string(mass_tol) + " within budget (tail " +
                      std::to_string(sup.tail) + ")");

  std::vector<WordState> level(1);
  for (const auto& [k, m] : sup.entries) level[0].dist.add(k, m);

  double prune_budget = std::max(0.0, (mass_tol - sup.tail) * 0.9);
  double prune_floor = prune_budget / static_cast<double>(opts.word_cap);
  double pruned = 0.0;

  for (std::int64_t t = 0;; ++t) {
    if (!visit({t, level, sup.tail, pruned})) return;
    if (t == t_max) return;

    std::vector<WordState> next;
    next.reserve(level.size() * 2);
    for (const WordState& ws : level) {
      std::vector<SparseDistribution> children(spec.alphabet_size());
      for (const auto& [key, m] : ws.dist.mass)
        for (const Edge& e : spec.expand(key))
          children[e.symbol].add(e.to, m * e.prob);
      for (std::size_t x = 0; x < children.size(); ++x) {
        if (children[x].mass.empty()) continue;
        double m = children[x].named_mass();
        if (m <= 0.0) continue;
        if (m < prune_floor && pruned + m <= prune_budget) {
          pruned += m;
          continue;
        }
        Word w = ws.word;
        w.push_back(static_cast<std::uint8_t>(x));
        next.push_back({std::move(w), std::move(children[x])});
      }
    }
    if (next.size() > opts.word_cap)
      throw BudgetError(spec.name() + ": word count " +
                        std::to_string(next.size()) + " exceeds cap at t=" +
                        std::to_string(t + 1));
    level = std::move(next);
  }
}

WordTable word_table(const MachineSpec& spec, std::int64_t t, double mass_tol,
                     const EnumerationOptions& opts) {
  WordTable table;
  table.length = t;
  forward_levels(spec, t, mass_tol, opts, [&](const LevelInfo& info) {
    if (info.t != t) return true;
    KahanSum total;
    for (const WordState& ws : info.states) {
      double m = ws.dist.named_mass();
      if (m > 0.0) {
        table.entries.emplace(ws.word, m);
        total.add(m);
      }
    }
    table.tail = std::min(1.0, info.start_tail + info.pruned_mass);
    if (total.value() + table.tail < 1.0 - 1e-10)
      table.tail = std::max(table.tail, 1.0 - total.value());
    return false;
  });
  return table;
}

Enclosure block_entropy(const WordTable& table, double lg_alphabet) {
  KahanSum lo_sum, hi_sum;
  std::size_t n = 0;
  for (const auto& [w, p] : table.entries) {
    lo_sum.add(xlgx_neg_min(p, p + table.tail));
    hi_sum.add(xlgx_neg_max(p, p + table.tail));
    ++n;
  }
  double slack =
      (static_cast<double>(n) + 4.0) * 4.0 *
      std::numeric_limits<double>::epsilon() * (hi_sum.value() + 1.0);
  double lo = std::max(0.0, lo_sum.value() - slack);
  double hi = hi_sum.value() + slack +
              table.tail * static_cast<double>(table.length) * lg_alphabet +
              binary_entropy(std::min(0.5, table.tail));
  return Enclosure(lo, std::max(lo, hi));
}

MixedState mixed_state(const MachineSpec& spec, const Word& w, double eps) {
  if (eps <= 0.0 || eps >= 1.0) throw ParamError("eps must lie in (0,1)");
  // eps is the zero-detection precision; the start truncation floor keeps
  // rare-word supports tractable while the survival factor keeps the
  // propagated tail far below any word this can certify positive
  Support sup = support_enumerator(spec, std::max(eps * 0.5, 1e-7));
  SparseDistribution dist;
  for (const auto& [k, m] : sup.entries) dist.add(k, m);
  for (auto c : w) dist = apply_symbol(dist, c, spec);
  double named = dist.named_mass();
  double tail = sup.tail * spec.tail_survival_factor(w);
  Enclosure prob(named, std::min(1.0, named + tail));
  if (prob.hi <= eps)
    throw ZeroProbabilityError("P(" + word_str(spec.alphabet(), w) +
                               ") <= " + std::to_string(eps));
  MixedState ms;
  ms.word = w;
  ms.word_probability = prob;
  double denom = named + tail;
  for (const auto& [k, m] : dist.mass) ms.phi.add(k, m / denom);
  ms.phi.tail = tail / denom;
  return ms;
}

EntropyGap entropy_gap_from(const MachineSpec& spec,
                            const SparseDistribution& dist, double tail,
                            std::optional<std::uint8_t> last_symbol) {
  return gap_from_dist(spec, dist, tail, last_symbol);
}

EntropyGap entropy_gap(const MachineSpec& spec, const Word& w, double eps) {
  Support sup = support_enumerator(spec, std::max(eps * 0.5, 1e-7));
  SparseDistribution dist;
  for (const auto& [k, m] : sup.entries) dist.add(k, m);
  for (auto c : w) dist = apply_symbol(dist, c, spec);
  double tail = sup.tail * spec.tail_survival_factor(w);
  Enclosure prob(dist.named_mass(), dist.named_mass() + tail);
  if (prob.hi <= eps)
    throw ZeroProbabilityError("P(" + word_str(spec.alphabet(), w) +
                               ") <= " + std::to_string(eps));
  std::optional<std::uint8_t> last;
  if (!w.empty()) last = w.back();
  return gap_from_dist(spec, dist, tail, last);
}

namespace {

struct GapAccumulator {
  KahanSum lower;
  KahanSum upper_named;

  // Terms are evaluated on the captured (named) measure alone: by grouping
  // monotonicity of mass * (mixture entropy - mean state entropy), adding the
  // unseen mass can only raise a term, so the named evaluation is a certified
  // lower bound and the unseen mass is charged lg|X| once, globally.
  void add(const MachineSpec& spec, const WordState& ws) {
    std::optional<std::uint8_t> last;
    if (!ws.word.empty()) last = ws.word.back();
    EntropyGap g = gap_from_dist(spec, ws.dist, 0.0, last);
    double named = ws.dist.named_mass();
    double lo = named * std::max(0.0, g.h_word.lo - g.h_word_tilde.hi);
    double hi = named * std::max(0.0, g.h_word.hi - g.h_word_tilde.lo);
    lower.add(lo);
    upper_named.add(hi);
  }

  Enclosure result(double table_tail, double lg_alpha, std::size_t n) const {
    double slack = (static_cast<double>(n) + 4.0) * 8.0 *
                   std::numeric_limits<double>::epsilon() *
                   (upper_named.value() + 1.0);
    double lo = std::max(0.0, lower.value() - slack);
    double hi = upper_named.value() + slack + table_tail * lg_alpha;
    return Enclosure(lo, std::max(lo, hi));
  }
};

}  // namespace

Enclosure entropy_gap_sum(const MachineSpec& spec, std::int64_t t,
                          double mass_tol, const EnumerationOptions& opts) {
  Enclosure out;
  forward_levels(spec, t, mass_tol, opts, [&](const LevelInfo& info) {
    if (info.t != t) return true;
    GapAccumulator acc;
    for (const WordState& ws : info.states) acc.add(spec, ws);
    out = acc.result(info.start_tail + info.pruned_mass, spec.lg_alphabet(),
                     info.states.size());
    return false;
  });
  return out;
}

Enclosure unifilar_entropy_rate(const MachineSpec& spec, double tol) {
  if (tol <= 0.0) throw ParamError("tol must be positive");
  double tail_bound = spec.tail_state_entropy_bound();
  double eps = tail_bound > 0.0 ? tol / (2.0 * tail_bound) : 0.5;
  Support sup = support_enumerator(spec, eps);

  std::vector<StateKey> sample;
  for (std::size_t i = 0; i < sup.entries.size() && i < 128; ++i)
    sample.push_back(sup.entries[i].first);
  auto report = validate_machine(spec, sample);
  if (!report.all_unifilar)
    throw UnifilarityError(spec.name() + " has a non-unifilar state");

  KahanSum sum;
  for (const auto& [k, m] : sup.entries) sum.add(m * spec.state_entropy(k));
  double slack = (static_cast<double>(sup.entries.size()) + 4.0) * 4.0 *
                 std::numeric_limits<double>::epsilon() * (sum.value() + 1.0);
  double lo = std::max(0.0, sum.value() - slack);
  double hi = sum.value() + slack + sup.tail * tail_bound;
  return Enclosure(lo, std::max(lo, hi));
}

Enclosure generic_rate_lower_bound(const MachineSpec& spec, double tol) {
  if (tol <= 0.0) throw ParamError("tol must be positive");
  double tail_bound = spec.tail_state_entropy_bound();
  double eps = tail_bound > 0.0 ? tol / (2.0 * tail_bound) : 0.5;
  Support sup = support_enumerator(spec, eps);
  KahanSum sum;
  for (const auto& [k, m] : sup.entries) sum.add(m * spec.state_entropy(k));
  double slack = (static_cast<double>(sup.entries.size()) + 4.0) * 4.0 *
                 std::numeric_limits<double>::epsilon() * (sum.value() + 1.0);
  double lo = std::max(0.0, sum.value() - slack);
  double hi = sum.value() + slack + sup.tail * tail_bound;
  return Enclosure(lo, std::max(lo, hi));
}

namespace {

struct NsLevel {
  double certain = 0.0;   // multi-state or aggregate-key words
  double possible = 0.0;  // single named state but live tail
};

NsLevel ns_level(const MachineSpec& spec, const LevelInfo& info) {
  KahanSum certain_ns, possible_ns;
  for (const WordState& ws : info.states) {
    double max_state_mass = 0.0;
    bool argmax_synchronized = true;
    double named = 0.0;
    for (const auto& [key, m] : ws.dist.mass) {
      named += m;
      if (m > max_state_mass) {
        max_state_mass = m;
        argmax_synchronized = spec.synchronized_key(key);
      }
    }
    if (named <= 0.0) continue;
    double word_tail = info.start_tail * spec.tail_survival_factor(ws.word);
    double residual_known = (named - max_state_mass) / named;
    double residual_hi =
        (named - max_state_mass + word_tail) / (named + word_tail);
    if (!argmax_synchronized || residual_known > 1e-9)
      certain_ns.add(named);
    else if (residual_hi > 1e-9)
      possible_ns.add(named + word_tail);
  }
  return {certain_ns.value(), possible_ns.value()};
}

}  // namespace

Enclosure sync_probability(const MachineSpec& spec, std::int64_t t,
                           double mass_tol, const EnumerationOptions& opts) {
  if (!spec.unifilar_hint())
    throw UnifilarityError("sync_probability requires a unifilar machine");
  Enclosure out;
  forward_levels(spec, t, mass_tol, opts, [&](const LevelInfo& info) {
    if (info.t != t) return true;
    NsLevel ns = ns_level(spec, info);
    double lo = std::max(0.0, ns.certain * (1.0 - 1e-13));
    double hi = std::min(1.0, ns.certain + ns.possible + info.start_tail +
                                  info.pruned_mass + 1e-13);
    out = Enclosure(lo, std::max(lo, hi));
    return false;
  });
  return out;
}

std::vector<Enclosure> sync_probability_levels(const MachineSpec& spec,
                                               std::int64_t t_max,
                                               double mass_tol,
                                               const EnumerationOptions& opts) {
  if (!spec.unifilar_hint())
    throw UnifilarityError("sync_probability requires a unifilar machine");
  std::vector<NsLevel> levels(static_cast<std::size_t>(t_max) + 1);
  double start_tail = 0.0, pruned_final = 0.0;
  forward_levels(spec, t_max, mass_tol, opts, [&](const LevelInfo& info) {
    levels[static_cast<std::size_t>(info.t)] = ns_level(spec, info);
    start_tail = info.start_tail;
    pruned_final = std::max(pruned_final, info.pruned_mass);
    return true;
  });
  std::vector<Enclosure> out;
  out.reserve(levels.size());
  for (const NsLevel& ns : levels) {
    double lo = std::max(0.0, ns.certain * (1.0 - 1e-13));
    double hi = std::min(
        1.0, ns.certain + ns.possible + start_tail + pruned_final + 1e-13);
    out.emplace_back(lo, std::max(lo, hi));
  }
  return out;
}

EntropyCurve hmu_curve(const MachineSpec& spec, std::int64_t t_max,
                       double mass_tol, const EnumerationOptions& opts) {
  if (t_max < 1) throw ParamError("hmu_curve needs t_max >= 1");
  EntropyCurve curve;
  bool gap_route = spec.unifilar_hint() && spec.exact_hint();
  if (gap_route) {
    try {
      curve.entropy_rate = unifilar_entropy_rate(spec, 1e-9);
    } catch (const BudgetError&) {
      curve.entropy_rate = std::nullopt;
    }
  }

  std::vector<Enclosure> blocks(static_cast<std::size_t>(t_max) + 1);
  std::vector<Enclosure> gaps(static_cast<std::size_t>(t_max) + 1,
                              Enclosure(0.0));
  blocks[0] = Enclosure(0.0);

  forward_levels(spec, t_max, mass_tol, opts, [&](const LevelInfo& info) {
    WordTable table;
    table.length = info.t;
    KahanSum total;
    for (const WordState& ws : info.states) {
      double m = ws.dist.named_mass();
      if (m > 0.0) {
        table.entries.emplace(ws.word, m);
        total.add(m);
      }
    }
    table.tail = std::max(info.start_tail + info.pruned_mass,
                          1.0 - total.value());
    if (info.t > 0) blocks[static_cast<std::size_t>(info.t)] =
        block_entropy(table, spec.lg_alphabet());
    GapAccumulator acc;
    for (const WordState& ws : info.states) acc.add(spec, ws);
    gaps[static_cast<std::size_t>(info.t)] =
        acc.result(info.start_tail + info.pruned_mass, spec.lg_alphabet(),
                   info.states.size());
    return true;
  });

  Enclosure partial_diff(0.0), partial_gap(0.0);
  for (std::int64_t t = 1; t <= t_max; ++t) {
    CurveRow row;
    row.t = t;
    row.block = blocks[static_cast<std::size_t>(t)];
    Enclosure diff = row.block - blocks[static_cast<std::size_t>(t - 1)];
    diff = meet(diff, Enclosure(0.0, spec.lg_alphabet()));
    row.hmu_t = diff;
    const Enclosure& gap = gaps[static_cast<std::size_t>(t - 1)];
    if (curve.entropy_rate)
      row.hmu_t = meet(row.hmu_t, *curve.entropy_rate + gap);
    row.gap_sum_lower = gaps[static_cast<std::size_t>(t)].lo;

    if (curve.entropy_rate) {
      partial_diff += row.hmu_t - *curve.entropy_rate;
      partial_gap += gap;
      Enclosure direct = row.block - Enclosure(static_cast<double>(t)) *
                                         *curve.entropy_rate;
      row.excess_partial = meet(partial_diff, meet(direct, partial_gap));
    } else {
      // No certified rate: report H[X^t] - t * hmu_t(t), a valid partial-sum
      // proxy that uses the current approximation as the rate stand-in.
      row.excess_partial =
          row.block - Enclosure(static_cast<double>(t)) * row.hmu_t;
    }
    curve.rows.push_back(row);
  }
  return curve;
}

}  // namespace cshmm
