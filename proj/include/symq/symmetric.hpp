#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "symq/core.hpp"
#include "symq/measures.hpp"
#include "symq/rng.hpp"

namespace symq {

// ---------------------------------------------------------------------------
// Type distance and the distinguishing gap

inline int type_distance(const TypeVector& a, const TypeVector& b) {
  if (a.alphabet_size() != b.alphabet_size() || a.total() != b.total()) {
    throw Error(Errc::dimension_mismatch, "type distance needs matching (n, M)");
  }
  int d = 0;
  for (int i = 0; i < a.alphabet_size(); ++i) d = std::max(d, std::abs(a.counts[i] - b.counts[i]));
  return d;
}

struct TypeDistanceReport {
  bool one_sided = false;  // f constant across the promise; d undefined
  int d = 0;
  double g = 0.0;  // n / d; 0 when one-sided
  TypeVector witness_low, witness_high;  // a closest differently-valued pair
};

// Minimum distance between differently-valued types of a symmetric promise.
inline TypeDistanceReport distinguishing_distance(const PartialFunction& f,
                                                  long long budget = default_expansion_budget()) {
  if (!f.promise.symmetric) {
    throw Error(Errc::invalid_parameters, "promise is not symmetric");
  }
  std::vector<TypeVector> types = f.promise.occurring_types();
  std::vector<int> value_of;
  for (const auto& t : types) {
    auto members = expand_type(t, budget);
    if (f.promise.kind == PromiseSet::Kind::explicit_set) {
      members.erase(std::remove_if(members.begin(), members.end(),
                                   [&](const Input& x) { return !f.promise.contains(x); }),
                    members.end());
    }
    int v = f.value(members.front());
    for (const auto& x : members) {
      if (f.value(x) != v) {
        throw Error(Errc::not_typewise_constant, "f varies within a type");
      }
    }
    value_of.push_back(v);
  }
  TypeDistanceReport rep;
  rep.d = -1;
  for (size_t i = 0; i < types.size(); ++i) {
    for (size_t j = i + 1; j < types.size(); ++j) {
      if (value_of[i] == value_of[j]) continue;
      int d = type_distance(types[i], types[j]);
      if (rep.d < 0 || d < rep.d) {
        rep.d = d;
        rep.witness_low = value_of[i] == 0 ? types[i] : types[j];
        rep.witness_high = value_of[i] == 0 ? types[j] : types[i];
      }
    }
  }
  if (rep.d < 0) {
    rep.one_sided = true;
    rep.d = 0;
    rep.g = 0.0;
    return rep;
  }
  rep.g = static_cast<double>(f.promise.n) / rep.d;
  return rep;
}

// ---------------------------------------------------------------------------
// Sampling estimator

struct SampleEstimate {
  std::vector<long long> observed;  // per-symbol sample tallies
  long long sample_count = 0;
  TypeVector estimate;
  int d = 0;
  double delta = 0.0;
};

inline long long chernoff_sample_count(int n, int M, int d) {
  double eps = static_cast<double>(d) / n;
  double delta = 1.0 / (3.0 * M);
  return static_cast<long long>(std::ceil(3.0 / (eps * eps) * std::log(2.0 / delta)));
}

// Query-sampling estimate of the hidden input's type: k uniform position
// samples with replacement, tallies scaled to n, rounded by largest
// remainder so the estimate is itself a type.
inline SampleEstimate estimate_type(const std::function<int(int)>& query, int n, int M, int d,
                                    Rng& rng) {
  if (d < 1) throw Error(Errc::invalid_parameters, "precision must be at least 1");
  SampleEstimate est;
  est.d = d;
  est.delta = 1.0 / (3.0 * M);
  est.sample_count = chernoff_sample_count(n, M, d);
  est.observed.assign(M, 0);
  for (long long i = 0; i < est.sample_count; ++i) {
    int pos = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
    int sym = query(pos);
    if (sym < 0 || sym >= M) throw Error(Errc::invalid_parameters, "query returned bad symbol");
    ++est.observed[sym];
  }
  // largest-remainder rounding of observed/k * n
  std::vector<long long> floors(M, 0);
  std::vector<std::pair<long long, int>> remainders;  // (-remainder numerator, symbol)
  long long assigned = 0;
  for (int s = 0; s < M; ++s) {
    long long num = est.observed[s] * n;
    floors[s] = num / est.sample_count;
    assigned += floors[s];
    remainders.push_back({-(num % est.sample_count), s});
  }
  std::sort(remainders.begin(), remainders.end());
  std::vector<int> counts(M, 0);
  for (int s = 0; s < M; ++s) counts[s] = static_cast<int>(floors[s]);
  for (long long leftover = n - assigned; leftover > 0; --leftover) {
    counts[remainders[n - assigned - leftover].second] += 1;
  }
  est.estimate = TypeVector(counts);
  return est;
}

// ---------------------------------------------------------------------------
// Hybrid sequence between two types

// S_0 = from, S_k = to, k <= M; each step changes at most two multiplicities,
// moves one coordinate to its target, and never increases the distance.
inline std::vector<TypeVector> hybrid_sequence(const TypeVector& from, const TypeVector& to) {
  if (from.alphabet_size() != to.alphabet_size() || from.total() != to.total()) {
    throw Error(Errc::dimension_mismatch, "hybrid needs matching (n, M)");
  }
  std::vector<TypeVector> seq = {from};
  TypeVector cur = from;
  while (cur != to) {
    int surplus = -1, deficit = -1;
    for (int i = 0; i < cur.alphabet_size(); ++i) {
      if (surplus < 0 && cur.counts[i] > to.counts[i]) surplus = i;
      if (deficit < 0 && cur.counts[i] < to.counts[i]) deficit = i;
    }
    int moved = cur.counts[surplus] - to.counts[surplus];
    cur.counts[surplus] = to.counts[surplus];
    cur.counts[deficit] += moved;
    seq.push_back(cur);
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Simplified types

struct SimplifiedType {
  std::vector<int> v;  // multiplicities capped at 2*alpha
  int alpha = 0;

  bool operator==(const SimplifiedType& o) const { return v == o.v; }
  bool operator<(const SimplifiedType& o) const { return v < o.v; }
};

inline SimplifiedType simplify_type(const TypeVector& t, int alpha) {
  if (alpha < 1) throw Error(Errc::invalid_parameters, "alpha must be at least 1");
  SimplifiedType s;
  s.alpha = alpha;
  s.v.reserve(t.counts.size());
  for (int c : t.counts) s.v.push_back(std::min(c, 2 * alpha));
  return s;
}

inline bool dominates(const SimplifiedType& a, const SimplifiedType& b) {
  for (size_t i = 0; i < a.v.size(); ++i) {
    if (a.v[i] < b.v[i]) return false;
  }
  return true;
}

// Maximal simplified types over the candidate types of a promise, with the
// lexicographically smallest representative per maximal element. The
// optional ball restricts candidates to d(type, center) < radius.
inline std::vector<std::pair<SimplifiedType, TypeVector>> maximal_simplified_types(
    const std::vector<TypeVector>& candidates, int alpha,
    const std::optional<std::pair<TypeVector, int>>& within = std::nullopt) {
  std::map<SimplifiedType, TypeVector> reps;
  for (const auto& t : candidates) {
    if (within && type_distance(t, within->first) >= within->second) continue;
    SimplifiedType v = simplify_type(t, alpha);
    auto it = reps.find(v);
    if (it == reps.end()) {
      reps.emplace(v, t);
    } else if (t < it->second) {
      it->second = t;
    }
  }
  std::vector<std::pair<SimplifiedType, TypeVector>> out;
  for (const auto& [v, rep] : reps) {
    bool maximal = true;
    for (const auto& [w, rep2] : reps) {
      if (!(w == v) && dominates(w, v)) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.emplace_back(v, rep);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Examination of a candidate type

struct Examination {
  enum class Outcome { certificate_found, type_contradicted, inconclusive };
  Outcome outcome = Outcome::inconclusive;
  int value = -1;
  PartialAssignment transcript;  // tree queries with their answers
  int queries = 0;
};

// Runs the exact optimal decision tree for f restricted to the candidates of
// type `t` consistent with `prior`, answering from x. The tree is the
// canonical witness of a <= alpha query algorithm for that type.
inline Examination examine(const PartialFunction& f, const TypeVector& t, const Input& x,
                           int alpha, const PartialAssignment& prior,
                           long long budget = default_expansion_budget()) {
  Examination ex;
  ex.transcript = PartialAssignment(f.promise.n);
  auto members = expand_type(t, budget);
  std::vector<Input> surv;
  for (auto& y : members) {
    if (is_consistent(prior, y)) surv.push_back(std::move(y));
  }
  if (surv.empty()) {
    ex.outcome = Examination::Outcome::type_contradicted;
    return ex;
  }
  ExpandedFunction ef;
  ef.promise = &f.promise;
  ef.n = f.promise.n;
  ef.M = f.promise.M;
  ef.inputs = std::move(surv);
  for (const auto& y : ef.inputs) ef.values.push_back(static_cast<uint8_t>(f.value(y)));
  detail::MaterializedSolver solver(ef);
  DecisionTree tree = solver.build_tree(4'000'000);

  size_t at = 0;
  while (tree.nodes[at].query >= 0) {
    if (ex.queries >= alpha) {
      ex.outcome = Examination::Outcome::inconclusive;
      return ex;
    }
    int pos = tree.nodes[at].query;
    int ans = x[pos];
    ++ex.queries;
    ex.transcript.set(pos, ans);
    auto it = tree.nodes[at].next.find(ans);
    if (it == tree.nodes[at].next.end()) {
      ex.outcome = Examination::Outcome::type_contradicted;
      return ex;
    }
    at = it->second;
  }
  ex.outcome = Examination::Outcome::certificate_found;
  ex.value = tree.nodes[at].value;
  return ex;
}

// ---------------------------------------------------------------------------
// Alphabet reduction by pinning a frequent symbol

struct AlphabetReduction {
  bool found = false;
  int symbol = -1;
  std::vector<int> positions;  // 2*alpha distinct positions holding the symbol
  long long queries = 0;
};

inline AlphabetReduction reduce_alphabet(const TypeVector& estimate, int alpha,
                                         const std::function<int(int)>& query, int n, Rng& rng) {
  AlphabetReduction red;
  int best = 0;
  for (int s = 0; s < estimate.alphabet_size(); ++s) {
    if (estimate.counts[s] > estimate.counts[best]) best = s;
  }
  red.symbol = best;
  const long long cap = 10LL * estimate.alphabet_size() * alpha;
  std::vector<bool> seen(n, false);
  while (red.queries < cap && static_cast<int>(red.positions.size()) < 2 * alpha) {
    int pos = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
    ++red.queries;
    if (seen[pos]) continue;
    seen[pos] = true;
    if (query(pos) == red.symbol) red.positions.push_back(pos);
  }
  red.found = static_cast<int>(red.positions.size()) >= 2 * alpha;
  return red;
}

// ---------------------------------------------------------------------------
// Classical simulation over a symmetric promise

struct RepExamination {
  TypeVector type;
  SimplifiedType simplified;
  Examination exam;
  bool survived = false;
};

struct SimulationRun {
  enum class Outcome { value, conflict_detected, estimate_miss, inconclusive };
  Outcome outcome = Outcome::inconclusive;
  int value = -1;
  SampleEstimate estimate;
  bool reduced = false;
  AlphabetReduction reduction;
  std::vector<RepExamination> reps;
  std::pair<int, int> conflict_pair = {-1, -1};
  long long total_queries = 0;
};

struct SimulationOptions {
  bool use_reduction = false;
  long long budget = default_expansion_budget();
};

inline SimulationRun classical_simulation(const PartialFunction& f, const Input& x, int alpha,
                                          int d, uint64_t seed,
                                          const SimulationOptions& opts = {}) {
  if (!f.promise.symmetric) {
    throw Error(Errc::invalid_parameters, "simulation needs a symmetric promise");
  }
  if (!f.promise.contains(x)) {
    throw Error(Errc::invalid_parameters, "input outside the promise");
  }
  const int n = f.promise.n;
  const int M = f.promise.M;
  Rng rng(seed);
  auto query = [&](int pos) { return x[pos]; };

  SimulationRun run;
  run.estimate = estimate_type(query, n, M, d, rng);
  run.total_queries += run.estimate.sample_count;

  TypeVector truth = type_of(x, M);
  if (type_distance(run.estimate.estimate, truth) >= d) {
    run.outcome = SimulationRun::Outcome::estimate_miss;
    return run;
  }

  PartialAssignment prior(n);
  if (opts.use_reduction) {
    run.reduction = reduce_alphabet(run.estimate.estimate, alpha, query, n, rng);
    run.total_queries += run.reduction.queries;
    if (run.reduction.found) {
      run.reduced = true;
      for (int pos : run.reduction.positions) prior.set(pos, run.reduction.symbol);
    }
  }

  std::vector<TypeVector> candidates;
  for (const auto& t : f.promise.occurring_types()) {
    if (type_distance(t, run.estimate.estimate) >= d) continue;
    if (run.reduced && t.counts[run.reduction.symbol] < 2 * alpha) continue;
    candidates.push_back(t);
  }
  auto maximal = maximal_simplified_types(candidates, alpha);

  for (const auto& [v, rep] : maximal) {
    RepExamination re;
    re.type = rep;
    re.simplified = v;
    re.exam = examine(f, rep, x, alpha, prior, opts.budget);
    run.total_queries += re.exam.queries;
    run.reps.push_back(std::move(re));
  }

  // pairwise-union filter: a surviving representative's type must hold the
  // multiplicities demanded by its own transcript joined with every other
  for (auto& re : run.reps) {
    if (re.exam.outcome != Examination::Outcome::certificate_found) continue;
    bool ok = true;
    for (const auto& other : run.reps) {
      PartialAssignment joint = merge(merge(prior, re.exam.transcript), other.exam.transcript);
      auto counts = symbol_counts(joint, M);
      for (int s = 0; s < M; ++s) {
        if (counts[s] > re.type.counts[s]) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    re.survived = ok;
  }

  int agreed = -1;
  for (size_t i = 0; i < run.reps.size(); ++i) {
    if (!run.reps[i].survived) continue;
    int v = run.reps[i].exam.value;
    if (agreed == -1) {
      agreed = v;
      run.conflict_pair.first = static_cast<int>(i);
    } else if (v != agreed) {
      run.conflict_pair.second = static_cast<int>(i);
      run.outcome = SimulationRun::Outcome::conflict_detected;
      return run;
    }
  }
  if (agreed == -1) {
    run.outcome = SimulationRun::Outcome::inconclusive;
    return run;
  }
  run.conflict_pair = {-1, -1};
  run.outcome = SimulationRun::Outcome::value;
  run.value = agreed;
  return run;
}

}  // namespace symq
