#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "symq/core.hpp"
#include "symq/rng.hpp"

namespace symq {

// Machinery for testing certificates against a SingleType promise without
// expanding it. Survivors of a partial assignment under a type promise are
// exactly the arrangements of the remaining multiset on the free positions.

// Remaining multiset after pinning `a` inside type `t`; nullopt if infeasible.
inline std::optional<std::vector<int>> remaining_counts(const TypeVector& t,
                                                        const PartialAssignment& a) {
  std::vector<int> rem = t.counts;
  for (int e : a.entries) {
    if (e == kStar) continue;
    if (e >= static_cast<int>(rem.size()) || rem[e] == 0) return std::nullopt;
    --rem[e];
  }
  return rem;
}

inline long long completion_count(const std::vector<int>& rem) {
  TypeVector t(rem);
  return arrangement_count(t);
}

// Visits completions of `base` (free positions filled with arrangements of
// rem) until the visitor returns false. Returns false iff stopped early.
template <typename Visitor>
bool for_each_completion(const PartialAssignment& base, const std::vector<int>& rem,
                         Visitor&& visit) {
  Input x(base.entries.begin(), base.entries.end());
  std::vector<int> free_pos;
  for (int i = 0; i < base.n(); ++i) {
    if (base.entries[i] == kStar) free_pos.push_back(i);
  }
  std::vector<int> pool;
  for (int s = 0; s < static_cast<int>(rem.size()); ++s) pool.insert(pool.end(), rem[s], s);
  if (pool.size() != free_pos.size()) throw Error(Errc::dimension_mismatch, "pool/slots mismatch");
  if (free_pos.empty()) return visit(x);
  do {
    for (size_t i = 0; i < free_pos.size(); ++i) x[free_pos[i]] = pool[i];
    if (!visit(x)) return false;
  } while (std::next_permutation(pool.begin(), pool.end()));
  return true;
}

// Structured probe completions: for every free position and every remaining
// symbol, one completion placing that symbol there with the rest ascending,
// plus a descending variant and optional seeded shuffles. These are cheap
// witnesses for non-constancy; they can refute but never confirm.
template <typename Visitor>
bool for_each_probe(const PartialAssignment& base, const std::vector<int>& rem, int random_probes,
                    uint64_t seed, Visitor&& visit) {
  Input x(base.entries.begin(), base.entries.end());
  std::vector<int> free_pos;
  for (int i = 0; i < base.n(); ++i) {
    if (base.entries[i] == kStar) free_pos.push_back(i);
  }
  std::vector<int> pool;
  for (int s = 0; s < static_cast<int>(rem.size()); ++s) pool.insert(pool.end(), rem[s], s);
  if (free_pos.empty()) return visit(x);

  auto emit = [&](const std::vector<int>& arrangement) {
    for (size_t i = 0; i < free_pos.size(); ++i) x[free_pos[i]] = arrangement[i];
    return visit(x);
  };

  std::vector<int> asc = pool;
  if (!emit(asc)) return false;
  std::vector<int> desc(pool.rbegin(), pool.rend());
  if (!emit(desc)) return false;

  // one placement probe per (free slot, distinct symbol)
  for (size_t j = 0; j < free_pos.size(); ++j) {
    int prev = -2;
    for (size_t k = 0; k < pool.size(); ++k) {
      if (pool[k] == prev) continue;
      prev = pool[k];
      std::vector<int> arr;
      arr.reserve(pool.size());
      arr.push_back(pool[k]);
      for (size_t t = 0; t < pool.size(); ++t) {
        if (t != k) arr.push_back(pool[t]);
      }
      std::rotate(arr.begin(), arr.begin() + 1, arr.begin() + 1 + j);
      // arr now has pool[k] at slot j, remainder ascending
      if (!emit(arr)) return false;
    }
  }

  Rng rng(seed);
  std::vector<int> shuf = pool;
  for (int r = 0; r < random_probes; ++r) {
    rng.shuffle(shuf);
    if (!emit(shuf)) return false;
  }
  return true;
}

struct ImplicitCertOptions {
  long long proof_budget = 100'000'000;  // max completions enumerated for an exact proof
  bool allow_probabilistic = false;      // beyond the budget: accept on probe unanimity
  int random_probes = 64;
  uint64_t probe_seed = 0x5eedcafe;
};

// Certificate check against a SingleType promise without expansion.
// Exact whenever the completion count fits the proof budget; otherwise either
// throws (exact mode) or returns a probe-based verdict with exact=false.
inline CertVerdict implicit_certificate_check(const PartialFunction& f, const TypeVector& t,
                                              const PartialAssignment& c,
                                              const ImplicitCertOptions& opts = {}) {
  auto rem = remaining_counts(t, c);
  if (!rem) return {true, true, -1, true};  // no member realizes c
  long long count = completion_count(*rem);

  int first = -1;
  bool mixed = false;
  auto look = [&](const Input& x) {
    int v = f.value(x);
    if (first == -1) {
      first = v;
    } else if (v != first) {
      mixed = true;
      return false;
    }
    return true;
  };

  for_each_probe(c, *rem, opts.random_probes, opts.probe_seed, look);
  if (mixed) return {false, false, -1, true};

  if (count <= opts.proof_budget) {
    first = -1;
    for_each_completion(c, *rem, look);
    if (mixed) return {false, false, -1, true};
    return {false, true, first, true};
  }
  if (!opts.allow_probabilistic) {
    throw Error(Errc::budget_exceeded, "certificate proof exceeds completion budget");
  }
  return {false, true, first, false};
}

// Uniform interface for the search loops that need certificate verdicts
// against either a materialized or an implicit promise.
class CertificateTester {
 public:
  virtual ~CertificateTester() = default;
  virtual CertVerdict test(const PartialAssignment& c) = 0;
  virtual int n() const = 0;
  virtual int M() const = 0;
  virtual bool exact() const = 0;
};

class MaterializedTester : public CertificateTester {
 public:
  explicit MaterializedTester(const ExpandedFunction& ef) : ef_(&ef) {}

  CertVerdict test(const PartialAssignment& c) override {
    auto it = cache_.find(c.entries);
    if (it != cache_.end()) return it->second;
    CertVerdict v = is_certificate(*ef_, c);
    cache_.emplace(c.entries, v);
    return v;
  }

  int n() const override { return ef_->n; }
  int M() const override { return ef_->M; }
  bool exact() const override { return true; }

 private:
  const ExpandedFunction* ef_;
  std::map<std::vector<int>, CertVerdict> cache_;
};

class ImplicitTester : public CertificateTester {
 public:
  ImplicitTester(const PartialFunction& f, ImplicitCertOptions opts = {})
      : f_(&f), opts_(opts) {
    if (f.promise.kind != PromiseSet::Kind::single_type) {
      throw Error(Errc::invalid_parameters, "implicit tester needs a single-type promise");
    }
  }

  CertVerdict test(const PartialAssignment& c) override {
    auto it = cache_.find(c.entries);
    if (it != cache_.end()) return it->second;
    CertVerdict v = implicit_certificate_check(*f_, f_->promise.types.front(), c, opts_);
    cache_.emplace(c.entries, v);
    return v;
  }

  int n() const override { return f_->promise.n; }
  int M() const override { return f_->promise.M; }
  bool exact() const override { return !opts_.allow_probabilistic; }

 private:
  const PartialFunction* f_;
  ImplicitCertOptions opts_;
  std::map<std::vector<int>, CertVerdict> cache_;
};

}  // namespace symq
