#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "symq/errors.hpp"

namespace symq {

// An input is a string over the alphabet {0, ..., M-1}.
using Input = std::vector<int>;

constexpr int kStar = -1;  // unrevealed entry of a partial assignment

inline long long default_expansion_budget() {
  if (const char* env = std::getenv("SYMQ_BUDGET")) {
    long long v = std::atoll(env);
    if (v > 0) return v;
  }
  return 10'000'000;
}

// ---------------------------------------------------------------------------
// Types (multiplicity vectors)

struct TypeVector {
  std::vector<int> counts;  // indexed by symbol, length M

  TypeVector() = default;
  explicit TypeVector(std::vector<int> c) : counts(std::move(c)) {}

  int alphabet_size() const { return static_cast<int>(counts.size()); }
  int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

  bool operator==(const TypeVector& o) const { return counts == o.counts; }
  bool operator!=(const TypeVector& o) const { return counts != o.counts; }
  bool operator<(const TypeVector& o) const { return counts < o.counts; }
};

inline TypeVector type_of(const Input& x, int M) {
  TypeVector t(std::vector<int>(M, 0));
  for (int s : x) {
    if (s < 0 || s >= M) throw Error(Errc::invalid_parameters, "symbol out of range");
    ++t.counts[s];
  }
  return t;
}

// n! / prod counts!  (number of strings of this type); exact in int64 for n <= 20
inline long long arrangement_count(const TypeVector& t) {
  long long total = t.total();
  if (total > 20) throw Error(Errc::budget_exceeded, "arrangement count beyond 20!");
  long long num = 1;
  for (long long i = 2; i <= total; ++i) num *= i;
  for (int c : t.counts) {
    for (long long i = 2; i <= c; ++i) num /= i;
  }
  return num;
}

// All strings of type t in lexicographic order.
inline std::vector<Input> expand_type(const TypeVector& t, long long budget) {
  if (arrangement_count(t) > budget) {
    throw Error(Errc::budget_exceeded, "type expansion exceeds budget");
  }
  Input sorted;
  for (int s = 0; s < t.alphabet_size(); ++s) {
    sorted.insert(sorted.end(), t.counts[s], s);
  }
  std::vector<Input> out;
  if (sorted.empty()) {
    out.push_back({});
    return out;
  }
  do {
    out.push_back(sorted);
  } while (std::next_permutation(sorted.begin(), sorted.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Promise sets

struct PromiseSet {
  enum class Kind { single_type, symmetric_union, explicit_set };

  Kind kind = Kind::single_type;
  int n = 0;
  int M = 0;
  std::vector<TypeVector> types;  // single_type: exactly one; union: sorted, unique
  std::vector<Input> inputs;      // explicit_set: sorted, unique
  bool symmetric = false;         // explicit_set: verified transposition closure

  static PromiseSet single(TypeVector t) {
    PromiseSet p;
    p.kind = Kind::single_type;
    p.n = t.total();
    p.M = t.alphabet_size();
    p.types = {std::move(t)};
    p.symmetric = true;
    return p;
  }

  static PromiseSet union_of(std::vector<TypeVector> ts) {
    if (ts.empty()) throw Error(Errc::empty_promise, "union of no types");
    PromiseSet p;
    p.kind = Kind::symmetric_union;
    p.n = ts.front().total();
    p.M = ts.front().alphabet_size();
    for (const auto& t : ts) {
      if (t.total() != p.n || t.alphabet_size() != p.M) {
        throw Error(Errc::dimension_mismatch, "union types disagree on (n, M)");
      }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    p.types = std::move(ts);
    p.symmetric = true;
    return p;
  }

  static PromiseSet explicit_set_of(std::vector<Input> xs, int M);

  long long member_count() const {
    if (kind == Kind::explicit_set) return static_cast<long long>(inputs.size());
    long long sum = 0;
    for (const auto& t : types) sum += arrangement_count(t);
    return sum;
  }

  bool contains(const Input& x) const {
    if (static_cast<int>(x.size()) != n) return false;
    if (kind == Kind::explicit_set) {
      return std::binary_search(inputs.begin(), inputs.end(), x);
    }
    TypeVector t = type_of(x, M);
    return std::binary_search(types.begin(), types.end(), t);
  }

  // Types occurring in the promise (for explicit sets, derived from members).
  std::vector<TypeVector> occurring_types() const {
    if (kind != Kind::explicit_set) return types;
    std::set<TypeVector> seen;
    for (const auto& x : inputs) seen.insert(type_of(x, M));
    return {seen.begin(), seen.end()};
  }
};

inline std::vector<Input> expand_promise(const PromiseSet& p,
                                         long long budget = default_expansion_budget()) {
  if (p.member_count() > budget) {
    throw Error(Errc::budget_exceeded, "promise expansion exceeds budget");
  }
  if (p.kind == PromiseSet::Kind::explicit_set) return p.inputs;
  std::vector<Input> out;
  for (const auto& t : p.types) {
    auto block = expand_type(t, budget);
    out.insert(out.end(), block.begin(), block.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Closure under all index transpositions (which generates full S_n closure).
inline bool verify_symmetric(const std::vector<Input>& sorted_inputs, int n) {
  for (const auto& x : sorted_inputs) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (x[i] == x[j]) continue;
        Input y = x;
        std::swap(y[i], y[j]);
        if (!std::binary_search(sorted_inputs.begin(), sorted_inputs.end(), y)) return false;
      }
    }
  }
  return true;
}

inline PromiseSet PromiseSet::explicit_set_of(std::vector<Input> xs, int M) {
  if (xs.empty()) throw Error(Errc::empty_promise, "explicit promise with no members");
  PromiseSet p;
  p.kind = Kind::explicit_set;
  p.n = static_cast<int>(xs.front().size());
  p.M = M;
  for (const auto& x : xs) {
    if (static_cast<int>(x.size()) != p.n) {
      throw Error(Errc::dimension_mismatch, "explicit members disagree on n");
    }
    for (int s : x) {
      if (s < 0 || s >= M) throw Error(Errc::invalid_parameters, "symbol out of range");
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  p.inputs = std::move(xs);
  p.symmetric = verify_symmetric(p.inputs, p.n);
  return p;
}

// ---------------------------------------------------------------------------
// Partial assignments

struct PartialAssignment {
  std::vector<int> entries;  // kStar or a symbol

  PartialAssignment() = default;
  explicit PartialAssignment(int n) : entries(n, kStar) {}
  explicit PartialAssignment(std::vector<int> e) : entries(std::move(e)) {}

  int n() const { return static_cast<int>(entries.size()); }

  int size() const {
    int c = 0;
    for (int e : entries) c += (e != kStar);
    return c;
  }

  bool empty() const {
    for (int e : entries) {
      if (e != kStar) return false;
    }
    return true;
  }

  void set(int pos, int sym) { entries[pos] = sym; }

  bool operator==(const PartialAssignment& o) const { return entries == o.entries; }
  bool operator<(const PartialAssignment& o) const { return entries < o.entries; }
};

inline PartialAssignment restrict_to(const Input& x, const std::vector<int>& positions) {
  PartialAssignment a(static_cast<int>(x.size()));
  for (int p : positions) a.entries[p] = x[p];
  return a;
}

inline bool is_consistent(const PartialAssignment& c, const Input& x) {
  if (c.n() != static_cast<int>(x.size())) {
    throw Error(Errc::dimension_mismatch, "assignment / input length mismatch");
  }
  for (int i = 0; i < c.n(); ++i) {
    if (c.entries[i] != kStar && c.entries[i] != x[i]) return false;
  }
  return true;
}

// Two assignments agree wherever both reveal an entry.
inline bool compatible(const PartialAssignment& a, const PartialAssignment& b) {
  if (a.n() != b.n()) throw Error(Errc::dimension_mismatch, "assignment length mismatch");
  for (int i = 0; i < a.n(); ++i) {
    if (a.entries[i] != kStar && b.entries[i] != kStar && a.entries[i] != b.entries[i]) {
      return false;
    }
  }
  return true;
}

inline PartialAssignment merge(const PartialAssignment& a, const PartialAssignment& b) {
  PartialAssignment out = a;
  for (int i = 0; i < a.n(); ++i) {
    if (b.entries[i] != kStar) out.entries[i] = b.entries[i];
  }
  return out;
}

// d with d_i = c_i where p is unrevealed, d_i = * otherwise.
inline PartialAssignment assignment_difference(const PartialAssignment& c,
                                               const PartialAssignment& p) {
  if (c.n() != p.n()) throw Error(Errc::dimension_mismatch, "assignment length mismatch");
  PartialAssignment d(c.n());
  for (int i = 0; i < c.n(); ++i) {
    if (p.entries[i] == kStar) d.entries[i] = c.entries[i];
  }
  return d;
}

// Distinct symbols revealed by an assignment, ascending.
inline std::vector<int> alphabet_of(const PartialAssignment& a) {
  std::vector<int> out;
  for (int e : a.entries) {
    if (e != kStar) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<int> symbol_counts(const PartialAssignment& a, int M) {
  std::vector<int> c(M, 0);
  for (int e : a.entries) {
    if (e != kStar) ++c[e];
  }
  return c;
}

// ---------------------------------------------------------------------------
// Partial functions

struct PartialFunction {
  PromiseSet promise;
  std::function<int(const Input&)> value;  // total on the promise, in {0, 1}

  int operator()(const Input& x) const { return value(x); }
};

// Materialized view: promise members in lexicographic order with their values.
struct ExpandedFunction {
  const PromiseSet* promise = nullptr;
  std::vector<Input> inputs;
  std::vector<uint8_t> values;
  int n = 0;
  int M = 0;

  size_t size() const { return inputs.size(); }
};

inline ExpandedFunction expand_function(const PartialFunction& f,
                                        long long budget = default_expansion_budget()) {
  ExpandedFunction ef;
  ef.promise = &f.promise;
  ef.n = f.promise.n;
  ef.M = f.promise.M;
  ef.inputs = expand_promise(f.promise, budget);
  if (ef.inputs.empty()) throw Error(Errc::empty_promise, "promise has no members");
  ef.values.reserve(ef.inputs.size());
  for (const auto& x : ef.inputs) {
    int v = f.value(x);
    if (v != 0 && v != 1) throw Error(Errc::invalid_parameters, "non-boolean function value");
    ef.values.push_back(static_cast<uint8_t>(v));
  }
  return ef;
}

// ---------------------------------------------------------------------------
// Certificates

struct CertVerdict {
  bool vacuous = false;  // no promise member consistent with c
  bool is_cert = false;
  int value = -1;   // forced value when is_cert and not vacuous
  bool exact = true;  // false when decided by probing only (see certificates.hpp)
};

// Exhaustive certificate check against a materialized promise.
inline CertVerdict is_certificate(const ExpandedFunction& ef, const PartialAssignment& c) {
  if (c.n() != ef.n) throw Error(Errc::dimension_mismatch, "assignment / promise mismatch");
  std::vector<std::pair<int, int>> pins;
  for (int i = 0; i < c.n(); ++i) {
    if (c.entries[i] != kStar) pins.emplace_back(i, c.entries[i]);
  }
  bool seen[2] = {false, false};
  for (size_t idx = 0; idx < ef.inputs.size(); ++idx) {
    const Input& x = ef.inputs[idx];
    bool ok = true;
    for (auto [pos, sym] : pins) {
      if (x[pos] != sym) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    seen[ef.values[idx]] = true;
    if (seen[0] && seen[1]) return {false, false, -1, true};
  }
  if (!seen[0] && !seen[1]) return {true, true, -1, true};
  return {false, true, seen[0] ? 0 : 1, true};
}

inline CertVerdict is_certificate(const ExpandedFunction& ef, const PartialAssignment& c,
                                  int wanted_value) {
  CertVerdict v = is_certificate(ef, c);
  if (v.is_cert && !v.vacuous && v.value != wanted_value) v.is_cert = false;
  return v;
}

}  // namespace symq
