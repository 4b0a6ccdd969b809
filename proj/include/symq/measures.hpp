#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "symq/certificates.hpp"
#include "symq/core.hpp"
#include "symq/matching.hpp"

namespace symq {

// ---------------------------------------------------------------------------
// Decision trees

struct DecisionTree {
  struct Node {
    int query = -1;  // -1: leaf
    int value = -1;
    std::map<int, size_t> next;  // observed symbol -> node index
  };
  std::vector<Node> nodes;

  bool empty() const { return nodes.empty(); }

  int evaluate(const Input& x) const {
    size_t at = 0;
    while (nodes[at].query >= 0) {
      auto it = nodes[at].next.find(x[nodes[at].query]);
      if (it == nodes[at].next.end()) {
        throw Error(Errc::invalid_parameters, "input leaves the decision tree");
      }
      at = it->second;
    }
    return nodes[at].value;
  }

  int depth(size_t at = 0) const {
    if (nodes.empty()) return 0;
    const Node& nd = nodes[at];
    if (nd.query < 0) return 0;
    int d = 0;
    for (const auto& [sym, child] : nd.next) d = std::max(d, depth(child));
    return 1 + d;
  }
};

struct SolveOptions {
  long long expansion_budget = default_expansion_budget();
  long long materialize_limit = 200'000;     // expand when the promise fits this
  long long proof_budget = 200'000'000;      // implicit constancy proof budget (completions)
  long long state_budget = 60'000'000;       // implicit solver state cap
  bool build_tree = true;                    // materialized regime only
  long long tree_node_budget = 4'000'000;
};

struct DepthResult {
  int depth = 0;
  std::optional<DecisionTree> tree;
  bool implicit = false;  // solved without expanding the promise
};

namespace detail {

struct VecHash {
  size_t operator()(const std::vector<int32_t>& v) const {
    uint64_t h = 0x9e3779b97f4a7c15ULL ^ v.size();
    for (int32_t x : v) h = mix_hash(h, static_cast<uint64_t>(x) + 1);
    return static_cast<size_t>(h);
  }
};

struct Bounds {
  int16_t lo = 0;
  int16_t hi = std::numeric_limits<int16_t>::max();
};

constexpr int kInf = std::numeric_limits<int16_t>::max();

// Minimax over materialized survivor sets. States are the surviving input
// index sets themselves (canonical: ascending), which merges any two query
// histories with equal survivors.
class MaterializedSolver {
 public:
  explicit MaterializedSolver(const ExpandedFunction& ef) : ef_(ef) {}

  int solve_root() {
    std::vector<int32_t> all(ef_.inputs.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int32_t>(i);
    return solve(all, 0, kInf);
  }

  DecisionTree build_tree(long long node_budget) {
    std::vector<int32_t> all(ef_.inputs.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int32_t>(i);
    DecisionTree t;
    build(all, t, node_budget);
    return t;
  }

  // Plain recursion without memo or pruning; the cross-check oracle.
  int solve_plain() {
    std::vector<int32_t> all(ef_.inputs.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int32_t>(i);
    return plain(all);
  }

 private:
  bool constant(const std::vector<int32_t>& surv) const {
    uint8_t v0 = ef_.values[surv.front()];
    for (int32_t i : surv) {
      if (ef_.values[i] != v0) return false;
    }
    return true;
  }

  std::vector<int> differing_indices(const std::vector<int32_t>& surv) const {
    std::vector<int> out;
    for (int i = 0; i < ef_.n; ++i) {
      int s0 = ef_.inputs[surv.front()][i];
      for (int32_t idx : surv) {
        if (ef_.inputs[idx][i] != s0) {
          out.push_back(i);
          break;
        }
      }
    }
    return out;
  }

  std::map<int, std::vector<int32_t>> split(const std::vector<int32_t>& surv, int index) const {
    std::map<int, std::vector<int32_t>> parts;
    for (int32_t idx : surv) parts[ef_.inputs[idx][index]].push_back(idx);
    return parts;
  }

  int plain(const std::vector<int32_t>& surv) {
    if (constant(surv)) return 0;
    int best = kInf;
    for (int i : differing_indices(surv)) {
      int worst = 0;
      for (auto& [sym, part] : split(surv, i)) {
        worst = std::max(worst, plain(part));
        if (worst + 1 >= best) break;
      }
      best = std::min(best, 1 + worst);
    }
    return best;
  }

  int solve(const std::vector<int32_t>& surv, int alpha, int beta) {
    if (constant(surv)) return 0;
    Bounds& b = memo_[surv];
    if (b.lo == b.hi) return b.lo;
    if (b.lo >= beta) return b.lo;
    if (b.hi <= alpha) return b.hi;
    auto idxs = differing_indices(surv);
    if (b.hi == kInf) b.hi = static_cast<int16_t>(idxs.size());
    if (b.hi <= alpha) return b.hi;
    b.lo = std::max<int16_t>(b.lo, 1);

    int best_min = kInf;
    for (int i : idxs) {
      auto parts = split(surv, i);
      // larger parts first: they bound the max sooner
      std::vector<std::pair<int, const std::vector<int32_t>*>> order;
      for (auto& [sym, part] : parts) order.emplace_back(sym, &part);
      std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b2) {
        return a.second->size() > b2.second->size();
      });
      int cutoff = std::min(beta - 1, best_min);
      int mi = 0;
      for (auto& [sym, part] : order) {
        int v = solve(*part, std::max(alpha - 1, mi), cutoff);
        mi = std::max(mi, v);
        if (mi >= cutoff) break;
      }
      best_min = std::min(best_min, mi);
      if (best_min <= alpha - 1) break;
    }
    int result = 1 + best_min;
    if (result <= alpha) {
      b.hi = std::min<int16_t>(b.hi, static_cast<int16_t>(result));
    } else if (result >= beta) {
      b.lo = std::max<int16_t>(b.lo, static_cast<int16_t>(result));
    } else {
      b.lo = b.hi = static_cast<int16_t>(result);
    }
    return result;
  }

  size_t build(const std::vector<int32_t>& surv, DecisionTree& t, long long node_budget) {
    if (static_cast<long long>(t.nodes.size()) >= node_budget) {
      throw Error(Errc::budget_exceeded, "decision tree exceeds node budget");
    }
    size_t self = t.nodes.size();
    t.nodes.emplace_back();
    if (constant(surv)) {
      t.nodes[self].value = ef_.values[surv.front()];
      return self;
    }
    int best_val = kInf;
    int best_index = -1;
    for (int i : differing_indices(surv)) {
      int worst = 0;
      for (auto& [sym, part] : split(surv, i)) {
        worst = std::max(worst, solve(part, 0, kInf));
      }
      if (1 + worst < best_val) {  // ties go to the lowest index
        best_val = 1 + worst;
        best_index = i;
      }
    }
    t.nodes[self].query = best_index;
    for (auto& [sym, part] : split(surv, best_index)) {
      size_t child = build(part, t, node_budget);
      t.nodes[self].next[sym] = child;
    }
    return self;
  }

  const ExpandedFunction& ef_;
  std::unordered_map<std::vector<int32_t>, Bounds, VecHash> memo_;
};

// Minimax over a single-type promise without expansion. Under a type
// promise, the survivor set of a revealed assignment is exactly the set of
// arrangements of the remaining multiset on the free positions, so the
// revealed assignment is a sound (if coarser) state key, and the symbols
// available at any free index are the symbols with remaining multiplicity.
class ImplicitSolver {
 public:
  ImplicitSolver(const PartialFunction& f, long long proof_budget, long long state_budget)
      : f_(f),
        type_(f.promise.types.front()),
        n_(f.promise.n),
        M_(f.promise.M),
        proof_budget_(proof_budget),
        state_budget_(state_budget) {}

  int solve_root() {
    PartialAssignment p(n_);
    std::vector<int> rem = type_.counts;
    return solve(p, rem, n_, 0, kInf);
  }

 private:
  std::string key(const PartialAssignment& p) const {
    std::string k(n_, '\0');
    for (int i = 0; i < n_; ++i) k[i] = static_cast<char>(p.entries[i] + 1);
    return k;
  }

  // -1 unknown (probes unanimous, no proof yet), 0 mixed, 1 proven constant
  int probe_state(const PartialAssignment& p, const std::vector<int>& rem) {
    int first = -1;
    bool mixed = false;
    auto look = [&](const Input& x) {
      int v = f_.value(x);
      if (first == -1) {
        first = v;
      } else if (v != first) {
        mixed = true;
        return false;
      }
      return true;
    };
    for_each_probe(p, rem, 32, 0x9e3779b9ULL, look);
    if (mixed) return 0;
    long long count = completion_count(rem);
    if (count <= 2) return 1;  // probes covered everything
    return -1;
  }

  bool prove_constant(const PartialAssignment& p, const std::vector<int>& rem) {
    if (completion_count(rem) > proof_budget_) {
      throw Error(Errc::budget_exceeded, "constancy proof exceeds completion budget");
    }
    int first = -1;
    bool mixed = false;
    for_each_completion(p, rem, [&](const Input& x) {
      int v = f_.value(x);
      if (first == -1) {
        first = v;
      } else if (v != first) {
        mixed = true;
        return false;
      }
      return true;
    });
    return !mixed;
  }

  int solve(PartialAssignment& p, std::vector<int>& rem, int free, int alpha, int beta) {
    std::string k = key(p);
    Bounds& b = memo_[k];
    if (static_cast<long long>(memo_.size()) > state_budget_) {
      throw Error(Errc::budget_exceeded, "implicit solver state budget exceeded");
    }
    if (b.hi == kInf) b.hi = static_cast<int16_t>(free);
    if (b.lo == b.hi) return b.lo;
    if (b.lo >= beta) return b.lo;
    if (b.hi <= alpha) return b.hi;

    if (b.lo == 0) {  // constancy not yet settled
      int pr = probe_state(p, rem);
      if (pr == 1 || (pr == -1 && prove_constant(p, rem))) {
        b.lo = b.hi = 0;
        return 0;
      }
      b.lo = 1;
      if (b.lo >= beta) return b.lo;
    }

    // symbol order at max nodes: probed-nonconstant children first, then by
    // remaining multiplicity; possibly-constant children are worthless for
    // the maximizer and go last
    std::vector<int> symbols;
    for (int m = 0; m < M_; ++m) {
      if (rem[m] > 0) symbols.push_back(m);
    }

    int best_min = kInf;
    for (int i = 0; i < n_; ++i) {
      if (p.entries[i] != kStar) continue;
      std::vector<std::pair<int, int>> order;  // (rank, symbol)
      for (int m : symbols) {
        p.entries[i] = m;
        --rem[m];
        auto it = memo_.find(key(p));
        int known_lo = (it != memo_.end()) ? it->second.lo : -1;
        int rank;
        if (known_lo >= 1) {
          rank = 0;  // known non-constant
        } else if (known_lo == 0 && it->second.hi == 0) {
          rank = 3;  // known constant
        } else {
          int pr = probe_state(p, rem);
          if (pr == 0) {
            memo_[key(p)].lo = std::max<int16_t>(memo_[key(p)].lo, 1);
            rank = 1;
          } else {
            rank = 2;
          }
        }
        ++rem[m];
        p.entries[i] = kStar;
        order.emplace_back(rank, m);
      }
      std::stable_sort(order.begin(), order.end(),
                       [&](const auto& a, const auto& c) {
                         if (a.first != c.first) return a.first < c.first;
                         if (rem[a.second] != rem[c.second]) return rem[a.second] > rem[c.second];
                         return a.second < c.second;
                       });

      int cutoff = std::min(beta - 1, best_min);
      int mi = 0;
      for (auto& [rank, m] : order) {
        if (mi >= cutoff) break;
        p.entries[i] = m;
        --rem[m];
        int v = solve(p, rem, free - 1, std::max(alpha - 1, mi), cutoff);
        ++rem[m];
        p.entries[i] = kStar;
        mi = std::max(mi, v);
      }
      best_min = std::min(best_min, mi);
      if (best_min <= alpha - 1) break;
    }

    int result = 1 + best_min;
    Bounds& bb = memo_[k];  // reference may have been invalidated by rehash
    if (result <= alpha) {
      bb.hi = std::min<int16_t>(bb.hi, static_cast<int16_t>(result));
    } else if (result >= beta) {
      bb.lo = std::max<int16_t>(bb.lo, static_cast<int16_t>(result));
    } else {
      bb.lo = bb.hi = static_cast<int16_t>(result);
    }
    return result;
  }

  const PartialFunction& f_;
  const TypeVector& type_;
  int n_, M_;
  long long proof_budget_, state_budget_;
  std::unordered_map<std::string, Bounds> memo_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// D(f)

inline DepthResult deterministic_complexity(const PartialFunction& f,
                                            const SolveOptions& opts = {}) {
  long long count = f.promise.member_count();
  if (count == 0) throw Error(Errc::empty_promise, "promise has no members");
  DepthResult out;
  if (count <= std::min(opts.expansion_budget, opts.materialize_limit)) {
    ExpandedFunction ef = expand_function(f, opts.expansion_budget);
    detail::MaterializedSolver solver(ef);
    out.depth = solver.solve_root();
    if (opts.build_tree) out.tree = solver.build_tree(opts.tree_node_budget);
    return out;
  }
  if (f.promise.kind != PromiseSet::Kind::single_type) {
    throw Error(Errc::budget_exceeded, "promise too large to materialize");
  }
  detail::ImplicitSolver solver(f, opts.proof_budget, opts.state_budget);
  out.depth = solver.solve_root();
  out.implicit = true;
  return out;
}

// Unmemoized, unpruned minimax; the oracle counterpart of the memoized solver.
inline int deterministic_complexity_plain(const PartialFunction& f,
                                          long long budget = default_expansion_budget()) {
  ExpandedFunction ef = expand_function(f, budget);
  detail::MaterializedSolver solver(ef);
  return solver.solve_plain();
}

// ---------------------------------------------------------------------------
// C(f)

struct CertificateReport {
  int C = 0;
  std::vector<int> per_input;           // aligned with the expansion; empty if implicit
  PartialAssignment witness;            // a minimum certificate of a worst input
  bool tables_available = true;
  std::vector<PartialAssignment> cover; // implicit mode: certificates covering the promise
};

namespace detail {

inline uint32_t diff_mask(const Input& a, const Input& b) {
  uint32_t m = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) m |= 1u << i;
  }
  return m;
}

// keep only inclusion-minimal masks
inline std::vector<uint32_t> minimal_masks(std::vector<uint32_t> masks) {
  std::sort(masks.begin(), masks.end(), [](uint32_t a, uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<uint32_t> out;
  for (uint32_t m : masks) {
    bool dominated = false;
    for (uint32_t kept : out) {
      if ((kept & m) == kept) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(m);
  }
  return out;
}

// exact minimum hitting set by branch and bound
inline void min_hitting_set(const std::vector<uint32_t>& sets, uint32_t chosen, int depth,
                            int& best, uint32_t& best_set) {
  if (depth >= best) return;
  uint32_t unhit = 0;
  bool any = false;
  for (uint32_t s : sets) {
    if ((s & chosen) == 0) {
      unhit = s;
      any = true;
      break;
    }
  }
  if (!any) {
    best = depth;
    best_set = chosen;
    return;
  }
  uint32_t bits = unhit;
  while (bits) {
    int b = __builtin_ctz(bits);
    bits &= bits - 1;
    min_hitting_set(sets, chosen | (1u << b), depth + 1, best, best_set);
  }
}

}  // namespace detail

// Materialized certificate complexity. C_x is the minimum hitting set of the
// minimal difference sets between x and the opposite-valued inputs; that is
// exactly the smallest W with x|_W a certificate.
inline CertificateReport certificate_complexity_materialized(const ExpandedFunction& ef) {
  if (ef.n > 20) throw Error(Errc::budget_exceeded, "certificate search limited to n <= 20");
  CertificateReport rep;
  rep.per_input.resize(ef.size(), 0);
  for (size_t xi = 0; xi < ef.size(); ++xi) {
    std::vector<uint32_t> masks;
    for (size_t yi = 0; yi < ef.size(); ++yi) {
      if (ef.values[yi] != ef.values[xi]) {
        masks.push_back(detail::diff_mask(ef.inputs[xi], ef.inputs[yi]));
      }
    }
    int cx = 0;
    uint32_t wset = 0;
    if (!masks.empty()) {
      auto mins = detail::minimal_masks(std::move(masks));
      cx = ef.n + 1;
      detail::min_hitting_set(mins, 0, 0, cx, wset);
    }
    rep.per_input[xi] = cx;
    if (cx > rep.C) {
      rep.C = cx;
      std::vector<int> positions;
      for (int i = 0; i < ef.n; ++i) {
        if (wset & (1u << i)) positions.push_back(i);
      }
      rep.witness = restrict_to(ef.inputs[xi], positions);
    }
  }
  if (rep.witness.entries.empty()) rep.witness = PartialAssignment(ef.n);
  return rep;
}

namespace detail {

// Number of promise members consistent with at least one certificate,
// by inclusion-exclusion over compatible subsets.
inline long long covered_count(const TypeVector& t, const std::vector<PartialAssignment>& certs,
                               long long node_budget) {
  long long total = 0;
  long long nodes = 0;
  PartialAssignment base(t.total());
  auto rec = [&](auto&& self, size_t from, PartialAssignment& merged, int sign) -> void {
    for (size_t i = from; i < certs.size(); ++i) {
      bool ok = true;
      std::vector<std::pair<int, int>> added;
      for (int pos = 0; pos < merged.n(); ++pos) {
        int cv = certs[i].entries[pos];
        if (cv == kStar) continue;
        if (merged.entries[pos] == kStar) {
          added.emplace_back(pos, cv);
        } else if (merged.entries[pos] != cv) {
          ok = false;
          break;
        }
      }
      if (ok) {
        for (auto [pos, sym] : added) merged.entries[pos] = sym;
        auto rem = remaining_counts(t, merged);
        if (rem) {
          if (++nodes > node_budget) {
            throw Error(Errc::budget_exceeded, "inclusion-exclusion exceeds node budget");
          }
          total += sign * completion_count(*rem);
          self(self, i + 1, merged, -sign);
        }
        for (auto [pos, sym] : added) merged.entries[pos] = kStar;
      }
    }
  };
  rec(rec, 0, base, +1);
  return total;
}

}  // namespace detail

// Certificate complexity of a single-type promise without expansion:
// the smallest s such that the exact-verified certificates of size <= s
// cover the whole type class.
inline CertificateReport certificate_complexity_implicit(const PartialFunction& f,
                                                         const SolveOptions& opts = {}) {
  if (f.promise.kind != PromiseSet::Kind::single_type) {
    throw Error(Errc::invalid_parameters, "implicit certificate search needs a single type");
  }
  const TypeVector& t = f.promise.types.front();
  const int n = f.promise.n;
  const int M = f.promise.M;
  const long long members = arrangement_count(t);
  ImplicitCertOptions copts;
  copts.proof_budget = opts.proof_budget;
  copts.allow_probabilistic = false;

  CertificateReport rep;
  rep.tables_available = false;
  std::vector<PartialAssignment> certs;

  for (int s = 0; s <= n; ++s) {
    // all position subsets of size s, symbols lexicographic, type-feasible
    std::vector<int> positions(s);
    auto subsets = [&](auto&& self, int from, int depth) -> bool {
      if (depth == s) {
        PartialAssignment c(n);
        auto fill = [&](auto&& self2, int d) -> bool {
          if (d == s) {
            // skip candidates that extend an already found certificate
            for (const auto& have : certs) {
              bool super = true;
              for (int pos = 0; pos < n; ++pos) {
                if (have.entries[pos] != kStar && c.entries[pos] != have.entries[pos]) {
                  super = false;
                  break;
                }
              }
              if (super) return true;
            }
            CertVerdict v = implicit_certificate_check(f, t, c, copts);
            if (!v.vacuous && v.is_cert) certs.push_back(c);
            return true;
          }
          for (int m = 0; m < M; ++m) {
            c.entries[positions[d]] = m;
            if (remaining_counts(t, c)) {  // feasible prefix
              if (!self2(self2, d + 1)) return false;
            }
          }
          c.entries[positions[d]] = kStar;
          return true;
        };
        return fill(fill, 0);
      }
      for (int p = from; p < n; ++p) {
        positions[depth] = p;
        if (!self(self, p + 1, depth + 1)) return false;
      }
      return true;
    };
    subsets(subsets, 0, 0);

    if (!certs.empty()) {
      long long covered = detail::covered_count(t, certs, 2'000'000);
      if (covered == members) {
        rep.C = s;
        rep.cover = certs;
        rep.witness = certs.front();
        return rep;
      }
    }
  }
  throw Error(Errc::invalid_parameters, "certificate cover search failed");  // unreachable
}

inline CertificateReport certificate_complexity(const PartialFunction& f,
                                                const SolveOptions& opts = {}) {
  long long count = f.promise.member_count();
  if (count <= std::min(opts.expansion_budget, opts.materialize_limit)) {
    ExpandedFunction ef = expand_function(f, opts.expansion_budget);
    return certificate_complexity_materialized(ef);
  }
  return certificate_complexity_implicit(f, opts);
}

// ---------------------------------------------------------------------------
// bs(f) and s(f)

struct SensitiveBlockSet {
  Input base;
  std::vector<std::vector<int>> blocks;  // pairwise disjoint index sets
  std::vector<Input> witnesses;          // one per block, differs exactly there
};

struct BlockSensitivityReport {
  int bs = 0;
  std::vector<int> per_input;
  SensitiveBlockSet witness;
};

namespace detail {

// exact maximum disjoint packing over an antichain of masks
inline void max_packing(const std::vector<uint32_t>& masks, size_t from, uint32_t used, int count,
                        int& best, std::vector<uint32_t>& chosen, std::vector<uint32_t>& best_set) {
  if (count > best) {
    best = count;
    best_set = chosen;
  }
  if (count + static_cast<int>(masks.size() - from) <= best) return;
  for (size_t i = from; i < masks.size(); ++i) {
    if ((masks[i] & used) == 0) {
      chosen.push_back(masks[i]);
      max_packing(masks, i + 1, used | masks[i], count + 1, best, chosen, best_set);
      chosen.pop_back();
    }
  }
}

}  // namespace detail

inline BlockSensitivityReport block_sensitivity(const ExpandedFunction& ef) {
  if (ef.n > 20) throw Error(Errc::budget_exceeded, "block search limited to n <= 20");
  BlockSensitivityReport rep;
  rep.per_input.resize(ef.size(), 0);
  for (size_t xi = 0; xi < ef.size(); ++xi) {
    std::vector<uint32_t> masks;
    std::unordered_map<uint32_t, size_t> witness_of;
    for (size_t yi = 0; yi < ef.size(); ++yi) {
      if (ef.values[yi] != ef.values[xi]) {
        uint32_t m = detail::diff_mask(ef.inputs[xi], ef.inputs[yi]);
        masks.push_back(m);
        witness_of.emplace(m, yi);
      }
    }
    if (masks.empty()) continue;
    auto mins = detail::minimal_masks(std::move(masks));
    int best = 0;
    std::vector<uint32_t> chosen, best_set;
    detail::max_packing(mins, 0, 0, 0, best, chosen, best_set);
    rep.per_input[xi] = best;
    if (best > rep.bs) {
      rep.bs = best;
      rep.witness.base = ef.inputs[xi];
      rep.witness.blocks.clear();
      rep.witness.witnesses.clear();
      for (uint32_t m : best_set) {
        std::vector<int> block;
        for (int i = 0; i < ef.n; ++i) {
          if (m & (1u << i)) block.push_back(i);
        }
        rep.witness.blocks.push_back(block);
        rep.witness.witnesses.push_back(ef.inputs[witness_of.at(m)]);
      }
    }
  }
  return rep;
}

struct SensitivityReport {
  int s = 0;
  std::vector<int> per_input;
};

inline SensitivityReport sensitivity(const ExpandedFunction& ef) {
  SensitivityReport rep;
  rep.per_input.resize(ef.size(), 0);
  for (size_t xi = 0; xi < ef.size(); ++xi) {
    std::vector<std::pair<int, int>> edges;
    std::unordered_set<uint32_t> seen;
    for (size_t yi = 0; yi < ef.size(); ++yi) {
      if (ef.values[yi] != ef.values[xi]) {
        uint32_t m = detail::diff_mask(ef.inputs[xi], ef.inputs[yi]);
        if (__builtin_popcount(m) == 2 && seen.insert(m).second) {
          int a = __builtin_ctz(m);
          int b = 31 - __builtin_clz(m);
          edges.emplace_back(a, b);
        }
      }
    }
    rep.per_input[xi] = max_matching(ef.n, edges);
    rep.s = std::max(rep.s, rep.per_input[xi]);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Assembled report

struct MeasureReport {
  int D = 0, C = 0, bs = 0, s = 0;
  std::vector<int> C_per_input, bs_per_input, s_per_input;
  bool tables_available = true;
  bool single_type = false;
  bool constant = false;
  // certified intervals
  long long R_lo = 0, R_hi = 0;
  long long R0_lo = 0, R0_hi = 0;
  long long Q_lo = 0, Q_hi = 0;
  // strongtype quantities (single-type promises)
  double k = 0.0, beta = 0.0;
  bool anomaly_s_zero = false;  // s=0 with non-constant f on a single type
  bool product_bound_checked = false;
  std::string violation;  // empty when the chain holds
};

inline MeasureReport inequality_chain(const PartialFunction& f, const SolveOptions& opts = {}) {
  ExpandedFunction ef = expand_function(f, opts.expansion_budget);
  MeasureReport r;
  r.single_type = f.promise.kind == PromiseSet::Kind::single_type;

  SolveOptions dopts = opts;
  dopts.build_tree = false;
  r.D = deterministic_complexity(f, dopts).depth;
  auto crep = certificate_complexity_materialized(ef);
  r.C = crep.C;
  r.C_per_input = crep.per_input;
  auto brep = block_sensitivity(ef);
  r.bs = brep.bs;
  r.bs_per_input = brep.per_input;
  auto srep = sensitivity(ef);
  r.s = srep.s;
  r.s_per_input = srep.per_input;
  r.constant = (r.C == 0);

  auto fail = [&](const std::string& what) {
    r.violation = what;
    throw Error(Errc::inequality_violation, what);
  };
  if (r.s > r.bs) fail("s > bs");
  if (r.bs > r.C) fail("bs > C");
  if (r.C > r.D) fail("C > D");
  if (r.single_type) {
    if (r.s > 0) {
      r.product_bound_checked = true;
      if (static_cast<long long>(r.C) > 3LL * r.bs * r.s) fail("C > 3*bs*s on a type promise");
    } else if (!r.constant) {
      r.anomaly_s_zero = true;
    }
    r.k = 0.25 * std::sqrt(static_cast<double>(r.D));
    r.beta = std::max(std::sqrt(static_cast<double>(r.C)),
                      r.C > 0 ? r.k / r.C : 0.0);
  }
  r.R_lo = r.bs;
  r.R_hi = r.D;
  r.R0_lo = r.bs;
  r.R0_hi = r.D;
  r.Q_lo = static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(r.bs))));
  r.Q_hi = r.D;
  return r;
}

}  // namespace symq
