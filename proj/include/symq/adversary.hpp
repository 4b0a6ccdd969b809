#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symq/certificates.hpp"
#include "symq/core.hpp"
#include "symq/lemma.hpp"
#include "symq/measures.hpp"

namespace symq {

// ---------------------------------------------------------------------------
// Relation-based quantum lower bound evaluation

struct AdversaryInstance {
  int n = 0;
  int M = 0;
  std::vector<Input> zeros;  // f = 0 side
  std::vector<Input> ones;   // f = 1 side
  std::vector<std::pair<int, int>> relation;  // (index into zeros, index into ones)
};

struct AdversaryBound {
  long long m = 0;        // min degree on the zero side
  long long m_prime = 0;  // min degree on the one side
  long long l_max = 0;
  double bound = 0.0;     // sqrt(m * m' / l_max)
  // exact rational square: bound^2 = m * m_prime / l_max
  long long bound_sq_num = 0;
  long long bound_sq_den = 1;
};

inline AdversaryBound evaluate_adversary(const AdversaryInstance& inst) {
  if (inst.relation.empty()) throw Error(Errc::empty_relation, "relation has no pairs");
  std::vector<std::vector<int>> nbr0(inst.zeros.size()), nbr1(inst.ones.size());
  for (auto [a, b] : inst.relation) {
    if (a < 0 || b < 0 || a >= static_cast<int>(inst.zeros.size()) ||
        b >= static_cast<int>(inst.ones.size())) {
      throw Error(Errc::invalid_parameters, "relation references missing inputs");
    }
    nbr0[a].push_back(b);
    nbr1[b].push_back(a);
  }
  AdversaryBound out;
  out.m = out.m_prime = std::numeric_limits<long long>::max();
  for (size_t a = 0; a < inst.zeros.size(); ++a) {
    if (nbr0[a].empty()) throw Error(Errc::isolated_vertex, "zero-side input with degree 0");
    out.m = std::min<long long>(out.m, nbr0[a].size());
  }
  for (size_t b = 0; b < inst.ones.size(); ++b) {
    if (nbr1[b].empty()) throw Error(Errc::isolated_vertex, "one-side input with degree 0");
    out.m_prime = std::min<long long>(out.m_prime, nbr1[b].size());
  }
  // l_{a,i} and l_{b,i} by direct counting
  auto count_diff = [&](const Input& x, const std::vector<int>& nbrs,
                        const std::vector<Input>& side, int i) {
    long long c = 0;
    for (int j : nbrs) c += (side[j][i] != x[i]);
    return c;
  };
  for (auto [a, b] : inst.relation) {
    const Input& xa = inst.zeros[a];
    const Input& xb = inst.ones[b];
    for (int i = 0; i < inst.n; ++i) {
      if (xa[i] == xb[i]) continue;
      long long la = count_diff(xa, nbr0[a], inst.ones, i);
      long long lb = count_diff(xb, nbr1[b], inst.zeros, i);
      out.l_max = std::max(out.l_max, la * lb);
    }
  }
  if (out.l_max == 0) throw Error(Errc::invalid_parameters, "related inputs never differ");
  out.bound_sq_num = out.m * out.m_prime;
  out.bound_sq_den = out.l_max;
  out.bound = std::sqrt(static_cast<double>(out.bound_sq_num) /
                        static_cast<double>(out.bound_sq_den));
  return out;
}

// Relation between a base input and witnesses of its sensitive blocks; the
// search-style instance behind the bs lower bound.
inline AdversaryInstance grover_relation(const PartialFunction& f, const Input& x,
                                         const SensitiveBlockSet& blocks) {
  AdversaryInstance inst;
  inst.n = f.promise.n;
  inst.M = f.promise.M;
  if (blocks.blocks.size() != blocks.witnesses.size() || blocks.blocks.empty()) {
    throw Error(Errc::invalid_blocks, "blocks and witnesses misaligned");
  }
  int fx = f.value(x);
  std::vector<bool> used(inst.n, false);
  for (size_t bi = 0; bi < blocks.blocks.size(); ++bi) {
    const auto& block = blocks.blocks[bi];
    const Input& y = blocks.witnesses[bi];
    if (!f.promise.contains(y) || f.value(y) == fx) {
      throw Error(Errc::invalid_blocks, "witness not opposite-valued in the promise");
    }
    for (int i = 0; i < inst.n; ++i) {
      bool in_block = std::find(block.begin(), block.end(), i) != block.end();
      if ((x[i] != y[i]) != in_block) {
        throw Error(Errc::invalid_blocks, "witness does not differ exactly on its block");
      }
    }
    for (int i : block) {
      if (used[i]) throw Error(Errc::invalid_blocks, "blocks overlap");
      used[i] = true;
    }
  }
  std::vector<Input> self = {x};
  if (fx == 0) {
    inst.zeros = self;
    inst.ones = blocks.witnesses;
  } else {
    inst.ones = self;
    inst.zeros = blocks.witnesses;
  }
  for (size_t i = 0; i < blocks.witnesses.size(); ++i) {
    if (fx == 0) {
      inst.relation.emplace_back(0, static_cast<int>(i));
    } else {
      inst.relation.emplace_back(static_cast<int>(i), 0);
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Hard-instance construction (the certificate-alternation build)

struct HardSegment {
  int side = 0;   // value of the selected certificate
  int round = 0;  // 1-based
  // entries added at fresh positions: (position, original symbol, stored
  // symbol); stored differs from original exactly for displaced entries
  struct Entry {
    int pos;
    int original;
    int stored;
    bool displaced;
  };
  std::vector<Entry> entries;
  PartialAssignment certificate;  // the selected certificate itself
};

struct HardInstanceConstruction {
  int k = 0;
  int alpha_raw = 0;  // completed rounds before the cap
  int alpha = 0;      // after the cap
  long long cap = 0;
  int max_cert_size = 0;  // largest selected certificate
  bool tester_exact = true;
  PartialAssignment revealed;               // p
  std::vector<int> scarce;                  // S
  PartialAssignment selection_record;       // r as used during selection
  std::vector<HardSegment> segments;        // kept segments, round order
  std::vector<int> displaced_counts;        // the displaced-symbol multiset
  std::vector<int> special_counts;          // all unrevealed copies of displaced symbols
  std::vector<int> filler_counts;           // uniform bin filler
  std::vector<std::vector<int>> bins;       // per kept segment: bin positions
  std::vector<Input> inputs0, inputs1;
  AdversaryInstance instance;
};

struct HardInstanceOptions {
  int max_cert_size = -1;  // default: k
};

inline HardInstanceConstruction build_hard_instance(const PartialFunction& f,
                                                    const PartialAssignment& revealed,
                                                    std::vector<int> scarce, int k,
                                                    CertificateTester& tester,
                                                    const HardInstanceOptions& opts = {}) {
  if (f.promise.kind != PromiseSet::Kind::single_type) {
    throw Error(Errc::invalid_parameters, "hard instance needs a single-type promise");
  }
  const TypeVector& t = f.promise.types.front();
  const int n = f.promise.n;
  const int M = f.promise.M;
  if (k < 1) throw Error(Errc::invalid_parameters, "k must be at least 1");
  std::sort(scarce.begin(), scarce.end());

  HardInstanceConstruction out;
  out.k = k;
  out.revealed = revealed;
  out.scarce = scarce;
  out.tester_exact = tester.exact();
  out.cap = (static_cast<long long>(n) - 10LL * k * k) / (4LL * k);
  if (out.cap < 1) {
    throw Error(Errc::cap_nonpositive, "n too small for the padding arithmetic");
  }
  const int max_cert = opts.max_cert_size > 0 ? opts.max_cert_size : k;

  // --- selection loop
  PartialAssignment r(n);
  std::vector<int> rem = t.counts;  // supply net of revealed and stored entries
  for (int e : revealed.entries) {
    if (e != kStar) --rem[e];
  }
  auto select_side = [&](int side, int round) -> HardSegment {
    auto pick = first_certificate(t, tester, max_cert, revealed, {}, side, &r);
    if (!pick) {
      throw Error(Errc::selection_failed,
                  "no " + std::to_string(side) + "-certificate at round " +
                      std::to_string(round) + " with |r| <= k (counterexample artifact)");
    }
    HardSegment seg;
    seg.side = side;
    seg.round = round;
    seg.certificate = pick->first;
    out.max_cert_size = std::max(out.max_cert_size, pick->first.size());
    for (int pos = 0; pos < n; ++pos) {
      int sym = pick->first.entries[pos];
      if (sym == kStar) continue;
      if (revealed.entries[pos] != kStar || r.entries[pos] != kStar) continue;  // known entry
      if (std::binary_search(scarce.begin(), scarce.end(), sym)) {
        int repl = -1;
        for (int cand = 0; cand < M; ++cand) {
          if (rem[cand] > 0 && !std::binary_search(scarce.begin(), scarce.end(), cand)) {
            repl = cand;
            break;
          }
        }
        if (repl < 0) throw Error(Errc::cap_nonpositive, "no replacement symbol available");
        r.set(pos, repl);
        --rem[repl];
        seg.entries.push_back({pos, sym, repl, true});
      } else {
        if (rem[sym] <= 0) throw Error(Errc::cap_nonpositive, "certificate exhausts supply");
        r.set(pos, sym);
        --rem[sym];
        seg.entries.push_back({pos, sym, sym, false});
      }
    }
    return seg;
  };

  std::vector<HardSegment> all_segments;
  int round = 0;
  while (r.size() <= k) {
    ++round;
    HardSegment s0 = select_side(0, round);
    all_segments.push_back(s0);
    if (r.size() > k) {
      all_segments.pop_back();  // dangling half-round
      break;
    }
    HardSegment s1 = select_side(1, round);
    all_segments.push_back(s1);
    ++out.alpha_raw;
  }
  out.selection_record = r;
  out.alpha = static_cast<int>(std::min<long long>(out.alpha_raw, out.cap));
  if (out.alpha < 1) throw Error(Errc::cap_nonpositive, "no completed rounds");
  all_segments.resize(2 * out.alpha);  // discard rounds beyond the cap, from the end
  out.segments = all_segments;

  // --- displaced multiset and the special content
  out.displaced_counts.assign(M, 0);
  for (const auto& seg : out.segments) {
    for (const auto& e : seg.entries) {
      if (e.displaced) ++out.displaced_counts[e.original];
    }
  }
  int displaced_total = 0;
  for (int c : out.displaced_counts) displaced_total += c;
  if (displaced_total == 0) {
    throw Error(Errc::invalid_parameters,
                "no scarce symbol was displaced; the construction degenerates");
  }
  auto occ_p = symbol_counts(revealed, M);
  out.special_counts.assign(M, 0);
  int special_total = 0;
  for (int sym = 0; sym < M; ++sym) {
    if (out.displaced_counts[sym] > 0) {
      out.special_counts[sym] = t.counts[sym] - occ_p[sym];
      special_total += out.special_counts[sym];
    }
  }

  // --- fixed background: revealed entries plus non-displaced segment entries
  std::vector<int> bg_used = occ_p;
  std::vector<bool> taken(n, false);
  for (int pos = 0; pos < n; ++pos) taken[pos] = revealed.entries[pos] != kStar;
  Input background(n, kStar);
  for (int pos = 0; pos < n; ++pos) {
    if (revealed.entries[pos] != kStar) background[pos] = revealed.entries[pos];
  }
  for (const auto& seg : out.segments) {
    for (const auto& e : seg.entries) {
      taken[e.pos] = true;
      if (!e.displaced) {
        background[e.pos] = e.original;
        ++bg_used[e.original];
      }
    }
  }

  // --- bins: displaced positions of each segment padded with the
  // lowest-indexed free positions up to the special-content size
  std::vector<int> pool;
  for (int pos = 0; pos < n; ++pos) {
    if (!taken[pos]) pool.push_back(pos);
  }
  size_t pool_at = 0;
  for (const auto& seg : out.segments) {
    std::vector<int> bin;
    int disp_here = 0;
    for (const auto& e : seg.entries) {
      if (e.displaced) {
        bin.push_back(e.pos);
        ++disp_here;
      }
    }
    for (int need = special_total - disp_here; need > 0; --need) {
      if (pool_at >= pool.size()) {
        throw Error(Errc::cap_nonpositive, "padding infeasible: free positions exhausted");
      }
      bin.push_back(pool[pool_at++]);
    }
    std::sort(bin.begin(), bin.end());
    out.bins.push_back(std::move(bin));
  }

  // --- uniform filler for non-special bins, greedily from the most available
  // symbols outside the scarce set and the special support
  const int copies_needed = 2 * out.alpha - 1;
  std::vector<int> avail(M, 0);
  for (int sym = 0; sym < M; ++sym) avail[sym] = t.counts[sym] - bg_used[sym];
  out.filler_counts.assign(M, 0);
  for (int slot = 0; slot < special_total; ++slot) {
    int pick = -1;
    long long best_slack = -1;
    for (int sym = 0; sym < M; ++sym) {
      if (out.special_counts[sym] > 0) continue;
      if (std::binary_search(scarce.begin(), scarce.end(), sym)) continue;
      long long slack = static_cast<long long>(avail[sym]) -
                        static_cast<long long>(copies_needed) * (out.filler_counts[sym] + 1);
      if (slack >= 0 && slack > best_slack) {
        best_slack = slack;
        pick = sym;
      }
    }
    if (pick < 0) throw Error(Errc::cap_nonpositive, "padding infeasible: filler exhausted");
    ++out.filler_counts[pick];
  }

  // --- leftover content placed at the remaining free positions, ascending
  std::vector<int> leftover(M, 0);
  for (int sym = 0; sym < M; ++sym) {
    leftover[sym] = t.counts[sym] - bg_used[sym] - out.special_counts[sym] -
                    copies_needed * out.filler_counts[sym];
    if (leftover[sym] < 0) {
      throw Error(Errc::cap_nonpositive, "padding infeasible: supply underflow");
    }
  }
  std::vector<int> rest_positions(pool.begin() + pool_at, pool.end());
  {
    long long rest_total = 0;
    for (int c : leftover) rest_total += c;
    if (rest_total != static_cast<long long>(rest_positions.size())) {
      throw Error(Errc::cap_nonpositive, "padding accounting mismatch");
    }
  }

  // template: every bin filled with the filler multiset, ascending
  Input tmpl = background;
  {
    size_t at = 0;
    for (int sym = 0; sym < M; ++sym) {
      for (int c = 0; c < leftover[sym]; ++c) tmpl[rest_positions[at++]] = sym;
    }
  }
  std::vector<int> filler_sorted;
  for (int sym = 0; sym < M; ++sym) {
    filler_sorted.insert(filler_sorted.end(), out.filler_counts[sym], sym);
  }
  for (const auto& bin : out.bins) {
    for (size_t i = 0; i < bin.size(); ++i) tmpl[bin[i]] = filler_sorted[i];
  }

  // one input per segment: its bin carries the special content, with the
  // displaced positions taking back their original symbols
  for (size_t si = 0; si < out.segments.size(); ++si) {
    const auto& seg = out.segments[si];
    Input y = tmpl;
    std::vector<int> pad_syms = out.special_counts;
    std::vector<int> pad_positions;
    for (int pos : out.bins[si]) {
      bool displaced_pos = false;
      for (const auto& e : seg.entries) {
        if (e.displaced && e.pos == pos) {
          y[pos] = e.original;
          --pad_syms[e.original];
          displaced_pos = true;
          break;
        }
      }
      if (!displaced_pos) pad_positions.push_back(pos);
    }
    size_t at = 0;
    for (int sym = 0; sym < M; ++sym) {
      for (int c = 0; c < pad_syms[sym]; ++c) y[pad_positions[at++]] = sym;
    }
    if (seg.side == 0) {
      out.inputs0.push_back(std::move(y));
    } else {
      out.inputs1.push_back(std::move(y));
    }
  }

  out.instance.n = n;
  out.instance.M = M;
  out.instance.zeros = out.inputs0;
  out.instance.ones = out.inputs1;
  for (size_t a = 0; a < out.inputs0.size(); ++a) {
    for (size_t b = 0; b < out.inputs1.size(); ++b) {
      out.instance.relation.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derived lower-bound report for single-type promises

struct StrongtypeReport {
  long long D = 0, C = 0;
  double k = 0.0;
  double beta = 0.0;
  bool beta_cube_ok = true;  // beta >= k^(1/3), the constant-free consequence
  std::vector<std::string> claims;  // labeled asymptotic statements, not assertions
};

inline StrongtypeReport strongtype_report(long long D, long long C) {
  StrongtypeReport r;
  r.D = D;
  r.C = C;
  r.k = 0.25 * std::sqrt(static_cast<double>(D));
  if (C > 0) {
    r.beta = std::max(std::sqrt(static_cast<double>(C)), r.k / static_cast<double>(C));
    r.beta_cube_ok = r.beta >= std::cbrt(r.k) * (1.0 - 1e-9);
    r.claims.push_back("R(f) = Omega(beta) with beta = " + std::to_string(r.beta));
    r.claims.push_back("Q(f) = Omega(sqrt(beta))");
  } else {
    r.beta = 0.0;
    r.claims.push_back("f is constant; no lower-bound claim");
  }
  return r;
}

}  // namespace symq
