#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symq/certificates.hpp"
#include "symq/core.hpp"

namespace symq {

// Executable form of the small-certificate structure search: either the
// revealed entries decide f, or we obtain a revealed assignment plus a set of
// scarce symbols that every small certificate must touch outside it.

// Progress measure of a certificate against (revealed, scarce): zero when the
// certificate conflicts with the revealed entries, otherwise the number of
// entries not yet revealed plus the number of its symbols not yet scarce.
inline int certificate_progress(const PartialAssignment& c, const PartialAssignment& revealed,
                                const std::vector<int>& scarce) {
  if (!compatible(c, revealed)) return 0;
  int unrevealed = assignment_difference(c, revealed).size();
  int fresh_symbols = 0;
  for (int sym : alphabet_of(c)) {
    if (!std::binary_search(scarce.begin(), scarce.end(), sym)) ++fresh_symbols;
  }
  return unrevealed + fresh_symbols;
}

namespace detail {

// Enumerates candidate assignments of size <= max_size in (size, positions,
// symbols) lexicographic order, restricted to candidates compatible with
// `revealed` whose fresh entries avoid `scarce`, and feasible inside type t.
// Visitor returns false to stop.
template <typename Visitor>
void enumerate_candidates(const TypeVector& t, int max_size, const PartialAssignment& revealed,
                          const std::vector<int>& scarce, Visitor&& visit) {
  const int n = t.total();
  const int M = t.alphabet_size();
  std::vector<int> positions;
  PartialAssignment c(n);
  bool stop = false;

  auto fill = [&](auto&& self, size_t d) -> void {
    if (stop) return;
    if (d == positions.size()) {
      if (!visit(c)) stop = true;
      return;
    }
    int pos = positions[d];
    if (revealed.entries[pos] != kStar) {
      c.entries[pos] = revealed.entries[pos];
      if (remaining_counts(t, c)) self(self, d + 1);
      c.entries[pos] = kStar;
      return;
    }
    for (int m = 0; m < M && !stop; ++m) {
      if (std::binary_search(scarce.begin(), scarce.end(), m)) continue;
      c.entries[pos] = m;
      if (remaining_counts(t, c)) self(self, d + 1);
      c.entries[pos] = kStar;
    }
  };

  auto subsets = [&](auto&& self, int from, int want) -> void {
    if (stop) return;
    if (static_cast<int>(positions.size()) == want) {
      fill(fill, 0);
      return;
    }
    for (int p = from; p < n && !stop; ++p) {
      positions.push_back(p);
      self(self, p + 1, want);
      positions.pop_back();
    }
  };

  for (int s = 0; s <= max_size && !stop; ++s) subsets(subsets, 0, s);
}

}  // namespace detail

// All non-vacuous certificates c with |c| <= max_size, compatible with
// `revealed`, whose fresh alphabet avoids `scarce`; (size, positions,
// symbols)-lexicographic order.
inline std::vector<std::pair<PartialAssignment, int>> list_certificates(
    const TypeVector& t, CertificateTester& tester, int max_size,
    const PartialAssignment& revealed, std::vector<int> scarce) {
  std::sort(scarce.begin(), scarce.end());
  std::vector<std::pair<PartialAssignment, int>> out;
  detail::enumerate_candidates(t, max_size, revealed, scarce, [&](const PartialAssignment& c) {
    CertVerdict v = tester.test(c);
    if (v.is_cert && !v.vacuous) out.emplace_back(c, v.value);
    return true;
  });
  return out;
}

inline std::optional<std::pair<PartialAssignment, int>> first_certificate(
    const TypeVector& t, CertificateTester& tester, int max_size,
    const PartialAssignment& revealed, std::vector<int> scarce,
    int wanted_value = -1, const PartialAssignment* also_compatible = nullptr) {
  std::sort(scarce.begin(), scarce.end());
  std::optional<std::pair<PartialAssignment, int>> found;
  detail::enumerate_candidates(t, max_size, revealed, scarce, [&](const PartialAssignment& c) {
    if (also_compatible && !compatible(c, *also_compatible)) return true;
    if (also_compatible) {
      // joint realizability with both assignments
      PartialAssignment all = merge(merge(revealed, *also_compatible), c);
      if (!remaining_counts(t, all)) return true;
    }
    CertVerdict v = tester.test(c);
    if (v.is_cert && !v.vacuous && (wanted_value < 0 || v.value == wanted_value)) {
      found = {c, v.value};
      return false;
    }
    return true;
  });
  return found;
}

// ---------------------------------------------------------------------------
// The search loop

struct LemmaIteration {
  PartialAssignment chosen;
  int chosen_value = -1;
  std::vector<int> seen_symbols;     // R: alphabet gathered from chosen certificates
  std::vector<int> scarce;           // S after this iteration
  std::vector<int> queried;          // positions queried this iteration
  std::vector<int> progress_values;  // aligned with LemmaRun::small_certificates
};

struct LemmaRun {
  int k = 0;
  bool decided = false;  // true: Value outcome
  int value = -1;
  PartialAssignment revealed;
  std::vector<int> scarce;
  int iterations = 0;
  bool tester_exact = true;
  std::vector<LemmaIteration> trace;
  // recorded when trace_progress is on:
  std::vector<std::pair<PartialAssignment, int>> small_certificates;
  std::vector<int> initial_progress;
};

struct LemmaOptions {
  bool trace_progress = false;  // record progress values of all small certificates
};

inline LemmaRun structure_search(const PartialFunction& f, int k, const Input& x,
                                 CertificateTester& tester, const LemmaOptions& opts = {}) {
  if (f.promise.kind != PromiseSet::Kind::single_type) {
    throw Error(Errc::invalid_parameters, "structure search needs a single-type promise");
  }
  if (k < 1) throw Error(Errc::invalid_parameters, "k must be at least 1");
  const TypeVector& t = f.promise.types.front();
  if (type_of(x, f.promise.M) != t) {
    throw Error(Errc::invalid_parameters, "input is not of the promised type");
  }
  const int n = f.promise.n;

  LemmaRun run;
  run.k = k;
  run.tester_exact = tester.exact();
  run.revealed = PartialAssignment(n);
  std::vector<int> seen;  // R

  if (opts.trace_progress) {
    run.small_certificates = list_certificates(t, tester, k, PartialAssignment(n), {});
    for (const auto& [c, v] : run.small_certificates) {
      run.initial_progress.push_back(certificate_progress(c, run.revealed, run.scarce));
    }
  }

  for (int guard = 0; guard <= n + 2; ++guard) {
    auto pick = first_certificate(t, tester, k, run.revealed, run.scarce);
    if (!pick) {
      run.decided = false;
      return run;
    }
    ++run.iterations;
    LemmaIteration it;
    it.chosen = pick->first;
    it.chosen_value = pick->second;

    for (int sym : alphabet_of(it.chosen)) {
      if (!std::binary_search(seen.begin(), seen.end(), sym)) {
        seen.insert(std::lower_bound(seen.begin(), seen.end(), sym), sym);
      }
    }
    // scarce before querying: multiplicity left outside the revealed entries
    // is under 2k
    auto occ = symbol_counts(run.revealed, f.promise.M);
    run.scarce.clear();
    for (int sym : seen) {
      if (t.counts[sym] - occ[sym] < 2 * k) run.scarce.push_back(sym);
    }
    for (int pos = 0; pos < n; ++pos) {
      if (it.chosen.entries[pos] != kStar && run.revealed.entries[pos] == kStar) {
        run.revealed.set(pos, x[pos]);
        it.queried.push_back(pos);
      }
    }
    it.seen_symbols = seen;
    it.scarce = run.scarce;
    if (opts.trace_progress) {
      for (const auto& [c, v] : run.small_certificates) {
        it.progress_values.push_back(certificate_progress(c, run.revealed, run.scarce));
      }
    }
    run.trace.push_back(std::move(it));

    CertVerdict pv = tester.test(run.revealed);
    if (pv.is_cert && !pv.vacuous) {
      run.decided = true;
      run.value = pv.value;
      return run;
    }
  }
  throw Error(Errc::invalid_parameters, "structure search failed to make progress");
}

// ---------------------------------------------------------------------------
// Exhaustive postcondition verification (the module's oracle): for every
// promise member consistent with the revealed entries, every sub-certificate
// of size <= k must carry a scarce symbol outside the revealed part.

struct StructureVerification {
  bool ok = true;
  std::optional<Input> bad_input;
  std::optional<PartialAssignment> bad_certificate;
};

inline StructureVerification verify_structure(const PartialFunction& f, const LemmaRun& run,
                                              long long budget = default_expansion_budget()) {
  if (run.decided) throw Error(Errc::invalid_parameters, "run decided f; nothing to verify");
  const TypeVector& t = f.promise.types.front();
  const int n = f.promise.n;
  ExpandedFunction ef = expand_function(f, budget);
  MaterializedTester tester(ef);

  StructureVerification out;
  std::vector<int> positions;
  for (size_t xi = 0; xi < ef.size(); ++xi) {
    const Input& cand = ef.inputs[xi];
    if (!is_consistent(run.revealed, cand)) continue;
    // all position subsets of size <= k
    auto rec = [&](auto&& self, int from, int want) -> bool {
      if (static_cast<int>(positions.size()) == want) {
        PartialAssignment c = restrict_to(cand, positions);
        PartialAssignment fresh = assignment_difference(c, run.revealed);
        bool touches_scarce = false;
        for (int sym : alphabet_of(fresh)) {
          if (std::binary_search(run.scarce.begin(), run.scarce.end(), sym)) {
            touches_scarce = true;
            break;
          }
        }
        if (touches_scarce) return true;
        CertVerdict v = tester.test(c);
        if (v.is_cert && !v.vacuous) {
          out.ok = false;
          out.bad_input = cand;
          out.bad_certificate = c;
          return false;
        }
        return true;
      }
      for (int p = from; p < n; ++p) {
        positions.push_back(p);
        bool cont = self(self, p + 1, want);
        positions.pop_back();
        if (!cont) return false;
      }
      return true;
    };
    for (int s = 0; s <= run.k; ++s) {
      if (!rec(rec, 0, s)) return out;
    }
  }
  return out;
}

}  // namespace symq
