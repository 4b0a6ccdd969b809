#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "symq/errors.hpp"

namespace symq {

// Exact maximum matching on a general graph via subset DP; valid for
// n_vertices <= 20. Sensitivity feeds an exact inequality, so an
// approximation is not an option here.
inline int max_matching(int n_vertices, const std::vector<std::pair<int, int>>& edges) {
  if (edges.empty()) return 0;
  if (n_vertices > 20) throw Error(Errc::budget_exceeded, "matching limited to 20 vertices");
  std::vector<uint32_t> adj(n_vertices, 0);
  for (auto [a, b] : edges) {
    if (a == b || a < 0 || b < 0 || a >= n_vertices || b >= n_vertices) {
      throw Error(Errc::invalid_parameters, "bad edge");
    }
    adj[a] |= 1u << b;
    adj[b] |= 1u << a;
  }
  const uint32_t full = (n_vertices == 32) ? ~0u : ((1u << n_vertices) - 1);
  std::vector<int8_t> memo(static_cast<size_t>(full) + 1, -1);
  // memo[mask] = max matching within vertex set `mask`
  auto rec = [&](auto&& self, uint32_t mask) -> int {
    if (mask == 0) return 0;
    int8_t& m = memo[mask];
    if (m >= 0) return m;
    int i = __builtin_ctz(mask);
    uint32_t rest = mask & (mask - 1);
    int best = self(self, rest);  // leave i unmatched
    uint32_t nbrs = adj[i] & rest;
    while (nbrs) {
      int j = __builtin_ctz(nbrs);
      nbrs &= nbrs - 1;
      best = std::max(best, 1 + self(self, rest & ~(1u << j)));
    }
    m = static_cast<int8_t>(best);
    return best;
  };
  return rec(rec, full);
}

}  // namespace symq
