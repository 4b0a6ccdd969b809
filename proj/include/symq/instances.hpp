#pragma once

#include <map>
#include <string>
#include <vector>

#include "symq/core.hpp"
#include "symq/rng.hpp"

namespace symq {

// Built-in instance families. Generation is pure: the same spec always
// yields the same instance, including the seeded ones.

struct InstanceSpec {
  std::string name;       // display name; defaults to generator + params
  std::string generator;  // perm-inversion | or-total | weight-promise |
                          // threshold-symmetric | random-on-type | explicit-file
  std::map<std::string, long long> params;
  std::string file;  // explicit-file only
};

inline std::vector<TypeVector> all_types(int n, int M) {
  std::vector<TypeVector> out;
  std::vector<int> counts(M, 0);
  auto rec = [&](auto&& self, int sym, int left) -> void {
    if (sym == M - 1) {
      counts[sym] = left;
      out.push_back(TypeVector(counts));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[sym] = c;
      self(self, sym + 1, left - c);
    }
  };
  if (M >= 1) rec(rec, 0, n);
  return out;
}

namespace generators {

inline PartialFunction perm_inversion(int n) {
  if (n < 2) throw Error(Errc::invalid_parameters, "perm-inversion needs n >= 2");
  TypeVector t(std::vector<int>(n, 1));
  PartialFunction f;
  f.promise = PromiseSet::single(std::move(t));
  int half = n / 2;
  f.value = [half](const Input& x) {
    for (int i = 0; i < half; ++i) {
      if (x[i] == 0) return 0;
    }
    return 1;
  };
  return f;
}

inline PartialFunction or_total(int n) {
  if (n < 1) throw Error(Errc::invalid_parameters, "or-total needs n >= 1");
  PartialFunction f;
  f.promise = PromiseSet::union_of(all_types(n, 2));
  f.value = [](const Input& x) {
    for (int s : x) {
      if (s != 0) return 1;
    }
    return 0;
  };
  return f;
}

inline PartialFunction weight_promise(int n) {
  if (n < 2) throw Error(Errc::invalid_parameters, "weight-promise needs n >= 2");
  std::vector<int> zero = {n, 0};
  std::vector<int> half = {n - n / 2, n / 2};
  PartialFunction f;
  f.promise = PromiseSet::union_of({TypeVector(zero), TypeVector(half)});
  f.value = [](const Input& x) {
    for (int s : x) {
      if (s != 0) return 1;
    }
    return 0;
  };
  return f;
}

inline PartialFunction threshold_symmetric(int n, int M, int cut) {
  if (n < 1 || M < 1) throw Error(Errc::invalid_parameters, "bad threshold parameters");
  PartialFunction f;
  f.promise = PromiseSet::union_of(all_types(n, M));
  int top = M - 1;
  f.value = [top, cut](const Input& x) {
    int count = 0;
    for (int s : x) count += (s == top);
    return count >= cut ? 1 : 0;
  };
  return f;
}

// Random single-type instance: a seeded type plus either a per-member hash
// bit (free) or one seeded constant bit.
inline PartialFunction random_on_type(int n, int M, uint64_t seed, bool free_values) {
  Rng rng(mix_hash(0x7275'6e74'7970'65ULL, seed));
  std::vector<int> counts(M, 0);
  for (int i = 0; i < n; ++i) ++counts[rng.below(static_cast<uint64_t>(M))];
  PartialFunction f;
  f.promise = PromiseSet::single(TypeVector(counts));
  if (free_values) {
    f.value = [seed](const Input& x) {
      uint64_t h = mix_hash(0xf00dULL, seed);
      for (int s : x) h = mix_hash(h, static_cast<uint64_t>(s) + 1);
      return static_cast<int>(h & 1);
    };
  } else {
    int bit = static_cast<int>(rng.next() & 1);
    f.value = [bit](const Input&) { return bit; };
  }
  return f;
}

}  // namespace generators

inline long long spec_param(const InstanceSpec& spec, const std::string& key, long long dflt,
                            bool required = false) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    if (required) throw Error(Errc::invalid_parameters, "missing parameter " + key);
    return dflt;
  }
  return it->second;
}

PartialFunction load_instance_file(const std::string& path);  // io.hpp

inline PartialFunction generate(const InstanceSpec& spec) {
  if (spec.generator == "perm-inversion") {
    return generators::perm_inversion(static_cast<int>(spec_param(spec, "n", 0, true)));
  }
  if (spec.generator == "or-total") {
    return generators::or_total(static_cast<int>(spec_param(spec, "n", 0, true)));
  }
  if (spec.generator == "weight-promise") {
    return generators::weight_promise(static_cast<int>(spec_param(spec, "n", 0, true)));
  }
  if (spec.generator == "threshold-symmetric") {
    int n = static_cast<int>(spec_param(spec, "n", 0, true));
    int M = static_cast<int>(spec_param(spec, "m", 2));
    int cut = static_cast<int>(spec_param(spec, "cut", (n + 1) / 2));
    return generators::threshold_symmetric(n, M, cut);
  }
  if (spec.generator == "random-on-type") {
    int n = static_cast<int>(spec_param(spec, "n", 0, true));
    int M = static_cast<int>(spec_param(spec, "m", 2));
    uint64_t seed = static_cast<uint64_t>(spec_param(spec, "seed", 0));
    bool free_values = spec_param(spec, "free", 1) != 0;
    return generators::random_on_type(n, M, seed, free_values);
  }
  if (spec.generator == "explicit-file") {
    if (spec.file.empty()) throw Error(Errc::invalid_parameters, "explicit-file needs a path");
    return load_instance_file(spec.file);
  }
  throw Error(Errc::invalid_parameters, "unknown generator " + spec.generator);
}

inline std::string spec_display_name(const InstanceSpec& spec) {
  if (!spec.name.empty()) return spec.name;
  std::string s = spec.generator;
  for (const auto& [k, v] : spec.params) s += "-" + k + std::to_string(v);
  return s;
}

}  // namespace symq
