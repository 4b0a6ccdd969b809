#pragma once

#include <stdexcept>
#include <string>

namespace symq {

enum class Errc {
  budget_exceeded,
  dimension_mismatch,
  empty_promise,
  inequality_violation,
  empty_relation,
  isolated_vertex,
  invalid_blocks,
  selection_failed,
  cap_nonpositive,
  not_typewise_constant,
  not_found,
  conflict_detected,
  estimate_miss,
  invalid_parameters,
  io_failure,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::budget_exceeded: return "budget_exceeded";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::empty_promise: return "empty_promise";
    case Errc::inequality_violation: return "inequality_violation";
    case Errc::empty_relation: return "empty_relation";
    case Errc::isolated_vertex: return "isolated_vertex";
    case Errc::invalid_blocks: return "invalid_blocks";
    case Errc::selection_failed: return "selection_failed";
    case Errc::cap_nonpositive: return "cap_nonpositive";
    case Errc::not_typewise_constant: return "not_typewise_constant";
    case Errc::not_found: return "not_found";
    case Errc::conflict_detected: return "conflict_detected";
    case Errc::estimate_miss: return "estimate_miss";
    case Errc::invalid_parameters: return "invalid_parameters";
    case Errc::io_failure: return "io_failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace symq
