#pragma once

#include <string>

#include "ripple/engine.hpp"
#include "ripple/oracle.hpp"

namespace ripple {

// Machine-readable result.  Stable key order, no timing fields: two runs
// with the same configuration, seed, and worker count of one compare equal
// byte for byte.
std::string result_to_json(const RippleResult& r);

// One row per pattern: pattern,order,edges,density,is_star,estimate.
std::string result_to_csv(const RippleResult& r);

// Exact enumeration result in the same JSON envelope (mode "exact").
std::string exact_to_json(const ExactCounts& e, int k);
std::string exact_to_csv(const ExactCounts& e);

// Human-oriented run summary, timing included; for terminal output only.
std::string human_summary(const RippleResult& r);

}  // namespace ripple
