#pragma once

#include <ostream>

namespace otrim {

// Runs the oracle-equivalence suites (matching vs. enumeration, 1-d solver vs.
// grid search, envelope scans vs. their literal definitions, quantization MC
// vs. closed form) and prints one pass/fail line per suite. Returns true when
// everything passes.
bool selftest(std::ostream& out);

}  // namespace otrim
