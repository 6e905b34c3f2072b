#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace otrim {

// Absolute tolerance for all feasibility checks on unit-scale data.
inline constexpr double kFeasTol = 1e-12;

// Minimal separation enforced between tied 1-d sample points before solving.
inline constexpr double kTieStep = 1e-15;

enum class errc {
  usage,         // bad arguments / flag values
  dimension,     // size or dimension mismatch
  precondition,  // violated operation precondition (unsorted input, ...)
  feasibility,   // infeasible trimming / stripe plan
  measure,       // malformed measure (weights do not sum to one, ...)
  io,            // file read/write failure
  internal       // invariant breakage that should be impossible
};

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  errc kind() const noexcept { return kind_; }

 private:
  errc kind_;
};

// Odd extension of t^q to the whole line: sgn(t) * |t|^q.
inline double signed_pow(double t, double q) {
  if (t == 0.0) return 0.0;
  if (q == 2.0) return t < 0 ? -(t * t) : t * t;
  if (q == 3.0) return t * t * t;
  double a = std::pow(std::abs(t), q);
  return t < 0 ? -a : a;
}

inline double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace otrim
