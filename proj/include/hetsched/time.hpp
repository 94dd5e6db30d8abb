#pragma once

#include <algorithm>
#include <cmath>

namespace hetsched {

// All durations and instants are doubles compared through the helpers below.
// The tolerance is relative for large magnitudes and absolute near zero.
using Time = double;

inline constexpr double kTimeTolerance = 1e-9;

inline double time_slack(Time a, Time b) {
  return kTimeTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool time_eq(Time a, Time b) { return std::abs(a - b) <= time_slack(a, b); }
inline bool time_lt(Time a, Time b) { return a < b - time_slack(a, b); }
inline bool time_le(Time a, Time b) { return a <= b + time_slack(a, b); }
inline bool time_gt(Time a, Time b) { return time_lt(b, a); }
inline bool time_ge(Time a, Time b) { return time_le(b, a); }

}  // namespace hetsched
