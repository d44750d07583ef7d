#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace fape {

// Internal contract violations abort; planner-level failures are return values.
#define FAPE_CHECK(cond, msg)                                                  \
  do {                                                                         \
    if (!(cond)) {                                                             \
      std::fprintf(stderr, "fatal: %s (%s:%d)\n", msg, __FILE__, __LINE__);    \
      std::abort();                                                            \
    }                                                                          \
  } while (0)

constexpr int64_t kNegInf = INT64_MIN / 4;
constexpr int64_t kPosInf = INT64_MAX / 4;

inline bool isFinite(int64_t v) { return v > kNegInf && v < kPosInf; }

// Saturating addition for bound arithmetic.
inline int64_t addSat(int64_t a, int64_t b) {
  if (a <= kNegInf || b <= kNegInf) return kNegInf;
  if (a >= kPosInf || b >= kPosInf) return kPosInf;
  return a + b;
}

}  // namespace fape
