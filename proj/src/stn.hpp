#pragma once

#include <cstdint>
#include <vector>

#include "util.hpp"

namespace fape {

using Timepoint = int32_t;
constexpr Timepoint kOrigin = 0;

// Simple temporal network over integer timepoints with a dense matrix of
// entailed lower bounds. lb(a,b) is the strongest entailed bound on b - a,
// kNegInf when the pair is unconstrained. A constraint "t2 - t1 >= d" that
// contradicts the current bounds is rejected without modifying the matrix,
// so the network stays queryable after a failed post.
class Stn {
 public:
  Stn() { addTimepointImpl(); /* origin */ }

  int size() const { return n_; }
  bool consistent() const { return consistent_; }

  // New timepoint, constrained only by time >= origin.
  Timepoint addTimepoint() {
    FAPE_CHECK(consistent_, "addTimepoint on inconsistent STN");
    return addTimepointImpl();
  }

  // Posts t2 - t1 >= d. Returns false and flags the network if inconsistent.
  bool addConstraint(Timepoint t1, Timepoint t2, int64_t d);

  // Posts t2 - t1 == d.
  bool addEquality(Timepoint t1, Timepoint t2, int64_t d) {
    return addConstraint(t1, t2, d) && addConstraint(t2, t1, -d);
  }

  // Strongest entailed lower bound on b - a; kNegInf when unconstrained.
  int64_t lb(Timepoint a, Timepoint b) const {
    FAPE_CHECK(consistent_, "dist query on inconsistent STN");
    return m_[idx(a, b)];
  }

  // Minimal delay from a to b (the guaranteed minimum of b - a).
  int64_t minDelay(Timepoint a, Timepoint b) const { return lb(a, b); }

  // Maximal delay from a to b; kPosInf when unbounded.
  int64_t maxDelay(Timepoint a, Timepoint b) const {
    int64_t v = lb(b, a);
    return v <= kNegInf ? kPosInf : -v;
  }

  int64_t earliest(Timepoint t) const { return lb(kOrigin, t); }
  int64_t latest(Timepoint t) const { return maxDelay(kOrigin, t); }

  bool entails(Timepoint t1, Timepoint t2, int64_t d) const {
    return lb(t1, t2) >= d;
  }
  // True iff posting t2 - t1 >= d would keep the network consistent.
  bool consistentWith(Timepoint t1, Timepoint t2, int64_t d) const {
    return d <= maxDelay(t1, t2);
  }

 private:
  Timepoint addTimepointImpl();
  size_t idx(Timepoint a, Timepoint b) const {
    return static_cast<size_t>(a) * n_ + b;
  }

  int n_ = 0;
  bool consistent_ = true;
  std::vector<int64_t> m_;
};

}  // namespace fape
