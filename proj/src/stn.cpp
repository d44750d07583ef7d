#include "stn.hpp"

namespace fape {

Timepoint Stn::addTimepointImpl() {
  int old = n_;
  ++n_;
  std::vector<int64_t> grown(static_cast<size_t>(n_) * n_, kNegInf);
  for (int a = 0; a < old; ++a)
    for (int b = 0; b < old; ++b)
      grown[static_cast<size_t>(a) * n_ + b] = m_[static_cast<size_t>(a) * old + b];
  m_ = std::move(grown);
  m_[idx(old, old)] = 0;
  if (old > 0) {
    // Time is nonnegative: close lb(x, new) through lb(x, origin) + 0.
    for (Timepoint x = 0; x < old; ++x) {
      int64_t viaOrigin = (x == kOrigin) ? 0 : m_[idx(x, kOrigin)];
      if (viaOrigin > kNegInf) m_[idx(x, old)] = viaOrigin;
    }
  }
  return old;
}

bool Stn::addConstraint(Timepoint t1, Timepoint t2, int64_t d) {
  FAPE_CHECK(consistent_, "addConstraint on inconsistent STN");
  FAPE_CHECK(t1 >= 0 && t1 < n_ && t2 >= 0 && t2 < n_, "unknown timepoint");
  if (t1 == t2) {
    if (d > 0) { consistent_ = false; return false; }
    return true;
  }
  if (d > maxDelay(t1, t2)) {  // contradicts entailed upper bound
    consistent_ = false;
    return false;
  }
  if (lb(t1, t2) >= d) return true;  // already entailed

  // Incremental all-pairs update: only pairs routed through the new edge
  // can improve. Quadratic in the number of timepoints.
  std::vector<Timepoint> srcs, dsts;
  srcs.reserve(n_);
  dsts.reserve(n_);
  for (Timepoint x = 0; x < n_; ++x) {
    int64_t toT1 = (x == t1) ? 0 : m_[idx(x, t1)];
    if (toT1 > kNegInf && addSat(toT1, d) > m_[idx(x, t2)]) srcs.push_back(x);
    int64_t fromT2 = (x == t2) ? 0 : m_[idx(t2, x)];
    if (fromT2 > kNegInf && addSat(d, fromT2) > m_[idx(t1, x)]) dsts.push_back(x);
  }
  for (Timepoint x : srcs) {
    int64_t xa = (x == t1) ? 0 : m_[idx(x, t1)];
    for (Timepoint y : dsts) {
      int64_t by = (y == t2) ? 0 : m_[idx(t2, y)];
      int64_t cand = addSat(addSat(xa, d), by);
      if (cand > m_[idx(x, y)]) m_[idx(x, y)] = cand;
    }
  }
  return true;
}

}  // namespace fape
