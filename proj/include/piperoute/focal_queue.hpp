#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "solution.hpp"

namespace piperoute {

/// OPEN/FOCAL bookkeeping for focal search.
///
/// Every entry has a `lower` value (the OPEN key, an f-value or lower bound)
/// and a `value` (the cost tested for FOCAL membership). FOCAL holds the
/// entries with value <= floor(w * min lower) and is ordered by `FocalKey`.
/// Entries move between FOCAL and a pending set whenever min lower changes
/// in either direction.
template <class FocalKey>
class FocalQueue {
 public:
  using Handle = std::uint32_t;

  explicit FocalQueue(double w) : w_(w) {
    if (!(w >= 1.0)) throw std::invalid_argument("suboptimality factor must be >= 1");
  }

  bool empty() const { return open_.empty(); }
  std::size_t size() const { return open_.size(); }

  /// Smallest `lower` in OPEN. Precondition: !empty().
  std::int64_t min_lower() const { return open_.begin()->first; }

  Handle push(std::int64_t lower, std::int64_t value, FocalKey key) {
    const auto h = static_cast<Handle>(entries_.size());
    entries_.push_back({lower, value, std::move(key), true});
    open_.emplace(lower, h);
    if (open_.size() == 1 || lower < fmin_) {
      place(h);
      refresh();
    } else {
      place(h);
    }
    return h;
  }

  void erase(Handle h) {
    Entry& e = entries_[h];
    if (!e.live) return;
    e.live = false;
    open_.erase({e.lower, h});
    if (focal_.erase({e.key, h}) > 0) {
      focal_values_.erase({e.value, h});
    } else {
      pending_.erase({e.value, h});
    }
    refresh();
  }

  /// Best FOCAL entry. Precondition: !empty().
  Handle top() const { return focal_.begin()->second; }

  Handle pop() {
    const Handle h = top();
    erase(h);
    return h;
  }

  std::int64_t lower(Handle h) const { return entries_[h].lower; }
  std::int64_t value(Handle h) const { return entries_[h].value; }
  bool live(Handle h) const { return entries_[h].live; }

 private:
  struct Entry {
    std::int64_t lower;
    std::int64_t value;
    FocalKey key;
    bool live;
  };

  void place(Handle h) {
    const Entry& e = entries_[h];
    if (e.value <= bound_) {
      focal_.emplace(e.key, h);
      focal_values_.emplace(e.value, h);
    } else {
      pending_.emplace(e.value, h);
    }
  }

  // Re-establishes FOCAL membership after min lower may have changed.
  void refresh() {
    if (open_.empty()) {
      fmin_ = std::numeric_limits<std::int64_t>::max();
      bound_ = std::numeric_limits<std::int64_t>::min();
      return;
    }
    const std::int64_t fmin = open_.begin()->first;
    if (fmin == fmin_) return;
    fmin_ = fmin;
    bound_ = suboptimality_limit(w_, fmin_);
    while (!pending_.empty() && pending_.begin()->first <= bound_) {
      const Handle h = pending_.begin()->second;
      pending_.erase(pending_.begin());
      focal_.emplace(entries_[h].key, h);
      focal_values_.emplace(entries_[h].value, h);
    }
    while (!focal_values_.empty() && std::prev(focal_values_.end())->first > bound_) {
      const Handle h = std::prev(focal_values_.end())->second;
      focal_values_.erase(std::prev(focal_values_.end()));
      focal_.erase({entries_[h].key, h});
      pending_.emplace(entries_[h].value, h);
    }
  }

  double w_;
  std::int64_t fmin_ = std::numeric_limits<std::int64_t>::max();
  std::int64_t bound_ = std::numeric_limits<std::int64_t>::min();
  std::vector<Entry> entries_;
  std::set<std::pair<std::int64_t, Handle>> open_;
  std::set<std::pair<FocalKey, Handle>> focal_;
  std::set<std::pair<std::int64_t, Handle>> focal_values_;
  std::set<std::pair<std::int64_t, Handle>> pending_;
};

}  // namespace piperoute
