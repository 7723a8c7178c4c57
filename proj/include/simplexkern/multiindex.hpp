#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace simplexkern {

// Multi-index n = (n_1,...,n_d) of nonnegative integers; |n| = sum of parts.
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& n) {
  return std::accumulate(n.begin(), n.end(), 0);
}

// A partition of |r| in k parts, stored as weakly decreasing positive parts.
// beta(j) is the number of parts equal to j.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    std::sort(parts_.begin(), parts_.end(), std::greater<int>());
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    for (int p : parts_)
      if (p < 0) throw std::invalid_argument("negative partition part");
  }

  static Partition from_multiindex(const MultiIndex& r) {
    return Partition(std::vector<int>(r.begin(), r.end()));
  }

  const std::vector<int>& parts() const { return parts_; }
  int k() const { return static_cast<int>(parts_.size()); }
  int total() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

  int beta(int j) const {
    return static_cast<int>(std::count(parts_.begin(), parts_.end(), j));
  }

  // multiplicity map j -> beta_j over the distinct part sizes
  std::map<int, int> multiplicities() const {
    std::map<int, int> b;
    for (int p : parts_) ++b[p];
    return b;
  }

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }
  bool operator<(const Partition& o) const { return parts_ < o.parts_; }

 private:
  std::vector<int> parts_;
};

// All multi-indices of length d with the given total, in lexicographic order.
// There are C(total+d-1, d-1) of them.
inline std::vector<MultiIndex> enumerate_compositions(int d, int total) {
  if (d < 1) throw std::invalid_argument("composition dimension must be >= 1");
  if (total < 0) throw std::invalid_argument("composition total must be >= 0");
  std::vector<MultiIndex> out;
  MultiIndex cur(d, 0);
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == d - 1) {
      cur[pos] = rem;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      cur[pos] = v;
      rec(pos + 1, rem - v);
    }
  };
  rec(0, total);
  return out;
}

// Memoized composition lists; kernel evaluations share these across degrees.
inline const std::vector<MultiIndex>& compositions(int d, int total) {
  static std::map<std::pair<int, int>, std::vector<MultiIndex>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, total);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, enumerate_compositions(d, total)).first;
  return it->second;
}

// All partitions of `total` into at most `max_parts` parts.
inline std::vector<Partition> enumerate_partitions(int total, int max_parts) {
  if (total < 0) throw std::invalid_argument("partition total must be >= 0");
  if (max_parts < 1) throw std::invalid_argument("max_parts must be >= 1");
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rem, int max_next) {
    if (rem == 0) {
      out.emplace_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == max_parts) return;
    for (int p = std::min(rem, max_next); p >= 1; --p) {
      cur.push_back(p);
      rec(rem - p, p);
      cur.pop_back();
    }
  };
  rec(total, total);
  return out;
}

}  // namespace simplexkern
