#pragma once

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace edgelab {

/// Set partition of {1..M}; blocks sorted internally and by minimum.
struct NonCrossingPartition {
  int M = 0;
  std::vector<std::vector<int>> blocks;

  bool valid() const {
    std::vector<int> owner(M + 1, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) return false;
      for (std::size_t i = 0; i < blocks[b].size(); ++i) {
        int x = blocks[b][i];
        if (x < 1 || x > M || owner[x] != -1) return false;
        if (i > 0 && blocks[b][i - 1] >= x) return false;
        owner[x] = static_cast<int>(b);
      }
    }
    for (int x = 1; x <= M; ++x)
      if (owner[x] == -1) return false;
    // a<b<c<d with a,c in one block and b,d in another
    for (int a = 1; a <= M; ++a)
      for (int b = a + 1; b <= M; ++b)
        for (int c = b + 1; c <= M; ++c)
          for (int d = c + 1; d <= M; ++d)
            if (owner[a] == owner[c] && owner[b] == owner[d] && owner[a] != owner[b]) return false;
    return true;
  }

  void canonicalize() {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
  }

  bool operator==(const NonCrossingPartition& o) const { return M == o.M && blocks == o.blocks; }
};

inline constexpr int kDefaultEnumerationBound = 14;

namespace detail {

struct NcBuilder {
  int M;
  std::vector<std::vector<int>> blocks;
  std::vector<std::pair<int, int>> pending;
  const std::function<void(const NonCrossingPartition&)>& sink;

  void next() {
    auto saved = pending;
    while (!pending.empty() && pending.back().first > pending.back().second) pending.pop_back();
    if (pending.empty()) {
      NonCrossingPartition p{M, blocks};
      p.canonicalize();
      sink(p);
      pending = std::move(saved);
      return;
    }
    auto [a, b] = pending.back();
    pending.pop_back();
    blocks.push_back({a});
    extend(a, b);
    blocks.pop_back();
    pending = std::move(saved);
  }

  // Block currently ends at `last`; elements in (last, b] are still free.
  void extend(int last, int b) {
    pending.push_back({last + 1, b});
    next();
    pending.pop_back();
    for (int e = last + 1; e <= b; ++e) {
      pending.push_back({last + 1, e - 1});
      blocks.back().push_back(e);
      extend(e, b);
      blocks.back().pop_back();
      pending.pop_back();
    }
  }
};

}  // namespace detail

/// Calls `sink` once per non-crossing partition of {1..M}.
inline void for_each_nc(int M, const std::function<void(const NonCrossingPartition&)>& sink,
                        int bound = kDefaultEnumerationBound) {
  if (M < 0) throw Error("negative ground-set size");
  if (M > bound) throw EnumerationTooLarge("NC(" + std::to_string(M) + ") above enumeration bound");
  if (M == 0) {
    sink(NonCrossingPartition{0, {}});
    return;
  }
  detail::NcBuilder builder{M, {}, {{1, M}}, sink};
  builder.next();
}

inline std::vector<NonCrossingPartition> enumerate_nc(int M, int bound = kDefaultEnumerationBound) {
  std::vector<NonCrossingPartition> out;
  for_each_nc(M, [&](const NonCrossingPartition& p) { out.push_back(p); }, bound);
  return out;
}

}  // namespace edgelab
