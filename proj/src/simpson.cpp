#include "pathcov/simpson.hpp"

namespace pathcov {

std::vector<NodeSet> subsets_by_size(const Graph& g, NodeSet pool, int max_size) {
  auto members = pool.to_vector();
  std::ranges::sort(members, {}, [&](NodeIndex n) -> const std::string& { return g.name(n); });
  const int n = static_cast<int>(members.size());
  std::vector<NodeSet> out;
  for (int k = 0; k <= std::min(max_size, n); ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      NodeSet s;
      for (int i : idx) s.insert(members[i]);
      out.push_back(s);
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace pathcov
