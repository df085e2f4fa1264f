#pragma once

#include <cstddef>
#include <functional>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

namespace treealign::detail {

// k-way merge of runs already sorted by key(); equal keys come out in
// (run index, position) order.
template <class T, class Key>
std::vector<T> merge_runs(std::span<const std::vector<T>> runs, Key key) {
    std::size_t total = 0;
    for (const auto& r : runs) total += r.size();
    std::vector<T> out;
    out.reserve(total);
    using Head = std::tuple<double, std::size_t, std::size_t>;
    std::priority_queue<Head, std::vector<Head>, std::greater<>> heap;
    for (std::size_t r = 0; r < runs.size(); ++r)
        if (!runs[r].empty()) heap.emplace(key(runs[r][0]), r, 0);
    while (!heap.empty()) {
        const auto [k, r, p] = heap.top();
        heap.pop();
        out.push_back(runs[r][p]);
        if (p + 1 < runs[r].size()) heap.emplace(key(runs[r][p + 1]), r, p + 1);
    }
    return out;
}

}  // namespace treealign::detail
