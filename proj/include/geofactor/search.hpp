#pragma once

// Exact multi-cover backtracking: given candidate subsets of a finite
// universe, find (or count) sub-collections that cover every element exactly
// `fold` times.  This one engine backs decomposition search, fold-spread
// search, spread enumeration and partition enumeration.
//
// Determinism contract: the branch element is always the first deficient
// universe element, candidates are tried in ascending index order, and the
// candidates chosen for one element form an increasing chain, so every
// solution is visited exactly once and the first solution found is the
// lexicographically least selection.

#include <cstdint>
#include <functional>
#include <vector>

namespace geofactor {

struct MultiCoverProblem {
  int universe = 0;
  int fold = 1;
  std::vector<std::vector<int>> sets;  // each sorted ascending
  std::uint64_t max_nodes = 50'000'000;
};

enum class SearchStatus {
  found,       // find-mode: a solution was found
  exhausted,   // the whole tree was explored
  node_limit,  // gave up at max_nodes; result is inconclusive
};

struct MultiCoverResult {
  SearchStatus status = SearchStatus::exhausted;
  std::vector<int> witness;          // set indices of the first solution, if any
  std::uint64_t solution_count = 0;  // meaningful in count mode
  std::uint64_t nodes = 0;
};

class MultiCoverSearch {
 public:
  explicit MultiCoverSearch(const MultiCoverProblem& problem) : pb_(problem) {
    containing_.resize(static_cast<std::size_t>(pb_.universe));
    for (std::size_t s = 0; s < pb_.sets.size(); ++s)
      for (int e : pb_.sets[s]) containing_[static_cast<std::size_t>(e)].push_back(static_cast<int>(s));
  }

  /// Stop at the first solution.
  MultiCoverResult find_first() { return run(/*count_all=*/false, nullptr); }

  /// Explore everything, counting solutions (the witness is the first one).
  MultiCoverResult count_all(const std::function<void(const std::vector<int>&)>& on_solution = nullptr) {
    return run(/*count_all=*/true, on_solution);
  }

 private:
  MultiCoverResult run(bool count_all, const std::function<void(const std::vector<int>&)>& on_solution) {
    res_ = MultiCoverResult{};
    count_mode_ = count_all;
    callback_ = on_solution;
    cov_.assign(static_cast<std::size_t>(pb_.universe), 0);
    used_.assign(pb_.sets.size(), false);
    chosen_.clear();
    aborted_ = false;
    const bool finished = dfs(0, 0);
    if (aborted_)
      res_.status = SearchStatus::node_limit;
    else if (!count_mode_ && finished)
      res_.status = SearchStatus::found;
    else
      res_.status = SearchStatus::exhausted;
    return res_;
  }

  // `scan_from`: first universe position that may still be deficient
  // (coverage only grows along a branch).  `min_set`: smallest candidate
  // index allowed while the same element stays deficient.
  bool dfs(int scan_from, int min_set) {
    if (++res_.nodes > pb_.max_nodes) {
      aborted_ = true;
      return true;  // unwind
    }
    int e = scan_from;
    while (e < pb_.universe && cov_[static_cast<std::size_t>(e)] == pb_.fold) ++e;
    if (e == pb_.universe) {
      ++res_.solution_count;
      if (res_.witness.empty()) res_.witness = chosen_;
      if (callback_) callback_(chosen_);
      return !count_mode_;
    }
    for (int s : containing_[static_cast<std::size_t>(e)]) {
      if (s < min_set || used_[static_cast<std::size_t>(s)]) continue;
      const auto& members = pb_.sets[static_cast<std::size_t>(s)];
      bool fits = true;
      for (int x : members)
        if (cov_[static_cast<std::size_t>(x)] == pb_.fold) {
          fits = false;
          break;
        }
      if (!fits) continue;
      used_[static_cast<std::size_t>(s)] = true;
      for (int x : members) ++cov_[static_cast<std::size_t>(x)];
      chosen_.push_back(s);
      const bool still_deficient = cov_[static_cast<std::size_t>(e)] < pb_.fold;
      const bool done = dfs(e, still_deficient ? s + 1 : 0);
      chosen_.pop_back();
      for (int x : members) --cov_[static_cast<std::size_t>(x)];
      used_[static_cast<std::size_t>(s)] = false;
      if (done) return true;
    }
    return false;
  }

  const MultiCoverProblem& pb_;
  MultiCoverResult res_;
  std::vector<std::vector<int>> containing_;
  std::vector<int> cov_;
  std::vector<bool> used_;
  std::vector<int> chosen_;
  std::function<void(const std::vector<int>&)> callback_;
  bool count_mode_ = false;
  bool aborted_ = false;
};

}  // namespace geofactor
