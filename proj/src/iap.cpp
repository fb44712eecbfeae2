#include "invbal/iap.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace invbal::iap {

void validate(std::span<const Interval> intervals) {
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    if (intervals[k].a > intervals[k].b) {
      throw std::invalid_argument("interval " + std::to_string(k + 1) +
                                  " has a > b");
    }
    if (k > 0 && intervals[k - 1].a >= intervals[k].a) {
      throw std::invalid_argument("left endpoints must be strictly increasing at interval " +
                                  std::to_string(k + 1));
    }
  }
}

namespace {

bool covers(const Interval& outer, std::int64_t point) {
  return outer.a <= point && point <= outer.b;
}

}  // namespace

std::vector<int> coverage(std::span<const Interval> intervals, int i) {
  if (i < 0 || static_cast<std::size_t>(i) >= intervals.size()) {
    throw std::out_of_range("interval index out of range");
  }
  std::vector<int> out;
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    if (covers(intervals[j], intervals[i].a)) out.push_back(static_cast<int>(j));
  }
  return out;
}

std::vector<std::vector<int>> coverage_sets(std::span<const Interval> intervals) {
  std::vector<std::vector<int>> out(intervals.size());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    out[i] = coverage(intervals, static_cast<int>(i));
  }
  return out;
}

Assignment solve(std::span<const Interval> intervals, TieBreak tie, LinkRule link) {
  validate(intervals);
  const int s = static_cast<int>(intervals.size());
  Assignment out;
  out.labels.assign(s, 0);
  out.trigger.assign(s, -1);
  out.predecessor.assign(s, -1);
  out.removal_order.reserve(s);

  // With strictly increasing left endpoints, j in N_i implies j <= i.
  std::vector<char> remaining(s, 1);
  std::vector<int> live_cover(s, 0);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (covers(intervals[j], intervals[i].a)) ++live_cover[i];
    }
  }

  for (int step = 0; step < s; ++step) {
    int pick = -1;
    for (int i = 0; i < s; ++i) {
      if (!remaining[i]) continue;
      if (pick < 0 || live_cover[i] > live_cover[pick] ||
          (tie == TieBreak::LargestIndex && live_cover[i] == live_cover[pick])) {
        pick = i;
      }
    }
    int leftmost = -1;
    for (int j = 0; j <= pick; ++j) {
      if (remaining[j] && covers(intervals[j], intervals[pick].a)) {
        leftmost = j;
        break;
      }
    }
    const int label = live_cover[pick];
    out.labels[leftmost] = label;
    out.trigger[leftmost] = pick;
    for (int k = 0; k < s; ++k) {
      if (remaining[k] || k == leftmost) continue;
      if (out.labels[k] != label + 1) continue;
      const bool linked = link == LinkRule::CoversTrigger
                              ? covers(intervals[leftmost], intervals[out.trigger[k]].a)
                              : covers(intervals[k], intervals[leftmost].a);
      if (linked) {
        out.predecessor[k] = leftmost;
      }
    }
    remaining[leftmost] = 0;
    out.removal_order.push_back(leftmost);
    for (int i = leftmost; i < s; ++i) {
      if (covers(intervals[leftmost], intervals[i].a)) --live_cover[i];
    }
  }
  out.chains = chains_from_links(out.labels, out.predecessor);
  return out;
}

std::vector<std::vector<int>> chains_from_links(std::span<const int> labels,
                                                std::span<const int> predecessor) {
  const std::size_t s = labels.size();
  std::vector<char> is_predecessor(s, 0);
  for (int p : predecessor) {
    if (p >= 0) is_predecessor[static_cast<std::size_t>(p)] = 1;
  }
  std::vector<std::vector<int>> chains;
  for (std::size_t head = 0; head < s; ++head) {
    if (is_predecessor[head]) continue;
    std::vector<int> chain;
    for (int k = static_cast<int>(head); k >= 0; k = predecessor[k]) {
      chain.push_back(k);
      if (chain.size() > s) throw std::logic_error("predecessor links contain a cycle");
    }
    chains.push_back(std::move(chain));
  }
  std::stable_sort(chains.begin(), chains.end(),
                   [](const auto& x, const auto& y) { return x.size() > y.size(); });
  return chains;
}

bool check_local_dominance(std::span<const Interval> intervals,
                           std::span<const int> labels) {
  if (labels.size() != intervals.size()) return false;
  std::vector<int> local;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    local.clear();
    for (std::size_t j = 0; j < intervals.size(); ++j) {
      if (covers(intervals[j], intervals[i].a)) local.push_back(labels[j]);
    }
    std::sort(local.begin(), local.end());
    for (std::size_t k = 0; k < local.size(); ++k) {
      if (local[k] < static_cast<int>(k + 1)) return false;
    }
  }
  return true;
}

bool check_global_dominance(std::span<const Interval> intervals,
                            std::span<const int> labels) {
  if (labels.size() != intervals.size()) return false;
  std::vector<std::int64_t> cover(intervals.size(), 0);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    for (std::size_t j = 0; j < intervals.size(); ++j) {
      if (covers(intervals[j], intervals[i].a)) ++cover[i];
    }
  }
  std::int64_t top = 1;
  std::int64_t label_sum = 0;
  std::int64_t cover_sum = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    top = std::max<std::int64_t>({top, labels[i], cover[i]});
    label_sum += labels[i];
    cover_sum += cover[i];
  }
  if (label_sum > cover_sum) return false;
  for (std::int64_t m = 1; m <= top; ++m) {
    std::int64_t label_excess = 0;
    std::int64_t cover_excess = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      label_excess += std::max<std::int64_t>(labels[i] - m, 0);
      cover_excess += std::max<std::int64_t>(cover[i] - m, 0);
    }
    if (label_excess > cover_excess) return false;
  }
  return true;
}

bool check_partition_monotonicity(std::span<const int> labels,
                                  const std::vector<std::vector<int>>& chains) {
  std::vector<char> seen(labels.size(), 0);
  std::size_t covered = 0;
  for (const auto& chain : chains) {
    std::vector<int> chain_labels;
    for (int k : chain) {
      if (k < 0 || static_cast<std::size_t>(k) >= labels.size() || seen[k]) {
        return false;
      }
      seen[k] = 1;
      ++covered;
      chain_labels.push_back(labels[k]);
    }
    std::sort(chain_labels.begin(), chain_labels.end());
    for (std::size_t k = 0; k < chain_labels.size(); ++k) {
      if (chain_labels[k] != static_cast<int>(k + 1)) return false;
    }
  }
  return covered == labels.size();
}

bool partition_exists(std::span<const int> labels) {
  std::map<int, std::size_t> count;
  for (int l : labels) {
    if (l < 1) return false;
    ++count[l];
  }
  std::size_t prev = labels.size();
  int expected = 1;
  for (const auto& [label, n] : count) {
    if (label != expected || n > prev) return false;
    prev = n;
    ++expected;
  }
  return true;
}

std::vector<std::vector<int>> greedy_partition(std::span<const int> labels) {
  if (!partition_exists(labels)) return {};
  std::map<int, std::vector<int>> by_label;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    by_label[labels[k]].push_back(static_cast<int>(k));
  }
  // Chain c takes the c-th interval of every label that has one.
  std::vector<std::vector<int>> chains(by_label.empty() ? 0 : by_label[1].size());
  for (auto it = by_label.rbegin(); it != by_label.rend(); ++it) {
    for (std::size_t c = 0; c < it->second.size(); ++c) {
      chains[c].push_back(it->second[c]);
    }
  }
  return chains;
}

}  // namespace invbal::iap
