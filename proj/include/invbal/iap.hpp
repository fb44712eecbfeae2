#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace invbal::iap {

/// Closed integer interval [a, b].
struct Interval {
  std::int64_t a = 0;
  std::int64_t b = 0;
  bool operator==(const Interval&) const = default;
};

/// Throws std::invalid_argument unless a_1 < a_2 < ... and a_k <= b_k.
void validate(std::span<const Interval> intervals);

/// Coverage set N_i = {j : a_j <= a_i <= b_j}, ascending. Indices are
/// 0-based. Works for any interval list, sorted or not.
std::vector<int> coverage(std::span<const Interval> intervals, int i);
std::vector<std::vector<int>> coverage_sets(std::span<const Interval> intervals);

struct Assignment {
  std::vector<int> labels;
  /// q_j: the interval whose coverage triggered j's label.
  std::vector<int> trigger;
  /// p_k: predecessor of k in its chain, -1 if none.
  std::vector<int> predecessor;
  /// Chains ordered by size (desc) then head index; each lists indices from
  /// the head (largest label) down to label 1.
  std::vector<std::vector<int>> chains;
  /// Order in which intervals left the working set.
  std::vector<int> removal_order;
};

enum class TieBreak {
  LargestIndex,  // the solver's rule
  SmallestIndex, // perturbed rule, kept only to show the rule matters
};

/// How predecessor links are formed when interval j receives label m: an
/// earlier-removed k with label m + 1 links to j if
///   CoversLeftEndpoint: k covers a_j (reproduces the worked executions), or
///   CoversTrigger:      j covers a_{q_k} (the pseudo-code's literal test).
/// Labels do not depend on the rule; both yield valid chain partitions.
enum class LinkRule { CoversLeftEndpoint, CoversTrigger };

/// Greedy interval assignment. Each step takes the remaining interval whose
/// left endpoint is covered by the most remaining intervals, labels the
/// leftmost interval covering it with that count, and records predecessor
/// links. O(s^2) time.
Assignment solve(std::span<const Interval> intervals,
                 TieBreak tie = TieBreak::LargestIndex,
                 LinkRule link = LinkRule::CoversLeftEndpoint);

/// Chains obtained by following predecessor links from every interval that
/// is nobody's predecessor.
std::vector<std::vector<int>> chains_from_links(std::span<const int> labels,
                                                std::span<const int> predecessor);

/// For every i, the k-th smallest label over N_i is at least k.
bool check_local_dominance(std::span<const Interval> intervals,
                           std::span<const int> labels);

/// sum f(label) >= sum f(|N_i|) for every decreasing concave f, tested on
/// the extreme rays f(k) = -k and f(k) = -(k - m)_+.
bool check_global_dominance(std::span<const Interval> intervals,
                            std::span<const int> labels);

/// The chains are disjoint, cover every interval and each carries labels
/// exactly {1, ..., |chain|}.
bool check_partition_monotonicity(std::span<const int> labels,
                                  const std::vector<std::vector<int>>& chains);

/// Whether any partition with that property exists for these labels
/// (label counts must be non-increasing in the label value).
bool partition_exists(std::span<const int> labels);

/// Chains for labels that admit a partition; empty if none exists.
std::vector<std::vector<int>> greedy_partition(std::span<const int> labels);

}  // namespace invbal::iap
