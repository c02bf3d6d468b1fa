#pragma once

// The H-transform H = (I + G^{-1})^{-1}, the (1 + 1/n) I - P family and
// partitions of a family into subfamilies with Gramian bounded below.

#include "gramsep/gramian.hpp"

#include <cstddef>
#include <vector>

namespace gramsep {

/// H = (G + I)^{-1} G. Throws SingularGramianError for singular G.
HermitianMatrix h_transform(const Gramian& g);
/// Same for any Hermitian positive definite matrix (tolerance 1e-10 N).
HermitianMatrix h_transform(const HermitianMatrix& g);

/// (1 + 1/n) I - P with P the all-1/n matrix; n >= 2.
Gramian remark_counterexample(std::size_t n);

struct Partition {
  std::vector<std::vector<std::size_t>> groups;  // 0-based, each sorted
  std::vector<double> group_bounds;              // lambda_min on each group
  bool feasible = true;
};

enum class PartitionStrategy { automatic, greedy, exhaustive };

/// Largest size handled by the exhaustive search.
inline constexpr std::size_t kExhaustiveLimit = 14;

/// Splits {0, ..., N-1} into groups whose principal submatrices have
/// lambda_min >= target.
///
/// Greedy: indices in input order, each joining the eligible group with the
/// largest resulting lambda_min, else opening a new group. Exhaustive: the
/// fewest groups, ties broken by the lexicographically smallest restricted
/// growth string. `automatic` is exhaustive up to kExhaustiveLimit.
/// `feasible` is false when some index cannot meet the target on its own or
/// more than max_groups groups are needed.
Partition partition_search(const HermitianMatrix& m, double target, std::size_t max_groups,
                           PartitionStrategy strategy = PartitionStrategy::automatic);

/// lambda_min of every group of `groups` on the matrix m.
std::vector<double> group_bounds(const HermitianMatrix& m, const std::vector<std::vector<std::size_t>>& groups);

struct HPartitionResult {
  Partition partition;            // groups found on H, bounds rescored on G
  std::vector<double> h_bounds;   // the same groups scored on H
};

/// Partitions H = h_transform(G) and carries the groups back to G. Each
/// G bound dominates the matching H bound because H <= G.
HPartitionResult h_partition_pipeline(const Gramian& g, double target, std::size_t max_groups = 0,
                                      PartitionStrategy strategy = PartitionStrategy::automatic);

}  // namespace gramsep
