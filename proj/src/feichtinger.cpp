#include "gramsep/feichtinger.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace gramsep {

namespace {

double subset_min_eigenvalue(const HermitianMatrix& m, const std::vector<std::size_t>& idx) {
  return min_eigenvalue(principal_submatrix(m, idx));
}

std::vector<std::size_t> with_index(std::vector<std::size_t> group, std::size_t i) {
  group.insert(std::upper_bound(group.begin(), group.end(), i), i);
  return group;
}

Partition greedy_partition(const HermitianMatrix& m, double target, std::size_t max_groups) {
  const auto n = static_cast<std::size_t>(m.rows());
  Partition p;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = p.groups.size();
    double best_bound = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < p.groups.size(); ++g) {
      const double b = subset_min_eigenvalue(m, with_index(p.groups[g], i));
      if (b >= target && b > best_bound) {
        best = g;
        best_bound = b;
      }
    }
    if (best == p.groups.size()) {
      p.groups.push_back({i});
      if (m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() < target) p.feasible = false;
    } else {
      p.groups[best] = with_index(p.groups[best], i);
    }
  }
  if (p.groups.size() > max_groups) p.feasible = false;
  return p;
}

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const HermitianMatrix& m, double target) : m_(m), target_(target) {}

  std::vector<std::vector<std::size_t>> run() {
    const auto n = static_cast<std::size_t>(m_.rows());
    best_count_ = n + 1;
    visit(0);
    return best_;
  }

 private:
  void visit(std::size_t i) {
    const auto n = static_cast<std::size_t>(m_.rows());
    if (i == n) {
      if (current_.size() < best_count_) {
        best_count_ = current_.size();
        best_ = current_;
      }
      return;
    }
    for (std::size_t g = 0; g < current_.size(); ++g) {
      current_[g].push_back(i);
      if (subset_min_eigenvalue(m_, current_[g]) >= target_) visit(i + 1);
      current_[g].pop_back();
    }
    if (current_.size() + 1 < best_count_) {
      current_.push_back({i});
      visit(i + 1);
      current_.pop_back();
    }
  }

  const HermitianMatrix& m_;
  double target_;
  std::size_t best_count_ = 0;
  std::vector<std::vector<std::size_t>> current_;
  std::vector<std::vector<std::size_t>> best_;
};

Partition exhaustive_partition(const HermitianMatrix& m, double target, std::size_t max_groups) {
  const auto n = static_cast<std::size_t>(m.rows());
  for (std::size_t i = 0; i < n; ++i) {
    if (m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() < target) {
      // No partition meets the target; fall back to singletons.
      Partition p;
      for (std::size_t k = 0; k < n; ++k) p.groups.push_back({k});
      p.feasible = false;
      return p;
    }
  }
  Partition p;
  p.groups = ExhaustiveSearch(m, target).run();
  p.feasible = p.groups.size() <= max_groups;
  return p;
}

}  // namespace

HermitianMatrix h_transform(const Gramian& g) { return h_transform(g.matrix()); }

HermitianMatrix h_transform(const HermitianMatrix& g) {
  if (g.rows() != g.cols() || g.rows() == 0) throw std::invalid_argument("h_transform needs a nonempty square matrix");
  if (hermitian_defect(g) > 1e-12) throw std::invalid_argument("h_transform needs a Hermitian matrix");
  const auto n = g.rows();
  if (!(min_eigenvalue(g) > kGramianTolPerRow * static_cast<double>(n)))
    throw SingularGramianError("h_transform needs an invertible Gramian");
  const HermitianMatrix shifted = g + HermitianMatrix::Identity(n, n);
  Eigen::LLT<HermitianMatrix> llt(shifted);
  HermitianMatrix h = llt.solve(g);
  h = 0.5 * (h + h.adjoint());
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = h(i, i).real();
  return h;
}

Gramian remark_counterexample(std::size_t n) {
  if (n < 2) throw std::invalid_argument("remark_counterexample needs n >= 2");
  const auto k = static_cast<Eigen::Index>(n);
  const double inv = 1.0 / static_cast<double>(n);
  HermitianMatrix g = HermitianMatrix::Constant(k, k, complex(-inv, 0.0));
  for (Eigen::Index i = 0; i < k; ++i) g(i, i) = 1.0;
  return Gramian(std::move(g));
}

std::vector<double> group_bounds(const HermitianMatrix& m, const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<double> out;
  out.reserve(groups.size());
  for (const auto& grp : groups) out.push_back(subset_min_eigenvalue(m, grp));
  return out;
}

Partition partition_search(const HermitianMatrix& m, double target, std::size_t max_groups,
                           PartitionStrategy strategy) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("partition_search needs a nonempty square matrix");
  if (!(target > 0.0)) throw std::invalid_argument("partition target must be positive");
  if (max_groups < 1) throw std::invalid_argument("max_groups must be >= 1");
  const auto n = static_cast<std::size_t>(m.rows());
  if (strategy == PartitionStrategy::automatic)
    strategy = n <= kExhaustiveLimit ? PartitionStrategy::exhaustive : PartitionStrategy::greedy;
  if (strategy == PartitionStrategy::exhaustive && n > kExhaustiveLimit)
    throw std::invalid_argument("exhaustive partition search is limited to 14 indices");

  Partition p = strategy == PartitionStrategy::greedy ? greedy_partition(m, target, max_groups)
                                                      : exhaustive_partition(m, target, max_groups);
  p.group_bounds = group_bounds(m, p.groups);
  return p;
}

HPartitionResult h_partition_pipeline(const Gramian& g, double target, std::size_t max_groups,
                                      PartitionStrategy strategy) {
  const HermitianMatrix h = h_transform(g);
  if (max_groups == 0) max_groups = static_cast<std::size_t>(g.size());
  HPartitionResult out;
  out.partition = partition_search(h, target, max_groups, strategy);
  out.h_bounds = out.partition.group_bounds;
  out.partition.group_bounds = group_bounds(g.matrix(), out.partition.groups);
  return out;
}

}  // namespace gramsep
