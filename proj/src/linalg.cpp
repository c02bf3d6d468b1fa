#include "gramsep/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace gramsep {

Eigen::VectorXd hermitian_eigenvalues(const HermitianMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver did not converge");
  return solver.eigenvalues();
}

double min_eigenvalue(const HermitianMatrix& m) { return hermitian_eigenvalues(m)(0); }

double max_eigenvalue(const HermitianMatrix& m) {
  const auto ev = hermitian_eigenvalues(m);
  return ev(ev.size() - 1);
}

HermitianMatrix principal_submatrix(const HermitianMatrix& m, std::span<const std::size_t> idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  HermitianMatrix sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      sub(i, j) = m(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
  return sub;
}

double hermitian_defect(const HermitianMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), std::max<std::size_t>(n, 1));
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          // Keep the failure of the smallest index so reruns report the same error.
          std::lock_guard lock(failure_mutex);
          if (i < failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gramsep
