#pragma once

#include <cstddef>
#include <functional>

namespace mqslink {

/// Number of worker threads used by parallel_for (>= 1). Defaults to 1.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Calls body(i) for every i in [0, n). Indices are handed out in contiguous
/// chunks; callers that reduce must store per-index results and combine them
/// in index order so the result does not depend on the thread count.
/// Nested calls from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Neumaier-compensated sum, evaluated in the given order.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

}  // namespace mqslink
