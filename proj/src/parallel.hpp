#pragma once

#include <cstdint>
#include <exception>
#include <mutex>

#include "morpho/exec.hpp"

namespace morpho::detail {

/// Runs body(i) for i in [0, count). With Exec::Parallel the iterations are
/// spread over OpenMP threads; the first exception thrown is rethrown here.
template <class Body>
void parallel_for(std::int64_t count, Exec exec, Body&& body) {
  if (exec == Exec::Serial) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(guard);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace morpho::detail
