#include "isocurv/parallel.hpp"

#include <cstdlib>
#include <string>

namespace isocurv {

std::size_t worker_count() {
  std::size_t count = std::max(1U, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("ISOCURV_THREADS")) {
    try {
      const long parsed = std::stol(cap);
      if (parsed > 0) count = std::min(count, static_cast<std::size_t>(parsed));
    } catch (const std::exception&) {
      // Malformed values are ignored.
    }
  }
  return count;
}

}  // namespace isocurv
