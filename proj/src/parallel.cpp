#include "carnot/parallel.hpp"

#include <cstdlib>
#include <string>

namespace carnot {

int thread_count() {
  if (const char* env = std::getenv("CARNOT_KIT_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace carnot
