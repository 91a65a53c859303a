#include "graphdim/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace graphdim {

int resolve_workers(int requested) {
  int workers = requested > 0 ? requested : omp_get_max_threads();
  if (const char* env = std::getenv("GRAPHDIM_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) workers = std::min(workers, cap);
    } catch (...) {
      // unparsable values are ignored
    }
  }
  return std::max(workers, 1);
}

}  // namespace graphdim
