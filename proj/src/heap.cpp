#include "nrqed/heap.hpp"

#include <malloc.h>

namespace nrqed {

void tune_heap() {
  mallopt(M_MMAP_THRESHOLD, 32 << 20);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
}

}  // namespace nrqed
