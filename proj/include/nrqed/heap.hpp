#pragma once

namespace nrqed {

/// Keeps freed field buffers in the heap instead of returning them to the
/// OS after every FFT temporary. Call once at program start.
void tune_heap();

}  // namespace nrqed
