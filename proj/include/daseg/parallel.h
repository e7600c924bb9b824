#ifndef DASEG_PARALLEL_H_
#define DASEG_PARALLEL_H_

#include <functional>

namespace daseg {

// Selects between the OpenMP kernel and the serial reference path of the
// per-dialog operations. Both produce identical results.
enum class Execution { kSerial, kParallel };

// Thread count for parallel kernels: DASEG_THREADS if set to a positive
// integer, otherwise the OpenMP default.
int MaxThreads();

// Runs body(i) for i in [0, n). Iterations must write disjoint outputs.
void ParallelFor(int n, const std::function<void(int)>& body,
                 Execution execution = Execution::kParallel);

}  // namespace daseg

#endif  // DASEG_PARALLEL_H_
