#pragma once

#ifdef FAMAPF_HAVE_OPENMP
#include <omp.h>
#else
inline int omp_get_thread_num() { return 0; }
inline int omp_get_max_threads() { return 1; }
inline void omp_set_num_threads(int) {}
#endif

namespace famapf {

// Kernels that have a data-parallel loop take one of these. `serial` is the
// reference path kept for equivalence tests; `parallel` runs the same loop
// body under OpenMP and must produce identical output.
enum class Execution { serial, parallel };

}  // namespace famapf
