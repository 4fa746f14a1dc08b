#include "ccview/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccv {

int parallel_width() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace ccv
