#include "carla/nn/core.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace carla::nn {

namespace {
int g_threads = 1;
}

void set_num_threads(int n) {
    if (n < 1) n = 1;
    g_threads = n;
#ifdef _OPENMP
    omp_set_num_threads(n);
#endif
    Eigen::setNbThreads(n);
}

int num_threads() { return g_threads; }

} // namespace carla::nn
