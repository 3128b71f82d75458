#include "smdpde/parallel.hpp"

#include <omp.h>

namespace smdpde {

int default_thread_count() { return omp_get_max_threads(); }

}  // namespace smdpde
