#include "rumorsis/parallel.hpp"

namespace rumorsis {

#ifdef RUMORSIS_HAVE_OPENMP
namespace {
const int kDefaultJobs = omp_get_max_threads();
}

void set_jobs(int jobs) { omp_set_num_threads(jobs > 0 ? jobs : kDefaultJobs); }
int max_jobs() { return omp_get_max_threads(); }
#else
void set_jobs(int) {}
int max_jobs() { return 1; }
#endif

} // namespace rumorsis
