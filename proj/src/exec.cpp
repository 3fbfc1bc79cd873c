#include "qfoundry/exec.hpp"

#include <omp.h>

namespace qfoundry {

void set_jobs(int jobs) {
  if (jobs > 0) omp_set_num_threads(jobs);
}

}  // namespace qfoundry
