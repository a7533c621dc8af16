#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace padiclz::cli {

// Worker count from PADIC_LZERO_THREADS (default: hardware concurrency).
std::size_t worker_count();

// Runs every job; sub-checks of all jobs share one worker pool. Results do not
// depend on the number of workers or on scheduling.
std::vector<JobReport> run_jobs(const RunConfig& rc, std::size_t workers);

}  // namespace padiclz::cli
