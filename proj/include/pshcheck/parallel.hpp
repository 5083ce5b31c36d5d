#pragma once

#include <cstddef>
#include <functional>

namespace psh {

/// Number of worker threads used by the samplers. 0 restores the default
/// (PSH_THREADS from the environment, else hardware concurrency).
void set_worker_count(std::size_t workers);
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Work items must write to disjoint,
/// index-addressed outputs; any exception is rethrown on the caller after all
/// workers joined (the one from the lowest failing index wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace psh
