#pragma once

#include <cstddef>
#include <functional>

namespace glassmix {

/// Worker count used by parallel_for; 0 restores hardware concurrency.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs body(i) for i in [0, count) on the worker pool. Work items must write
/// only to their own slots; callers fold results in index order afterwards.
/// The first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace glassmix
