#include "coverage/parallel.hpp"

#include <atomic>

namespace coverage {

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_thread_count(unsigned n) noexcept { g_threads.store(n == 0 ? 1 : n); }

unsigned thread_count() noexcept { return g_threads.load(); }

}  // namespace coverage
