#include "brstkit/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>

#include <omp.h>

namespace brstkit {

namespace {
std::atomic<int> g_threads{0};
std::atomic<Exec> g_exec{Exec::Parallel};
}  // namespace

void set_thread_count(int n) { g_threads = n < 0 ? 0 : n; }
int thread_count() { return g_threads > 0 ? g_threads.load() : omp_get_max_threads(); }
void set_default_exec(Exec e) { g_exec = e; }
Exec default_exec() { return g_exec; }

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn, Exec exec) {
    if (exec == Exec::Serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr first;
    std::mutex mu;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(mu);
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
}

std::vector<TensorState> apply_all(const LazyOperator& op, const std::vector<TensorMono>& states, Exec exec) {
    std::vector<TensorState> out(states.size());
    for_each_index(states.size(), [&](std::size_t i) { out[i] = op.apply(states[i]); }, exec);
    return out;
}

}  // namespace brstkit
