#pragma once

// Sweeps over independent inputs. Parallel variants use OpenMP; the serial
// variants are the reference the tests compare against.

#include "brstkit/operator.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace brstkit {

enum class Exec { Serial, Parallel };

/// Thread count used by Exec::Parallel; 0 leaves the OpenMP default.
void set_thread_count(int n);
int thread_count();
/// Default execution mode for the verifiers; Parallel unless changed.
void set_default_exec(Exec e);
Exec default_exec();

/// Calls fn(i) for i in [0, n). Exceptions thrown inside workers are rethrown (the first one).
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn, Exec exec = default_exec());

/// op applied to each monomial; results in input order.
std::vector<TensorState> apply_all(const LazyOperator& op, const std::vector<TensorMono>& states,
                                   Exec exec = default_exec());

}  // namespace brstkit
