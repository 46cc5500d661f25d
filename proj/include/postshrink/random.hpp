#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>

namespace postshrink {

// All simulation randomness goes through this engine. Streams are
// reproducible within one build; nothing promises cross-platform equality
// because std::normal_distribution is implementation-defined.
using Engine = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a base seed and a list of
/// integer coordinates (case, p, replication, ...). Order of coordinates
/// matters, order of calls does not.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords);

/// Runs fn(i) for i in [0, count) on up to hardware_concurrency threads.
/// Callers write results into per-index slots and reduce afterwards.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace postshrink
