#pragma once

// Generic machinery for permutation actions given as callables on a dense
// point range [0, size): orbit computation, full cycle decomposition with
// exact order via big integers, a deterministic Schreier-Sims for explicit
// small-degree permutations, and a synchronized-orbit search for an
// equivariant bijection between two pointed actions.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace chirex {

using BigInt = boost::multiprecision::cpp_int;
using PointFn = std::function<uint64_t(uint64_t)>;

// A bijection of the point range together with its inverse.
struct PointMap {
  PointFn fwd;
  PointFn inv;
};

struct OrbitResult {
  std::vector<uint64_t> points;  // in BFS discovery order
  bool truncated = false;        // hit the cap before closing
};

// Orbit of `start` under the given bijections (inverses included in the
// sweep, so the result is the orbit of the generated group).
OrbitResult orbit(const std::vector<PointMap>& gens, uint64_t start,
                  std::optional<uint64_t> cap = std::nullopt);

struct CycleReport {
  std::map<uint64_t, uint64_t> histogram;  // cycle length -> count
  uint64_t max_length = 0;
  BigInt order = 1;                        // lcm of cycle lengths
};

// Full cycle decomposition of a bijection on [0, size).  The optional
// callback receives every point along with the id of the cycle it belongs
// to; cycles are visited in order of their smallest element and points in
// cycle order starting at that element.
CycleReport cycle_decomposition(const PointFn& g, uint64_t size,
                                const std::function<void(uint64_t point, uint64_t cycle)>&
                                    on_element = nullptr);

// Length of the forward orbit of a single point (cycle length through it).
uint64_t cycle_length_through(const PointFn& g, uint64_t start,
                              std::optional<uint64_t> cap = std::nullopt);

// Deterministic Schreier-Sims for explicit permutations of small degree.
// Intended for degrees up to ~1e5 with moderate base length.
class PermGroup {
 public:
  PermGroup(uint32_t degree, std::vector<std::vector<uint32_t>> generators);
  BigInt order() const;
  bool contains(const std::vector<uint32_t>& perm) const;
  uint32_t degree() const { return degree_; }

 private:
  uint32_t degree_;
  std::shared_ptr<void> impl_;  // stabilizer chain
};

// Decide whether the actions generated by gens_a on [0, size) and gens_b on
// [0, size) admit a bijection matching a -> b and commuting with every
// generator (gens_a[i] corresponds to gens_b[i]).  Both actions must be
// transitive from the given points for a positive answer.
bool exists_equivariant_bijection(const std::vector<PointFn>& gens_a,
                                  const std::vector<PointFn>& gens_b, uint64_t size,
                                  uint64_t a, uint64_t b);

// Partition [0, size) into `chunks` contiguous ranges and return the
// smallest index violating `ok`, or size when none.  Deterministic in the
// chunk count: the minimum over per-chunk first violations.
uint64_t first_violation(uint64_t size, int threads,
                         const std::function<bool(uint64_t)>& ok);

}  // namespace chirex
