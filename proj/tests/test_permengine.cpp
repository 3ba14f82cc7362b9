#include <algorithm>
#include <numeric>

#include "chirex/permengine.hpp"
#include "doctest.h"

using namespace chirex;

namespace {

PointMap map_of(std::vector<uint64_t> fwd) {
  std::vector<uint64_t> inv(fwd.size());
  for (uint64_t i = 0; i < fwd.size(); ++i) inv[fwd[i]] = i;
  return PointMap{[fwd](uint64_t x) { return fwd[x]; },
                  [inv](uint64_t x) { return inv[x]; }};
}

}  // namespace

TEST_CASE("orbit computation") {
  // Two 3-cycles sharing a point: orbit of 0 is everything, orbit of 6 is {6}.
  auto g1 = map_of({1, 2, 0, 3, 4, 5, 6});
  auto g2 = map_of({0, 1, 3, 4, 2, 5, 6});
  auto o = orbit({g1, g2}, 0);
  CHECK(o.points.size() == 5);
  CHECK_FALSE(o.truncated);
  CHECK(o.points[0] == 0);
  CHECK(orbit({g1, g2}, 6).points == std::vector<uint64_t>{6});
  CHECK(orbit({g1, g2}, 5).points == std::vector<uint64_t>{5});
  auto capped = orbit({g1, g2}, 0, 3);
  CHECK(capped.truncated);
  CHECK(capped.points.size() < 5);
  // Inverses are part of the sweep: a forward-only reachable set differs.
  auto shift = map_of({1, 2, 3, 4, 5, 6, 0});
  CHECK(orbit({shift}, 4).points.size() == 7);
}

TEST_CASE("cycle decomposition") {
  // (0 1)(2 3 4)(5): order 6, max length 3.
  auto g = map_of({1, 0, 3, 4, 2, 5});
  std::vector<std::pair<uint64_t, uint64_t>> visits;
  auto rep = cycle_decomposition(
      g.fwd, 6, [&](uint64_t pt, uint64_t cyc) { visits.emplace_back(pt, cyc); });
  CHECK(rep.order == 6);
  CHECK(rep.max_length == 3);
  CHECK(rep.histogram == std::map<uint64_t, uint64_t>{{1, 1}, {2, 1}, {3, 1}});
  CHECK(visits == std::vector<std::pair<uint64_t, uint64_t>>{
                      {0, 0}, {1, 0}, {2, 1}, {3, 1}, {4, 1}, {5, 2}});
  CHECK(cycle_length_through(g.fwd, 2) == 3);
  CHECK(cycle_length_through(g.fwd, 5) == 1);
  CHECK_THROWS(cycle_length_through(g.fwd, 2, 2));  // cap hit
}

TEST_CASE("cycle order uses exact lcm") {
  // Disjoint cycles of prime lengths 101 and 103 on 204 points.
  std::vector<uint64_t> img(204);
  for (uint64_t i = 0; i < 101; ++i) img[i] = (i + 1) % 101;
  for (uint64_t i = 0; i < 103; ++i) img[101 + i] = 101 + (i + 1) % 103;
  auto rep = cycle_decomposition([&](uint64_t x) { return img[x]; }, 204);
  CHECK(rep.order == BigInt(101) * 103);
  CHECK(rep.max_length == 103);
}

TEST_CASE("schreier-sims order and membership") {
  // S_4 from a transposition and a 4-cycle.
  PermGroup s4(4, {{1, 0, 2, 3}, {1, 2, 3, 0}});
  CHECK(s4.order() == 24);
  CHECK(s4.contains({0, 1, 2, 3}));
  CHECK(s4.contains({3, 2, 1, 0}));

  // Cyclic group of order 6 inside S_6.
  PermGroup c6(6, {{1, 2, 3, 4, 5, 0}});
  CHECK(c6.order() == 6);
  CHECK(c6.contains({2, 3, 4, 5, 0, 1}));
  CHECK_FALSE(c6.contains({1, 0, 2, 3, 4, 5}));

  // Klein four-group: membership separates it from the dihedral closure.
  PermGroup v4(4, {{1, 0, 3, 2}, {2, 3, 0, 1}});
  CHECK(v4.order() == 4);
  CHECK(v4.contains({3, 2, 1, 0}));
  CHECK_FALSE(v4.contains({1, 2, 3, 0}));

  PermGroup trivial(5, {});
  CHECK(trivial.order() == 1);
  CHECK(trivial.contains({0, 1, 2, 3, 4}));
  CHECK_FALSE(trivial.contains({0, 1, 2, 4, 3}));
}

TEST_CASE("equivariant bijection search") {
  // Same action twice, different base points in one orbit: succeeds.
  auto rot = [](uint64_t x) { return (x + 1) % 4; };
  CHECK(exists_equivariant_bijection({rot}, {rot}, 4, 0, 2));
  // A 4-cycle is not equivalent to a product of two 2-cycles.
  auto dbl = [](uint64_t x) { return x ^ 1; };
  CHECK_FALSE(exists_equivariant_bijection({rot}, {dbl}, 4, 0, 0));
  // Conjugate actions are equivalent: relabel the 4-cycle.
  std::vector<uint64_t> conj = {2, 0, 3, 1};  // c: i -> conj[i]
  std::vector<uint64_t> conj_inv(4);
  for (uint64_t i = 0; i < 4; ++i) conj_inv[conj[i]] = i;
  auto rot_conj = [=](uint64_t x) { return conj[(conj_inv[x] + 1) % 4]; };
  CHECK(exists_equivariant_bijection({rot}, {rot_conj}, 4, 0, conj[0]));
  // Mismatched pairing of two generators fails even though each matches alone.
  auto id = [](uint64_t x) { return x; };
  CHECK_FALSE(exists_equivariant_bijection({rot, id}, {id, rot}, 4, 0, 0));
}

TEST_CASE("first violation scan") {
  for (int threads : {1, 3, 8}) {
    CAPTURE(threads);
    CHECK(first_violation(10000, threads, [](uint64_t x) { return x != 7321; }) ==
          7321);
    CHECK(first_violation(10000, threads,
                          [](uint64_t x) { return x != 17 && x != 9999; }) == 17);
    CHECK(first_violation(10000, threads, [](uint64_t) { return true; }) == 10000);
    CHECK(first_violation(0, threads, [](uint64_t) { return false; }) == 0);
  }
}
