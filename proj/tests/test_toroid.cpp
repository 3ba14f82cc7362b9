#include <random>

#include "chirex/toroid.hpp"
#include "doctest.h"

using namespace chirex;

namespace {

Perm perm_of(std::initializer_list<uint8_t> img) {
  Perm p;
  p.img = img;
  return p;
}

ToroidContext& square_ctx() {
  static ToroidContext ctx(LatticeSpec::make(2, 13, 1));
  return ctx;
}

}  // namespace

TEST_CASE("permutation basics") {
  Perm id = Perm::identity(3);
  Perm t01 = perm_of({1, 0, 2});
  CHECK(t01.then(t01) == id);
  CHECK(t01.inverse() == t01);
  CHECK_FALSE(t01.is_even());
  Perm cyc = perm_of({1, 2, 0});
  CHECK(cyc.is_even());
  CHECK(cyc.then(cyc.inverse()) == id);
  // Products apply the left factor first.
  CHECK(t01.then(cyc) == perm_of({2, 1, 0}));
  CHECK(perm_apply_vec(cyc, {10, 20, 30}) == Vec{30, 10, 20});
  CHECK(perm_apply_mask(cyc, 0b001, 3) == 0b010);
  CHECK(mask_apply_vec(0b101, {1, 2, 3}) == Vec{-1, 2, -3});
}

TEST_CASE("monodromy generators on labels") {
  auto& ctx = square_ctx();
  Flag f0 = ctx.base_flag();
  CHECK(ctx.flag_code(f0) == 0);
  CHECK(ctx.white_index(f0) == 0);

  Flag r0 = ctx.monodromy_apply(0, f0);
  CHECK(r0.perm == f0.perm);
  CHECK(r0.signs == 0b01);
  CHECK(r0.trans == Vec{0, 0});

  Flag r1 = ctx.monodromy_apply(1, f0);
  CHECK(r1.perm == perm_of({1, 0}));
  CHECK(r1.signs == 0);

  Flag r2 = ctx.monodromy_apply(2, f0);
  CHECK(r2.perm == f0.perm);
  CHECK(r2.signs == 0b10);
  CHECK(r2.trans == Vec{0, 12});

  // r_0 r_1 applied to the base flag: transpose, then flip the sign the
  // transposed permutation puts first.
  Flag x = ctx.monodromy_apply(0, r1);
  CHECK(x.perm == perm_of({1, 0}));
  CHECK(x.signs == 0b10);
  CHECK(x.trans == Vec{0, 0});

  for (int i = 0; i <= 2; ++i) {
    CHECK_FALSE(ToroidContext::is_white(ctx.monodromy_apply(i, f0)));
    CHECK(ctx.monodromy_apply(i, ctx.monodromy_apply(i, f0)) == f0);
  }
}

TEST_CASE("white flag enumeration") {
  CHECK(square_ctx().white_count() == 676);
  CHECK(square_ctx().flag_count() == 1352);
  ToroidContext fcc(LatticeSpec::make(2, 13, 2));
  CHECK(fcc.white_count() == 1352);
  // Indexing round-trips and preserves lexicographic order.
  auto& ctx = square_ctx();
  for (int32_t w = 0; w + 1 < ctx.white_count(); ++w) {
    CHECK(ctx.white_index(ctx.white_flag(w)) == w);
    CHECK(ctx.white_code(w) < ctx.white_code(w + 1));
  }
}

TEST_CASE("diagonal shift and its mirror") {
  auto& ctx = square_ctx();
  Flag f0 = ctx.base_flag();
  Flag h1 = ctx.h_apply(f0, 1);
  CHECK(h1.perm == f0.perm);
  CHECK(h1.signs == 0);
  CHECK(h1.trans == Vec{1, 2});
  CHECK(ctx.h_apply(f0, 2).trans == Vec{2, 4});
  CHECK(ctx.h_apply(f0, -1).trans == Vec{12, 11});

  // The closed form of powers agrees with iteration, and the mirror is the
  // 0-conjugate of the shift, on every flag.
  for (int64_t code = 0; code < ctx.flag_count(); ++code) {
    Flag f = ctx.flag_from_code(code);
    CHECK(ctx.h_apply(f, 2) == ctx.h_apply(ctx.h_apply(f, 1), 1));
    CHECK(ctx.h_apply(ctx.h_apply(f, -3), 3) == f);
    Flag mirror = ctx.monodromy_apply(0, ctx.h_apply(ctx.monodromy_apply(0, f), 1));
    CHECK(ctx.hbar_apply(f, 1) == mirror);
    CHECK(ctx.hbar_apply(ctx.hbar_apply(f, 2), -2) == f);
    // Negating every sign swaps the shift direction (facet-wise it is the
    // antipodal map of the cube).
    CHECK(ctx.h_apply(ToroidContext::hat(f), 1).trans ==
          ctx.h_apply(f, -1).trans);
  }
}

TEST_CASE("vertices and perpendicular flags") {
  auto& ctx = square_ctx();
  Flag f = ctx.base_flag();
  CHECK(ctx.vertex_of(f) == Vec{0, 0});
  f.signs = 0b01;
  CHECK(ctx.vertex_of(f) == Vec{1, 0});
  CHECK_FALSE(ctx.is_perpendicular(ctx.base_flag()));
  Flag g{perm_of({1, 0}), 0b01, {0, 0}};
  CHECK(ctx.is_perpendicular(g));
  CHECK(ToroidContext::is_white(g));
}

TEST_CASE("schlafli symbols") {
  CHECK(square_ctx().schlafli() == std::vector<int>{4, 4});
  ToroidContext cubic3(LatticeSpec::make(3, 3, 1, true));
  CHECK(cubic3.schlafli() == std::vector<int>{4, 3, 4});
  ToroidContext cubic4(LatticeSpec::make(4, 3, 1, true));
  CHECK(cubic4.schlafli() == std::vector<int>{4, 3, 3, 4});
}

TEST_CASE("automorphisms commute with monodromy") {
  auto& ctx = square_ctx();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int64_t> code_dist(0, ctx.flag_count() - 1);
  std::uniform_int_distribution<int> bit(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    Flag f = ctx.flag_from_code(code_dist(rng));
    Perm tau = bit(rng) % 2 ? perm_of({1, 0}) : Perm::identity(2);
    uint32_t y = static_cast<uint32_t>(bit(rng));
    Vec u{static_cast<int32_t>(code_dist(rng) % 13), static_cast<int32_t>(bit(rng))};
    for (int i = 0; i <= 2; ++i) {
      Flag lhs = ctx.aut_apply(ctx.monodromy_apply(i, f), tau, y, u);
      Flag rhs = ctx.monodromy_apply(i, ctx.aut_apply(f, tau, y, u));
      CHECK(lhs == rhs);
    }
    // Pure translations move only the translation class.
    Flag t = ctx.translate(f, u);
    CHECK(t.perm == f.perm);
    CHECK(t.signs == f.signs);
  }
}

TEST_CASE("antipodal flag and bipartition") {
  auto& ctx = square_ctx();
  for (int32_t w = 0; w < 50; ++w) {
    Flag f = ctx.white_flag(w);
    CHECK(ToroidContext::is_white(f));
    // In even dimension negating all signs preserves the class.
    CHECK(ToroidContext::is_white(ToroidContext::hat(f)));
  }
}
