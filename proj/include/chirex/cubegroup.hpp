#pragma once

// The symmetry group of the n-cube as pairs (perm, signs) with the product
// law (p1, y1) * (p2, y2) = (p1 then p2, y2 ^ p2(y1)).  Flags of a single
// facet are identified with group elements; the monodromy generators
// r_0..r_(n-1) act by left multiplication and facet automorphisms by right
// multiplication.

#include "chirex/toroid.hpp"

namespace chirex {

struct CubeElem {
  Perm perm;
  uint32_t signs = 0;
  bool operator==(const CubeElem&) const = default;
};

CubeElem cube_identity(int n);
CubeElem cube_mul(const CubeElem& a, const CubeElem& b);
CubeElem cube_inv(const CubeElem& e);

// Drop the translation class: the in-facet part of a flag label.
CubeElem flag_to_elem(const Flag& f);
// Reattach a translation class (must already be canonical).
Flag elem_to_flag(const CubeElem& e, Vec trans);

// The unique facet automorphism carrying `root` to r_i(root) within its cube,
// i valid for 0 <= i <= n-1: elem(root)^(-1) * elem(r_i root).
CubeElem facet_automorphism(const ToroidContext& ctx, const Flag& root, int i);

// Apply a facet automorphism (right multiplication on the in-facet label,
// translation class unchanged).
Flag apply_facet_automorphism(const Flag& f, const CubeElem& g);

}  // namespace chirex
