#include "chirex/cubegroup.hpp"

namespace chirex {

CubeElem cube_identity(int n) { return CubeElem{Perm::identity(n), 0}; }

CubeElem cube_mul(const CubeElem& a, const CubeElem& b) {
  CubeElem out;
  out.perm = a.perm.then(b.perm);
  out.signs = b.signs ^ perm_apply_mask(b.perm, a.signs, a.perm.size());
  return out;
}

CubeElem cube_inv(const CubeElem& e) {
  CubeElem out;
  out.perm = e.perm.inverse();
  out.signs = perm_apply_mask(out.perm, e.signs, e.perm.size());
  return out;
}

CubeElem flag_to_elem(const Flag& f) { return CubeElem{f.perm, f.signs}; }

Flag elem_to_flag(const CubeElem& e, Vec trans) {
  return Flag{e.perm, e.signs, std::move(trans)};
}

CubeElem facet_automorphism(const ToroidContext& ctx, const Flag& root, int i) {
  if (i < 0 || i >= ctx.n())
    throw std::invalid_argument("facet automorphisms exist only for r_0..r_(n-1)");
  Flag moved = ctx.monodromy_apply(i, root);
  return cube_mul(cube_inv(flag_to_elem(root)), flag_to_elem(moved));
}

Flag apply_facet_automorphism(const Flag& f, const CubeElem& g) {
  return elem_to_flag(cube_mul(flag_to_elem(f), g), f.trans);
}

}  // namespace chirex
