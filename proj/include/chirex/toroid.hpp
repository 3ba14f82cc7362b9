#pragma once

// Flags of the cubic regular (n+1)-toroid {4,3^(n-2),4} / Lambda, labelled by
// triples (perm, signs, translation class), together with the monodromy
// generators r_0..r_n (left action) and the automorphism action (right
// action).  White flags are enumerated in lexicographic label order and given
// dense indices for permutation-level work.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "chirex/lattice.hpp"

namespace chirex {

// Permutation of {0,..,n-1} in one-line notation: img[i] is the image of i.
// Products apply the left factor first: (p.then(q))(i) == q(p(i)).
struct Perm {
  std::vector<uint8_t> img;

  static Perm identity(int n);
  int size() const { return static_cast<int>(img.size()); }
  int operator()(int i) const { return img[i]; }
  Perm then(const Perm& q) const;
  Perm inverse() const;
  bool is_even() const;
  bool operator==(const Perm&) const = default;
};

// A flag label (perm, signs, trans): signs bit i set means coordinate i
// carries a minus sign; trans is the canonical representative of its class.
struct Flag {
  Perm perm;
  uint32_t signs = 0;
  Vec trans;
  bool operator==(const Flag&) const = default;
};

// Permute a Vec: result[p(i)] = v[i].
Vec perm_apply_vec(const Perm& p, const Vec& v);
// Permute a sign mask: result bit p(i) = bit i of mask.
uint32_t perm_apply_mask(const Perm& p, uint32_t mask, int n);
// Apply signs to a vector: negate coordinate i where bit i of mask is set.
Vec mask_apply_vec(uint32_t mask, const Vec& v);

class ToroidContext {
 public:
  explicit ToroidContext(const LatticeSpec& spec);

  const LatticeSpec& spec() const { return spec_; }
  int n() const { return spec_.n; }

  // --- monodromy (left) action -------------------------------------------
  // r_0 flips the sign at position perm(0); r_i (1 <= i <= n-1) pre-composes
  // the permutation with the transposition (i-1 i); r_n flips the sign at
  // perm(n-1) and shifts the translation class by -x*e along that axis.
  Flag monodromy_apply(int i, const Flag& f) const;

  // --- automorphism (right) action ---------------------------------------
  // (perm, x, t) * (tau, y, u) = (perm*tau, y ^ tau(x), y(tau(t)) + u).
  Flag aut_apply(const Flag& f, const Perm& tau, uint32_t ymask, const Vec& u) const;
  // Pure-translation automorphism by u.
  Flag translate(const Flag& f, const Vec& u) const;

  // --- flag predicates and invariants --------------------------------------
  static bool is_white(const Flag& f);  // sgn(perm) * (-1)^(#minus signs) == +1
  static Flag hat(Flag f);              // negate every sign (antipodal in facet)
  // Diagonal-shift bijections on flags: h^j and its conjugate by r_0.
  Flag h_apply(const Flag& f, int j = 1) const;
  Flag hbar_apply(const Flag& f, int j = 1) const;
  // The cube the flag lives in (its translation class) and its base vertex.
  const Vec& facet_of(const Flag& f) const { return f.trans; }
  Vec vertex_of(const Flag& f) const;
  // True when the flag's edge direction at the base vertex is the first axis,
  // i.e. perm(n-1) == 0.
  bool is_perpendicular(const Flag& f) const { return f.perm(n() - 1) == 0; }

  // --- dense indexing -------------------------------------------------------
  int64_t facet_count() const { return static_cast<int64_t>(facets_.size()); }
  const Vec& facet_rep(int32_t idx) const { return facets_[idx]; }
  int32_t facet_index(const Vec& canonical_rep) const;

  // All flags, indexed lexicographically by (perm, signs with + < -, trans).
  int64_t flag_count() const { return flag_count_; }
  int64_t flag_code(const Flag& f) const;
  Flag flag_from_code(int64_t code) const;

  // White flags only, in the same lexicographic order.
  int64_t white_count() const { return static_cast<int64_t>(white_codes_.size()); }
  int32_t white_index(const Flag& f) const;          // -1 if not white
  int32_t white_index_of_code(int64_t code) const { return white_of_code_[code]; }
  int64_t white_code(int32_t w) const { return white_codes_[w]; }
  Flag white_flag(int32_t w) const { return flag_from_code(white_codes_[w]); }

  Flag base_flag() const;  // identity perm, all plus, zero class

  // Orders (p_1,..,p_n) of the products r_(i-1) r_i acting on all flags.
  const std::vector<int>& schlafli() const;

 private:
  LatticeSpec spec_;
  std::vector<Vec> facets_;                       // canonical reps, lex sorted
  std::unordered_map<uint64_t, int32_t> facet_lookup_;
  std::vector<Perm> perms_;                       // all n! perms, lex order
  std::unordered_map<uint32_t, uint32_t> perm_rank_;
  int64_t flag_count_ = 0;
  std::vector<int32_t> white_of_code_;
  std::vector<int64_t> white_codes_;
  mutable std::vector<int> schlafli_;

  uint64_t encode_facet(const Vec& rep) const;
  uint32_t pack_perm(const Perm& p) const;
};

}  // namespace chirex
