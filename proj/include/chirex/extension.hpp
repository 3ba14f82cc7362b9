#pragma once

// The extension construction: a permutation domain of (white flag, level)
// pairs with levels in Z_3p, a deterministic root table assigning each
// (facet, level-class) pair a distinguished flag, the in-facet involutions
// rho^l built from the roots, and the generators xi_1..xi_(n+1),
// varsigma_1..varsigma_(n+1) together with the twist words mu and mubar.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "chirex/cubegroup.hpp"
#include "chirex/toroid.hpp"

namespace chirex {

struct ExtensionSpec {
  LatticeSpec toroid;
  uint64_t p = 0;  // levels live in Z_{3p}; p >= 1
};

// Levels fall in three classes that determine which root a facet uses:
// exactly 1; congruent to 1 mod 3 but not equal to 1; everything else.
enum class LevelClass : uint8_t { ExactlyOne = 0, OneMod3 = 1, Other = 2 };

struct RootEntry {
  int32_t root_white = -1;  // white-flag index of the root
  uint8_t rho_index = 0;    // which of r_0 / r_1 defines the involution
  uint8_t case_id = 4;      // provenance: 1 special, 2 diagonal, 3 hole, 4 generic
};

struct RootTable {
  // Special flags Phi_i = h^i(Phi_0) and their facets F_i, i in [-3, 3]
  // (stored at index i + 3).
  std::array<int32_t, 7> special_facet{};
  std::array<int32_t, 7> special_white{};
  Vec hole_vertex;                   // X_H, the shifted base vertex
  std::vector<int32_t> hole_facets;  // the 2^n facets around it, sorted
  std::vector<RootEntry> entries;    // indexed facet*3 + level-class
  std::vector<CubeElem> multipliers; // right multiplier realizing rho, same index

  // Audit counters: facets reachable as more than one special/diagonal
  // candidate, and how many of those yield the same involution.
  uint64_t multi_candidate_facets = 0;
  uint64_t multi_candidate_agreeing = 0;
  uint64_t case_counts[5] = {0, 0, 0, 0, 0};  // by case_id (index 0 unused)

  const RootEntry& entry(int32_t facet, LevelClass cls) const {
    return entries[facet * 3 + static_cast<int>(cls)];
  }
};

// A word over the extension generators, in application order: letter +i
// applies xi_i, letter -i applies its inverse (i = n+1 is an involution and
// may appear with either sign).
using Word = std::vector<int>;

class Extension {
 public:
  Extension(const ToroidContext& ctx, const ExtensionSpec& spec);

  const ToroidContext& ctx() const { return *ctx_; }
  const ExtensionSpec& spec() const { return spec_; }
  const RootTable& roots() const { return roots_; }

  uint64_t levels() const { return 3 * spec_.p; }
  uint64_t domain_size() const { return static_cast<uint64_t>(ctx_->white_count()) * levels(); }
  uint64_t encode(int32_t white, uint64_t level) const { return white * levels() + level; }
  int32_t point_flag(uint64_t pt) const { return static_cast<int32_t>(pt / levels()); }
  uint64_t point_level(uint64_t pt) const { return pt % levels(); }
  LevelClass level_class(uint64_t level) const {
    if (level == 1) return LevelClass::ExactlyOne;
    return level % 3 == 1 ? LevelClass::OneMod3 : LevelClass::Other;
  }

  // The in-facet involution at level l applied to an arbitrary flag.
  Flag rho_apply(uint64_t level, const Flag& f) const;

  // Generators.  xi_i (i <= n) acts as r_0 r_i on the flag, level unchanged;
  // xi_last twists within the facet and steps the level by +-1 on the three
  // special facets.
  uint64_t xi(int i, uint64_t pt) const { return recode(xi_flag_[i - 1][point_flag(pt)], pt); }
  uint64_t xi_inv(int i, uint64_t pt) const {
    return recode(xi_inv_flag_[i - 1][point_flag(pt)], pt);
  }
  uint64_t xi_last(uint64_t pt) const;
  uint64_t varsigma(int i, uint64_t pt) const;      // 1 <= i <= n+1
  uint64_t varsigma_inv(int i, uint64_t pt) const;

  // Flag-part tables for level-preserving maps, exposed for restricted
  // (single-level) computations.
  int32_t s_flag(int i, int32_t w) const;           // s_i = r_(i-1) r_i, 1 <= i <= n
  int32_t s_flag_inv(int i, int32_t w) const;

  // Diagonal shifts acting on the flag part only, |j| <= 3.
  uint64_t h_shift(uint64_t pt, int j) const;
  uint64_t hbar_shift(uint64_t pt, int j) const;

  // Twist words (rightmost factor applied first):
  //   mu    = xi_last . h^-3 . xi_last . h^2 . xi_last . h
  //   mubar = xi_last . hbar^-3 . xi_last . hbar^2 . xi_last . hbar
  // mubar_printed drops the leading (last-applied) xi_last; it is measured
  // for reporting only, never used for verdicts.
  uint64_t mu(uint64_t pt) const;
  uint64_t mu_inv(uint64_t pt) const;
  uint64_t mubar(uint64_t pt) const;
  uint64_t mubar_inv(uint64_t pt) const;
  uint64_t mubar_printed(uint64_t pt) const;

  // Words.  s-words use letters +-i (1 <= i <= n) meaning s_i^(+-1); they are
  // expanded to xi-words via s_1 = xi_1, s_i = xi_(i-1)^-1 xi_i.
  Word s_word_for_white(int32_t target) const;  // w with w(base flag) = target
  Word expand_s_word(const Word& s_word) const;
  Word word_for_h() const;   // xi-word acting as h on every point
  Word word_for_mu() const;  // xi-word for mu
  // The generator substitution xi_1 -> xi_1^-1, xi_i -> xi_i (i >= 2).
  static Word alpha_word(Word w);
  uint64_t apply_word(const Word& w, uint64_t pt) const;

 private:
  const ToroidContext* ctx_;
  ExtensionSpec spec_;
  RootTable roots_;
  // Per-white-flag tables (flag part only).
  std::vector<std::vector<int32_t>> xi_flag_;      // i-1 -> table, i = 1..n
  std::vector<std::vector<int32_t>> xi_inv_flag_;
  std::array<std::vector<int32_t>, 3> xi_last_flag_;  // per level-class
  std::vector<int32_t> h_flag_, h_inv_flag_, hbar_flag_, hbar_inv_flag_;
  std::vector<int8_t> facet_kind_;  // 0/1/3 when facet is F_0/F_1/F_3, else -1

  uint64_t recode(int32_t white, uint64_t pt) const {
    return white * levels() + pt % levels();
  }
  int level_delta(int8_t kind, uint64_t level) const;
  void build_roots();
  void build_tables();
};

// JSON (de)serialization helpers live alongside the certificate code; the
// root table audit dump is produced by root_table_json in verifier.hpp.

}  // namespace chirex
