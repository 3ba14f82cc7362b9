#include "chirex/extension.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace chirex {

namespace {

// Deterministic candidate orders: nearest shifts first, positive before
// negative.
constexpr int kSpecialOrder[7] = {0, 1, -1, 2, -2, 3, -3};
constexpr int kDiagonalOrder[6] = {1, -1, 2, -2, 3, -3};

}  // namespace

Extension::Extension(const ToroidContext& ctx, const ExtensionSpec& spec)
    : ctx_(&ctx), spec_(spec) {
  if (spec_.p < 1) throw std::invalid_argument("level parameter p must be at least 1");
  if (!(spec_.toroid == ctx.spec()))
    throw std::invalid_argument("extension spec does not match the toroid context");
  build_roots();
  build_tables();
}

void Extension::build_roots() {
  const ToroidContext& ctx = *ctx_;
  const int n = ctx.n();
  const int64_t nfac = ctx.facet_count();
  const Flag phi0 = ctx.base_flag();

  for (int i = -3; i <= 3; ++i) {
    Flag f = ctx.h_apply(phi0, i);
    int32_t w = ctx.white_index(f);
    if (w < 0) throw std::logic_error("diagonal shift of the base flag is not white");
    roots_.special_white[i + 3] = w;
    roots_.special_facet[i + 3] = ctx.facet_index(f.trans);
  }

  // The hole vertex and its surrounding facets (base vertex + delta for all
  // delta in {0,-1}^n).
  Vec xh(n, 0);
  xh[1] = -3;
  roots_.hole_vertex = reduce(ctx.spec(), xh).rep;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    Vec t = xh;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) t[i] -= 1;
    roots_.hole_facets.push_back(ctx.facet_index(reduce(ctx.spec(), t).rep));
  }
  std::sort(roots_.hole_facets.begin(), roots_.hole_facets.end());
  roots_.hole_facets.erase(
      std::unique(roots_.hole_facets.begin(), roots_.hole_facets.end()),
      roots_.hole_facets.end());
  if (roots_.hole_facets.size() != (1u << n))
    throw std::runtime_error("hole facets are not pairwise distinct");
  std::set<int32_t> hole_set(roots_.hole_facets.begin(), roots_.hole_facets.end());

  roots_.entries.assign(nfac * 3, RootEntry{-1, 0, 0});
  // Audit: every special/diagonal candidate per facet.
  std::vector<std::vector<int32_t>> candidates(nfac);

  // Case 1: the seven special facets keep their flag in every level class.
  for (int oi = 0; oi < 7; ++oi) {
    int i = kSpecialOrder[oi];
    int32_t fac = roots_.special_facet[i + 3];
    int32_t w = roots_.special_white[i + 3];
    candidates[fac].push_back(w);
    for (int cls = 0; cls < 3; ++cls) {
      RootEntry& e = roots_.entries[fac * 3 + cls];
      if (e.root_white < 0) e = RootEntry{w, 0, 1};
    }
  }

  // Case 3: hole facets at level exactly 1 use the minimal white flag through
  // the hole vertex and switch to the r_1-type involution.
  for (int32_t fac : roots_.hole_facets) {
    if (roots_.entries[fac * 3].root_white >= 0)
      throw std::runtime_error("root construction collision: special facet inside the hole");
    int32_t chosen = -1;
    const int64_t in_facet = static_cast<int64_t>(ctx.flag_count()) / nfac;
    for (int64_t base = 0; base < in_facet && chosen < 0; ++base) {
      Flag f = ctx.flag_from_code(base * nfac + fac);
      if (ToroidContext::is_white(f) && ctx.vertex_of(f) == roots_.hole_vertex)
        chosen = ctx.white_index(f);
    }
    if (chosen < 0) throw std::logic_error("no white flag joins a hole facet to the hole vertex");
    roots_.entries[fac * 3 + static_cast<int>(LevelClass::ExactlyOne)] =
        RootEntry{chosen, 1, 3};
  }

  // Case 2 (class Other only): facets reachable as hbar^j of a white flag of
  // the base facet, in fixed (j, flag) order.
  {
    const int32_t f0 = roots_.special_facet[3];
    std::vector<Flag> base_whites;
    const int64_t in_facet = static_cast<int64_t>(ctx.flag_count()) / nfac;
    for (int64_t base = 0; base < in_facet; ++base) {
      Flag f = ctx.flag_from_code(base * nfac + f0);
      if (ToroidContext::is_white(f)) base_whites.push_back(std::move(f));
    }
    for (int j : kDiagonalOrder) {
      for (const Flag& f : base_whites) {
        Flag root = ctx.hbar_apply(f, j);
        int32_t fac = ctx.facet_index(root.trans);
        if (hole_set.count(fac))
          throw std::runtime_error("root construction collision: diagonal facet inside the hole");
        int32_t w = ctx.white_index(root);
        candidates[fac].push_back(w);
        RootEntry& e = roots_.entries[fac * 3 + static_cast<int>(LevelClass::Other)];
        if (e.root_white < 0) e = RootEntry{w, 0, 2};
      }
    }
  }

  // Case 4: everything else roots at the plain translate of the base flag.
  for (int64_t fac = 0; fac < nfac; ++fac) {
    for (int cls = 0; cls < 3; ++cls) {
      RootEntry& e = roots_.entries[fac * 3 + cls];
      if (e.root_white < 0) {
        Flag f{Perm::identity(ctx.n()), 0, ctx.facet_rep(static_cast<int32_t>(fac))};
        e = RootEntry{ctx.white_index(f), 0, 4};
      }
      ++roots_.case_counts[e.case_id];
    }
  }

  // Audit multi-candidate facets: do all candidate roots induce the same
  // involution?
  for (int64_t fac = 0; fac < nfac; ++fac) {
    auto& cands = candidates[fac];
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    if (cands.size() < 2) continue;
    ++roots_.multi_candidate_facets;
    CubeElem first = facet_automorphism(ctx, ctx.white_flag(cands[0]), 0);
    bool agree = true;
    for (size_t i = 1; i < cands.size(); ++i)
      if (!(facet_automorphism(ctx, ctx.white_flag(cands[i]), 0) == first)) agree = false;
    if (agree) ++roots_.multi_candidate_agreeing;
  }

  // Realize the involutions as right multipliers.
  roots_.multipliers.resize(nfac * 3);
  for (int64_t idx = 0; idx < nfac * 3; ++idx) {
    const RootEntry& e = roots_.entries[idx];
    roots_.multipliers[idx] =
        facet_automorphism(ctx, ctx.white_flag(e.root_white), e.rho_index);
  }
}

Flag Extension::rho_apply(uint64_t level, const Flag& f) const {
  int32_t fac = ctx_->facet_index(f.trans);
  LevelClass cls = level_class(level);
  return apply_facet_automorphism(f, roots_.multipliers[fac * 3 + static_cast<int>(cls)]);
}

void Extension::build_tables() {
  const ToroidContext& ctx = *ctx_;
  const int n = ctx.n();
  const int32_t W = static_cast<int32_t>(ctx.white_count());
  const int64_t nfac = ctx.facet_count();

  xi_flag_.assign(n, std::vector<int32_t>(W));
  xi_inv_flag_.assign(n, std::vector<int32_t>(W));
  for (auto& t : xi_last_flag_) t.resize(W);
  h_flag_.resize(W);
  h_inv_flag_.resize(W);
  hbar_flag_.resize(W);
  hbar_inv_flag_.resize(W);
  facet_kind_.resize(W);

  for (int32_t w = 0; w < W; ++w) {
    Flag f = ctx.white_flag(w);
    for (int i = 1; i <= n; ++i) {
      int32_t img = ctx.white_index(ctx.monodromy_apply(0, ctx.monodromy_apply(i, f)));
      if (img < 0) throw std::logic_error("xi generator left the white flags");
      xi_flag_[i - 1][w] = img;
    }
    h_flag_[w] = ctx.white_index(ctx.h_apply(f, 1));
    h_inv_flag_[w] = ctx.white_index(ctx.h_apply(f, -1));
    hbar_flag_[w] = ctx.white_index(ctx.hbar_apply(f, 1));
    hbar_inv_flag_[w] = ctx.white_index(ctx.hbar_apply(f, -1));
    int32_t fac = static_cast<int32_t>(ctx.white_code(w) % nfac);
    facet_kind_[w] = fac == roots_.special_facet[3]   ? 0
                     : fac == roots_.special_facet[4] ? 1
                     : fac == roots_.special_facet[6] ? 3
                                                      : -1;
    Flag black = ctx.monodromy_apply(0, f);
    for (int cls = 0; cls < 3; ++cls) {
      Flag img = apply_facet_automorphism(black, roots_.multipliers[fac * 3 + cls]);
      int32_t wi = ctx.white_index(img);
      if (wi < 0) throw std::logic_error("last generator left the white flags");
      xi_last_flag_[cls][w] = wi;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int32_t w = 0; w < W; ++w) xi_inv_flag_[i][xi_flag_[i][w]] = w;
}

int Extension::level_delta(int8_t kind, uint64_t level) const {
  int r = static_cast<int>(level % 3);
  if ((kind == 1 && r == 0) || (kind == 3 && r == 1) || (kind == 0 && r == 2)) return 1;
  if ((kind == 0 && r == 0) || (kind == 1 && r == 1) || (kind == 3 && r == 2)) return -1;
  return 0;
}

uint64_t Extension::xi_last(uint64_t pt) const {
  int32_t w = point_flag(pt);
  uint64_t l = point_level(pt);
  int32_t w2 = xi_last_flag_[static_cast<int>(level_class(l))][w];
  uint64_t span = levels();
  uint64_t l2 = (l + span + static_cast<uint64_t>(level_delta(facet_kind_[w], l))) % span;
  return encode(w2, l2);
}

uint64_t Extension::varsigma(int i, uint64_t pt) const {
  const int n = ctx_->n();
  if (i == 1) return xi(1, pt);
  if (i <= n) return xi_inv(i - 1, xi(i, pt));
  if (i == n + 1) return xi_inv(n, xi_last(pt));
  throw std::invalid_argument("rotation generator index out of range");
}

uint64_t Extension::varsigma_inv(int i, uint64_t pt) const {
  const int n = ctx_->n();
  if (i == 1) return xi_inv(1, pt);
  if (i <= n) return xi_inv(i, xi(i - 1, pt));
  if (i == n + 1) return xi_last(xi(n, pt));
  throw std::invalid_argument("rotation generator index out of range");
}

int32_t Extension::s_flag(int i, int32_t w) const {
  if (i == 1) return xi_flag_[0][w];
  return xi_inv_flag_[i - 2][xi_flag_[i - 1][w]];
}

int32_t Extension::s_flag_inv(int i, int32_t w) const {
  if (i == 1) return xi_inv_flag_[0][w];
  return xi_inv_flag_[i - 1][xi_flag_[i - 2][w]];
}

uint64_t Extension::h_shift(uint64_t pt, int j) const {
  int32_t w = point_flag(pt);
  const auto& table = j >= 0 ? h_flag_ : h_inv_flag_;
  for (int c = 0; c < (j >= 0 ? j : -j); ++c) w = table[w];
  return recode(w, pt);
}

uint64_t Extension::hbar_shift(uint64_t pt, int j) const {
  int32_t w = point_flag(pt);
  const auto& table = j >= 0 ? hbar_flag_ : hbar_inv_flag_;
  for (int c = 0; c < (j >= 0 ? j : -j); ++c) w = table[w];
  return recode(w, pt);
}

uint64_t Extension::mu(uint64_t pt) const {
  pt = h_shift(pt, 1);
  pt = xi_last(pt);
  pt = h_shift(pt, 2);
  pt = xi_last(pt);
  pt = h_shift(pt, -3);
  return xi_last(pt);
}

uint64_t Extension::mu_inv(uint64_t pt) const {
  pt = xi_last(pt);
  pt = h_shift(pt, 3);
  pt = xi_last(pt);
  pt = h_shift(pt, -2);
  pt = xi_last(pt);
  return h_shift(pt, -1);
}

uint64_t Extension::mubar(uint64_t pt) const {
  pt = hbar_shift(pt, 1);
  pt = xi_last(pt);
  pt = hbar_shift(pt, 2);
  pt = xi_last(pt);
  pt = hbar_shift(pt, -3);
  return xi_last(pt);
}

uint64_t Extension::mubar_inv(uint64_t pt) const {
  pt = xi_last(pt);
  pt = hbar_shift(pt, 3);
  pt = xi_last(pt);
  pt = hbar_shift(pt, -2);
  pt = xi_last(pt);
  return hbar_shift(pt, -1);
}

uint64_t Extension::mubar_printed(uint64_t pt) const {
  pt = hbar_shift(pt, 1);
  pt = xi_last(pt);
  pt = hbar_shift(pt, 2);
  pt = xi_last(pt);
  return hbar_shift(pt, -3);
}

Word Extension::s_word_for_white(int32_t target) const {
  const ToroidContext& ctx = *ctx_;
  const int n = ctx.n();
  const int32_t W = static_cast<int32_t>(ctx.white_count());
  if (target < 0 || target >= W) throw std::invalid_argument("target flag is not white");
  int32_t start = ctx.white_index(ctx.base_flag());
  std::vector<int32_t> parent(W, -1);
  std::vector<int> letter(W, 0);
  std::vector<int32_t> queue{start};
  parent[start] = start;
  for (size_t head = 0; head < queue.size() && parent[target] < 0; ++head) {
    int32_t w = queue[head];
    for (int i = 1; i <= n; ++i) {
      for (int sgn : {1, -1}) {
        int32_t next = sgn > 0 ? s_flag(i, w) : s_flag_inv(i, w);
        if (parent[next] < 0) {
          parent[next] = w;
          letter[next] = sgn * i;
          queue.push_back(next);
        }
      }
    }
  }
  if (parent[target] < 0)
    throw std::logic_error("white flags are not connected under the rotation generators");
  Word word;
  for (int32_t w = target; w != start; w = parent[w]) word.push_back(letter[w]);
  std::reverse(word.begin(), word.end());
  return word;
}

Word Extension::expand_s_word(const Word& s_word) const {
  Word out;
  for (int letter : s_word) {
    int i = letter > 0 ? letter : -letter;
    if (i == 1) {
      out.push_back(letter);
    } else if (letter > 0) {
      out.push_back(i);        // apply xi_i ...
      out.push_back(-(i - 1)); // ... then xi_(i-1)^-1
    } else {
      out.push_back(i - 1);    // apply xi_(i-1) ...
      out.push_back(-i);       // ... then xi_i^-1
    }
  }
  return out;
}

Word Extension::word_for_h() const {
  Flag target = ctx_->h_apply(ctx_->base_flag(), 1);
  return expand_s_word(s_word_for_white(ctx_->white_index(target)));
}

Word Extension::word_for_mu() const {
  const int last = ctx_->n() + 1;
  Word wh = word_for_h();
  Word inv(wh.rbegin(), wh.rend());
  for (int& l : inv) l = -l;
  Word out = wh;
  out.push_back(last);
  out.insert(out.end(), wh.begin(), wh.end());
  out.insert(out.end(), wh.begin(), wh.end());
  out.push_back(last);
  for (int c = 0; c < 3; ++c) out.insert(out.end(), inv.begin(), inv.end());
  out.push_back(last);
  return out;
}

Word Extension::alpha_word(Word w) {
  for (int& l : w)
    if (l == 1 || l == -1) l = -l;
  return w;
}

uint64_t Extension::apply_word(const Word& w, uint64_t pt) const {
  const int last = ctx_->n() + 1;
  for (int letter : w) {
    int i = letter > 0 ? letter : -letter;
    if (i == last)
      pt = xi_last(pt);
    else if (letter > 0)
      pt = xi(i, pt);
    else
      pt = xi_inv(i, pt);
  }
  return pt;
}

}  // namespace chirex
