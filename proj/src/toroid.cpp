#include "chirex/toroid.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace chirex {

namespace {

// Lexicographic code of a sign mask with "+" sorting before "-": the sign of
// coordinate 0 is the most significant bit.
inline uint32_t signs_lex(uint32_t mask, int n) {
  uint32_t out = 0;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1u) out |= 1u << (n - 1 - i);
  return out;
}

}  // namespace

Perm Perm::identity(int n) {
  Perm p;
  p.img.resize(n);
  std::iota(p.img.begin(), p.img.end(), uint8_t{0});
  return p;
}

Perm Perm::then(const Perm& q) const {
  Perm out;
  out.img.resize(img.size());
  for (size_t i = 0; i < img.size(); ++i) out.img[i] = q.img[img[i]];
  return out;
}

Perm Perm::inverse() const {
  Perm out;
  out.img.resize(img.size());
  for (size_t i = 0; i < img.size(); ++i) out.img[img[i]] = static_cast<uint8_t>(i);
  return out;
}

bool Perm::is_even() const {
  std::vector<bool> seen(img.size(), false);
  int swaps = 0;
  for (size_t i = 0; i < img.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (size_t j = i; !seen[j]; j = img[j]) {
      seen[j] = true;
      ++len;
    }
    swaps += len - 1;
  }
  return swaps % 2 == 0;
}

Vec perm_apply_vec(const Perm& p, const Vec& v) {
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[p.img[i]] = v[i];
  return out;
}

uint32_t perm_apply_mask(const Perm& p, uint32_t mask, int n) {
  uint32_t out = 0;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1u) out |= 1u << p.img[i];
  return out;
}

Vec mask_apply_vec(uint32_t mask, const Vec& v) {
  Vec out(v);
  for (size_t i = 0; i < v.size(); ++i)
    if (mask >> i & 1u) out[i] = -out[i];
  return out;
}

ToroidContext::ToroidContext(const LatticeSpec& spec) : spec_(spec) {
  const int n = spec_.n;
  // Translation classes: every class has a representative in [0, 2a)^n.
  {
    std::unordered_map<uint64_t, Vec> seen;
    Vec t(n, 0);
    const int64_t lim = 2 * spec_.a;
    while (true) {
      Vec rep = reduce(spec_, t).rep;
      seen.emplace(encode_facet(rep), rep);
      int i = 0;
      while (i < n && ++t[i] == lim) t[i++] = 0;
      if (i == n) break;
    }
    facets_.reserve(seen.size());
    for (auto& [code, rep] : seen) facets_.push_back(std::move(rep));
    std::sort(facets_.begin(), facets_.end());
    if (facets_.size() != quotient_order(spec_))
      throw std::logic_error("translation class enumeration does not match quotient order");
    for (size_t i = 0; i < facets_.size(); ++i)
      facet_lookup_.emplace(encode_facet(facets_[i]), static_cast<int32_t>(i));
  }
  // All n! permutations in lexicographic one-line order.
  {
    Perm p = Perm::identity(n);
    do {
      perm_rank_.emplace(pack_perm(p), static_cast<uint32_t>(perms_.size()));
      perms_.push_back(p);
    } while (std::next_permutation(p.img.begin(), p.img.end()));
  }
  flag_count_ = static_cast<int64_t>(perms_.size()) * (int64_t{1} << n) * facet_count();
  // White flags in lexicographic code order.  Whiteness depends only on the
  // permutation parity and the number of minus signs.
  white_of_code_.assign(flag_count_, -1);
  white_codes_.reserve(flag_count_ / 2);
  const int64_t nfac = facet_count();
  for (size_t rank = 0; rank < perms_.size(); ++rank) {
    bool even = perms_[rank].is_even();
    for (uint32_t lex = 0; lex < (1u << n); ++lex) {
      if (even != (std::popcount(lex) % 2 == 0)) continue;
      int64_t base = (static_cast<int64_t>(rank) * (int64_t{1} << n) + lex) * nfac;
      for (int64_t f = 0; f < nfac; ++f) {
        white_of_code_[base + f] = static_cast<int32_t>(white_codes_.size());
        white_codes_.push_back(base + f);
      }
    }
  }
}

uint64_t ToroidContext::encode_facet(const Vec& rep) const {
  const uint64_t radix = static_cast<uint64_t>(2 * spec_.a);
  uint64_t code = 0;
  for (int i = spec_.n - 1; i >= 0; --i) code = code * radix + static_cast<uint64_t>(rep[i]);
  return code;
}

uint32_t ToroidContext::pack_perm(const Perm& p) const {
  uint32_t code = 0;
  for (int i = 0; i < p.size(); ++i) code |= static_cast<uint32_t>(p.img[i]) << (4 * i);
  return code;
}

int32_t ToroidContext::facet_index(const Vec& rep) const {
  auto it = facet_lookup_.find(encode_facet(rep));
  if (it == facet_lookup_.end())
    throw std::invalid_argument("facet lookup requires a canonical representative");
  return it->second;
}

Flag ToroidContext::monodromy_apply(int i, const Flag& f) const {
  const int n = spec_.n;
  if (i < 0 || i > n) throw std::invalid_argument("monodromy generator index out of range");
  Flag out = f;
  if (i == 0) {
    out.signs ^= 1u << f.perm(0);
  } else if (i < n) {
    std::swap(out.perm.img[i - 1], out.perm.img[i]);
  } else {
    int pos = f.perm(n - 1);
    int32_t x = (f.signs >> pos & 1u) ? -1 : 1;
    out.signs ^= 1u << pos;
    Vec t = f.trans;
    t[pos] -= x;
    out.trans = reduce(spec_, t).rep;
  }
  return out;
}

Flag ToroidContext::aut_apply(const Flag& f, const Perm& tau, uint32_t ymask,
                              const Vec& u) const {
  Flag out;
  out.perm = f.perm.then(tau);
  out.signs = ymask ^ perm_apply_mask(tau, f.signs, spec_.n);
  Vec t = mask_apply_vec(ymask, perm_apply_vec(tau, f.trans));
  out.trans = reduce(spec_, vec_add(t, u)).rep;
  return out;
}

Flag ToroidContext::translate(const Flag& f, const Vec& u) const {
  Flag out = f;
  out.trans = reduce(spec_, vec_add(f.trans, u)).rep;
  return out;
}

bool ToroidContext::is_white(const Flag& f) {
  return f.perm.is_even() == (std::popcount(f.signs) % 2 == 0);
}

Flag ToroidContext::hat(Flag f) {
  f.signs ^= (1u << f.perm.size()) - 1u;
  return f;
}

Flag ToroidContext::h_apply(const Flag& f, int j) const {
  Vec v0(spec_.n);
  std::iota(v0.begin(), v0.end(), 1);
  Vec v = mask_apply_vec(f.signs, perm_apply_vec(f.perm, v0));
  Flag out = f;
  out.trans = reduce(spec_, vec_add(f.trans, vec_scale(v, j))).rep;
  return out;
}

Flag ToroidContext::hbar_apply(const Flag& f, int j) const {
  Vec v0(spec_.n);
  std::iota(v0.begin(), v0.end(), 1);
  uint32_t flipped = f.signs ^ (1u << f.perm(0));
  Vec v = mask_apply_vec(flipped, perm_apply_vec(f.perm, v0));
  Flag out = f;
  out.trans = reduce(spec_, vec_add(f.trans, vec_scale(v, j))).rep;
  return out;
}

Vec ToroidContext::vertex_of(const Flag& f) const {
  Vec u = f.trans;
  for (int i = 0; i < spec_.n; ++i)
    if (f.signs >> i & 1u) u[i] += 1;
  return reduce(spec_, u).rep;
}

int64_t ToroidContext::flag_code(const Flag& f) const {
  auto it = perm_rank_.find(pack_perm(f.perm));
  if (it == perm_rank_.end()) throw std::invalid_argument("malformed permutation");
  int64_t code = it->second;
  code = code * (int64_t{1} << spec_.n) + signs_lex(f.signs, spec_.n);
  return code * facet_count() + facet_index(f.trans);
}

Flag ToroidContext::flag_from_code(int64_t code) const {
  const int64_t nfac = facet_count();
  Flag f;
  f.trans = facets_[code % nfac];
  code /= nfac;
  f.signs = signs_lex(static_cast<uint32_t>(code & ((1 << spec_.n) - 1)), spec_.n);
  f.perm = perms_[code >> spec_.n];
  return f;
}

int32_t ToroidContext::white_index(const Flag& f) const {
  return white_of_code_[flag_code(f)];
}

Flag ToroidContext::base_flag() const {
  Flag f;
  f.perm = Perm::identity(spec_.n);
  f.signs = 0;
  f.trans.assign(spec_.n, 0);
  return f;
}

const std::vector<int>& ToroidContext::schlafli() const {
  if (!schlafli_.empty()) return schlafli_;
  const int n = spec_.n;
  schlafli_.resize(n);
  for (int i = 1; i <= n; ++i) {
    std::vector<bool> seen(flag_count_, false);
    int64_t order = 1;
    for (int64_t start = 0; start < flag_count_; ++start) {
      if (seen[start]) continue;
      int64_t len = 0;
      Flag f = flag_from_code(start);
      int64_t code = start;
      do {
        seen[code] = true;
        f = monodromy_apply(i - 1, monodromy_apply(i, f));
        code = flag_code(f);
        ++len;
      } while (code != start);
      order = std::lcm(order, len);
    }
    schlafli_[i - 1] = static_cast<int>(order);
  }
  return schlafli_;
}

}  // namespace chirex
