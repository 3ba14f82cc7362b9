#pragma once

// Rank-n translation lattices used as fundamental groups of cubic toroids:
// scaled cubic (k=1), face-centred (k=2, even coordinate sum) and
// body-centred (k=n, congruent coordinates mod 2) sublattices of a*Z^n,
// together with canonical coset representatives for Z^n modulo the lattice.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chirex {

using Vec = std::vector<int32_t>;

struct LatticeSpec {
  int n = 0;        // dimension, n >= 2
  int64_t a = 0;    // scale, a >= 3
  int k = 0;        // family selector, canonicalized: 1 (cubic), 2 (fcc) or n (bcc)
  bool small_a_override = false;  // a < 6n+1 accepted only when explicitly allowed

  // Validates and canonicalizes (for n == 2 the fcc and bcc sublattices
  // coincide; k == n is stored as k == 2).  Throws std::invalid_argument on
  // malformed input, including a < 6n+1 without the override.
  static LatticeSpec make(int n, int64_t a, int k, bool allow_small_a = false);

  // True when a is large enough that distinct short translates of the base
  // vertex stay distinct (a >= 6n+1).
  bool conforming_a() const { return a >= 6 * static_cast<int64_t>(n) + 1; }

  bool operator==(const LatticeSpec&) const = default;
};

// A canonical representative of a translation class in Z^n / Lambda.
struct TransClass {
  Vec rep;
  bool operator==(const TransClass&) const = default;
};

// Canonical representative of t modulo the lattice.  For k=1 this is the
// componentwise residue r_i = t_i mod a in [0,a).  For k=2 the residue is
// shifted by a*e_1 when the residue-quotient sum is odd; for k=n the quotient
// parities relative to the last coordinate are folded in.
TransClass reduce(const LatticeSpec& spec, const Vec& t);

// Membership test: t lies in the lattice iff reduce(t) is the zero class.
bool contains(const LatticeSpec& spec, const Vec& t);

// |Z^n / Lambda|: a^n, 2*a^n or 2^(n-1)*a^n for k = 1, 2, n respectively.
uint64_t quotient_order(const LatticeSpec& spec);

// Vector helpers shared across modules.
Vec vec_add(const Vec& x, const Vec& y);
Vec vec_sub(const Vec& x, const Vec& y);
Vec vec_scale(const Vec& x, int64_t c);

std::string lattice_name(const LatticeSpec& spec);  // e.g. "{4,3,4}_(19,0,0)"

}  // namespace chirex
