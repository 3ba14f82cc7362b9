#include "chirex/lattice.hpp"

#include <numeric>
#include <sstream>

namespace chirex {

namespace {

inline int64_t floor_mod(int64_t x, int64_t m) {
  int64_t r = x % m;
  return r < 0 ? r + m : r;
}

inline int64_t floor_div(int64_t x, int64_t m) {
  return (x - floor_mod(x, m)) / m;
}

}  // namespace

LatticeSpec LatticeSpec::make(int n, int64_t a, int k, bool allow_small_a) {
  if (n < 2) throw std::invalid_argument("lattice dimension must be at least 2");
  if (n > 8) throw std::invalid_argument("lattice dimension above 8 is not supported");
  if (a < 3) throw std::invalid_argument("lattice scale must be at least 3");
  if (k != 1 && k != 2 && k != n)
    throw std::invalid_argument("lattice family selector must be 1, 2 or n");
  if (n == 2 && k == n) k = 2;  // fcc and bcc coincide in dimension 2
  LatticeSpec spec{n, a, k, false};
  if (!spec.conforming_a()) {
    if (!allow_small_a)
      throw std::invalid_argument(
          "lattice scale below 6n+1 requires the explicit small-scale override");
    spec.small_a_override = true;
  }
  return spec;
}

TransClass reduce(const LatticeSpec& spec, const Vec& t) {
  if (static_cast<int>(t.size()) != spec.n)
    throw std::invalid_argument("translation vector has wrong dimension");
  const int n = spec.n;
  const int64_t a = spec.a;
  Vec r(n);
  std::vector<int64_t> q(n);
  for (int i = 0; i < n; ++i) {
    r[i] = static_cast<int32_t>(floor_mod(t[i], a));
    q[i] = floor_div(t[i], a);
  }
  if (spec.k == 1) return TransClass{std::move(r)};
  if (spec.k == 2) {
    int64_t qsum = std::accumulate(q.begin(), q.end(), int64_t{0});
    if (floor_mod(qsum, 2) == 1) r[0] = static_cast<int32_t>(r[0] + a);
    return TransClass{std::move(r)};
  }
  // k == n (body-centred): fold in quotient parities relative to the last
  // coordinate; representatives have r_i + a*qbar_i in coordinates 1..n-1.
  for (int i = 0; i + 1 < n; ++i) {
    int64_t qbar = floor_mod(q[i] - q[n - 1], 2);
    r[i] = static_cast<int32_t>(r[i] + a * qbar);
  }
  return TransClass{std::move(r)};
}

bool contains(const LatticeSpec& spec, const Vec& t) {
  TransClass c = reduce(spec, t);
  for (int32_t x : c.rep)
    if (x != 0) return false;
  return true;
}

uint64_t quotient_order(const LatticeSpec& spec) {
  uint64_t base = 1;
  for (int i = 0; i < spec.n; ++i) base *= static_cast<uint64_t>(spec.a);
  if (spec.k == 1) return base;
  if (spec.k == 2) return 2 * base;
  return (uint64_t{1} << (spec.n - 1)) * base;
}

Vec vec_add(const Vec& x, const Vec& y) {
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

Vec vec_sub(const Vec& x, const Vec& y) {
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

Vec vec_scale(const Vec& x, int64_t c) {
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = static_cast<int32_t>(c * x[i]);
  return out;
}

std::string lattice_name(const LatticeSpec& spec) {
  std::ostringstream os;
  os << "{4";
  for (int i = 0; i < spec.n - 2; ++i) os << ",3";
  os << ",4}_(";
  int lead = (spec.k == spec.n && spec.n > 2) ? spec.n : spec.k;
  for (int i = 0; i < spec.n; ++i) {
    if (i) os << ",";
    os << (i < lead ? spec.a : 0);
  }
  os << ")";
  return os.str();
}

}  // namespace chirex
