#include "chirex/permengine.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace chirex {

OrbitResult orbit(const std::vector<PointMap>& gens, uint64_t start,
                  std::optional<uint64_t> cap) {
  OrbitResult out;
  std::unordered_set<uint64_t> seen;
  seen.insert(start);
  out.points.push_back(start);
  for (size_t head = 0; head < out.points.size(); ++head) {
    uint64_t x = out.points[head];
    for (const PointMap& g : gens) {
      for (const PointFn* f : {&g.fwd, &g.inv}) {
        if (!*f) continue;
        uint64_t y = (*f)(x);
        if (seen.insert(y).second) {
          out.points.push_back(y);
          if (cap && out.points.size() > *cap) {
            out.truncated = true;
            return out;
          }
        }
      }
    }
  }
  return out;
}

CycleReport cycle_decomposition(const PointFn& g, uint64_t size,
                                const std::function<void(uint64_t, uint64_t)>& on_element) {
  CycleReport report;
  std::vector<bool> seen(size, false);
  uint64_t cycle_id = 0;
  for (uint64_t start = 0; start < size; ++start) {
    if (seen[start]) continue;
    uint64_t len = 0;
    uint64_t x = start;
    do {
      seen[x] = true;
      if (on_element) on_element(x, cycle_id);
      x = g(x);
      ++len;
    } while (x != start);
    ++report.histogram[len];
    report.max_length = std::max(report.max_length, len);
    report.order = boost::multiprecision::lcm(report.order, BigInt(len));
    ++cycle_id;
  }
  return report;
}

uint64_t cycle_length_through(const PointFn& g, uint64_t start,
                              std::optional<uint64_t> cap) {
  uint64_t len = 0;
  uint64_t x = start;
  do {
    x = g(x);
    ++len;
    if (cap && len > *cap)
      throw std::runtime_error("cycle length exceeded the requested cap");
  } while (x != start);
  return len;
}

// --- Schreier-Sims ----------------------------------------------------------

namespace {

std::vector<uint32_t> perm_identity_vec(uint32_t degree) {
  std::vector<uint32_t> id(degree);
  for (uint32_t i = 0; i < degree; ++i) id[i] = i;
  return id;
}

std::vector<uint32_t> perm_compose(const std::vector<uint32_t>& a,
                                   const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = b[a[i]];
  return out;
}

std::vector<uint32_t> perm_invert(const std::vector<uint32_t>& a) {
  std::vector<uint32_t> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[a[i]] = static_cast<uint32_t>(i);
  return out;
}

bool perm_is_identity(const std::vector<uint32_t>& a) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != i) return false;
  return true;
}

}  // namespace

struct BsgsLevel {
  uint32_t base_point = 0;
  std::vector<std::vector<uint32_t>> gens;  // strong gens added here
  // Schreier vector for the orbit of base_point: parent point and the index
  // (into bfs_gens) of the generator mapping parent -> point.  Keeps memory
  // linear in the degree instead of orbit * degree.  bfs_gens holds every
  // incorporated generator at even indices and its inverse right after it,
  // so the inverse of bfs_gens[v] is bfs_gens[v ^ 1].  Orbit data is only
  // ever extended, never rebuilt, which keeps old transversal words valid.
  std::vector<std::vector<uint32_t>> bfs_gens;
  std::vector<int64_t> parent;  // -1 when outside the orbit; base is its own
  std::vector<uint32_t> via;
  std::vector<uint8_t> in_orbit;
  std::vector<uint32_t> orbit_points;  // discovery order
  size_t bfs_head = 0;                 // points fully expanded with all gens
  std::vector<uint32_t> pair_done;     // per orbit point: gens already verified
  std::vector<size_t> taken;  // per deeper level: gens already incorporated
  uint64_t orbit_size = 0;
};

struct PermGroupImpl {
  uint32_t degree;
  std::vector<BsgsLevel> levels;

  std::vector<std::vector<uint32_t>> level_gens(size_t i) const {
    std::vector<std::vector<uint32_t>> out;
    for (size_t j = i; j < levels.size(); ++j)
      out.insert(out.end(), levels[j].gens.begin(), levels[j].gens.end());
    return out;
  }

  // Extend (never rebuild) the orbit of level i with any generators acquired
  // since the last call.  Inverses join the BFS so the Schreier trees stay
  // shallow; any transversal works for the stabilizer generators.
  void extend_orbit(size_t i) {
    BsgsLevel& lv = levels[i];
    if (lv.parent.empty()) {
      lv.parent.assign(degree, -1);
      lv.via.assign(degree, 0);
      lv.in_orbit.assign(degree, 0);
      lv.in_orbit[lv.base_point] = 1;
      lv.parent[lv.base_point] = lv.base_point;
      lv.orbit_points.push_back(lv.base_point);
      lv.orbit_size = 1;
    }
    auto try_add = [&](uint32_t p, size_t gi) {
      uint32_t q = lv.bfs_gens[gi][p];
      if (!lv.in_orbit[q]) {
        lv.in_orbit[q] = 1;
        lv.parent[q] = p;
        lv.via[q] = static_cast<uint32_t>(gi);
        lv.orbit_points.push_back(q);
        ++lv.orbit_size;
      }
    };
    // Incorporate generators acquired since the last call.  The bookkeeping
    // is per source level because middle levels can gain generators later.
    const size_t old_pairs = lv.bfs_gens.size() / 2;
    lv.taken.resize(levels.size(), 0);
    for (size_t j = i; j < levels.size(); ++j)
      for (size_t t = lv.taken[j]; t < levels[j].gens.size(); ++t) {
        lv.bfs_gens.push_back(levels[j].gens[t]);
        lv.bfs_gens.push_back(perm_invert(levels[j].gens[t]));
        lv.taken[j] = t + 1;
      }
    if (lv.bfs_gens.size() > 2 * old_pairs) {
      // Points already expanded only need the new generators.
      for (size_t h = 0; h < lv.bfs_head; ++h)
        for (size_t gi = 2 * old_pairs; gi < lv.bfs_gens.size(); ++gi)
          try_add(lv.orbit_points[h], gi);
    }
    while (lv.bfs_head < lv.orbit_points.size()) {
      uint32_t p = lv.orbit_points[lv.bfs_head++];
      for (size_t gi = 0; gi < lv.bfs_gens.size(); ++gi) try_add(p, gi);
    }
    lv.pair_done.resize(lv.orbit_points.size(), 0);
  }

  // Explicit coset representative carrying the base point to `point`.
  std::vector<uint32_t> transversal_perm(size_t i, uint32_t point) const {
    const BsgsLevel& lv = levels[i];
    std::vector<uint32_t> path;
    for (uint32_t q = point; q != lv.base_point; q = static_cast<uint32_t>(lv.parent[q]))
      path.push_back(lv.via[q]);
    std::vector<uint32_t> rep = perm_identity_vec(degree);
    for (auto it = path.rbegin(); it != path.rend(); ++it)
      rep = perm_compose(rep, lv.bfs_gens[*it]);
    return rep;
  }

  // Apply the inverse of the coset representative for `point` after g.
  std::vector<uint32_t> compose_inverse_transversal(std::vector<uint32_t> g, size_t i,
                                                    uint32_t point) const {
    const BsgsLevel& lv = levels[i];
    for (uint32_t q = point; q != lv.base_point; q = static_cast<uint32_t>(lv.parent[q])) {
      const auto& inv = lv.bfs_gens[lv.via[q] ^ 1];
      for (uint32_t x = 0; x < degree; ++x) g[x] = inv[g[x]];
    }
    return g;
  }

  // Strip g through levels [from, end).  Returns the residue and the level
  // at which stripping stopped (== levels.size() if fully stripped).
  std::pair<std::vector<uint32_t>, size_t> strip(std::vector<uint32_t> g,
                                                 size_t from) const {
    for (size_t i = from; i < levels.size(); ++i) {
      uint32_t image = g[levels[i].base_point];
      if (!levels[i].in_orbit[image]) return {std::move(g), i};
      g = compose_inverse_transversal(std::move(g), i, image);
    }
    return {std::move(g), levels.size()};
  }

  void add_level_for(const std::vector<uint32_t>& residue) {
    BsgsLevel lv;
    for (uint32_t i = 0; i < degree; ++i)
      if (residue[i] != i) {
        lv.base_point = i;
        break;
      }
    levels.push_back(std::move(lv));
  }

  // Test the Schreier generators of level i that have not been checked yet.
  // A pass verdict never goes stale: orbit data is only extended, and a
  // residue that once stripped to the identity still lies in the (grown)
  // chain below.  Returns true when every pair strips; otherwise records the
  // residue as a new strong generator and reports the level it went to.
  bool verify_level(size_t i, size_t& dropped_to) {
    extend_orbit(i);
    BsgsLevel& lv = levels[i];
    const size_t fwd = lv.bfs_gens.size() / 2;  // even indices are forward gens
    for (size_t pi = 0; pi < lv.orbit_points.size(); ++pi) {
      if (lv.pair_done[pi] >= fwd) continue;
      uint32_t p = lv.orbit_points[pi];
      auto rep_p = transversal_perm(i, p);
      for (size_t t = lv.pair_done[pi]; t < fwd; ++t) {
        const auto& g = lv.bfs_gens[2 * t];
        auto schreier = compose_inverse_transversal(perm_compose(rep_p, g), i, g[p]);
        if (!perm_is_identity(schreier)) {
          auto [residue, stop] = strip(std::move(schreier), i + 1);
          if (!perm_is_identity(residue)) {
            if (stop == levels.size()) add_level_for(residue);
            dropped_to = std::min(stop, levels.size() - 1);
            levels[dropped_to].gens.push_back(std::move(residue));
            lv.pair_done[pi] = static_cast<uint32_t>(t);
            return false;
          }
        }
        lv.pair_done[pi] = static_cast<uint32_t>(t + 1);
      }
    }
    return true;
  }

  // Deterministic Schreier-Sims: after a failed pass jump to the level that
  // received the new strong generator, then climb back up one level per
  // clean pass.  Iterative, with per-pair memoisation, so the total work is
  // proportional to orbit size times generator count per level.
  void close(size_t start) {
    size_t i = std::max(start, levels.size() - 1);
    while (true) {
      size_t dropped_to = 0;
      if (verify_level(i, dropped_to)) {
        if (i == 0) break;
        --i;
      } else {
        i = dropped_to;
      }
    }
  }
};

PermGroup::PermGroup(uint32_t degree, std::vector<std::vector<uint32_t>> generators)
    : degree_(degree) {
  auto impl = std::make_shared<PermGroupImpl>();
  impl->degree = degree;
  std::vector<std::vector<uint32_t>> nontrivial;
  for (auto& g : generators) {
    if (g.size() != degree) throw std::invalid_argument("generator degree mismatch");
    if (!perm_is_identity(g)) nontrivial.push_back(std::move(g));
  }
  if (!nontrivial.empty()) {
    impl->add_level_for(nontrivial.front());
    impl->levels[0].gens = std::move(nontrivial);
    impl->close(0);
  }
  impl_ = std::move(impl);
}

BigInt PermGroup::order() const {
  auto impl = std::static_pointer_cast<PermGroupImpl>(impl_);
  BigInt order = 1;
  for (const auto& lv : impl->levels) order *= lv.orbit_size;
  return order;
}

bool PermGroup::contains(const std::vector<uint32_t>& perm) const {
  if (perm.size() != degree_) return false;
  auto impl = std::static_pointer_cast<PermGroupImpl>(impl_);
  auto [residue, stop] = impl->strip(perm, 0);
  return perm_is_identity(residue);
}

// --- equivariant bijection ---------------------------------------------------

bool exists_equivariant_bijection(const std::vector<PointFn>& gens_a,
                                  const std::vector<PointFn>& gens_b, uint64_t size,
                                  uint64_t a, uint64_t b) {
  if (gens_a.size() != gens_b.size())
    throw std::invalid_argument("generator lists must pair up");
  constexpr uint64_t kUnset = UINT64_MAX;
  std::vector<uint64_t> image(size, kUnset);
  std::vector<bool> used(size, false);
  image[a] = b;
  used[b] = true;
  std::vector<uint64_t> queue{a};
  for (size_t head = 0; head < queue.size(); ++head) {
    uint64_t x = queue[head];
    for (size_t i = 0; i < gens_a.size(); ++i) {
      uint64_t xa = gens_a[i](x);
      uint64_t xb = gens_b[i](image[x]);
      if (image[xa] == kUnset) {
        if (used[xb]) return false;
        image[xa] = xb;
        used[xb] = true;
        queue.push_back(xa);
      } else if (image[xa] != xb) {
        return false;
      }
    }
  }
  return true;
}

uint64_t first_violation(uint64_t size, int threads,
                         const std::function<bool(uint64_t)>& ok) {
  int chunks = std::max(threads, 1);
  if (chunks == 1 || size < 4096) {
    for (uint64_t i = 0; i < size; ++i)
      if (!ok(i)) return i;
    return size;
  }
  std::vector<uint64_t> firsts(chunks, size);
  std::vector<std::thread> pool;
  uint64_t step = (size + chunks - 1) / chunks;
  for (int c = 0; c < chunks; ++c) {
    pool.emplace_back([&, c] {
      uint64_t begin = c * step;
      uint64_t end = std::min(size, begin + step);
      for (uint64_t i = begin; i < end; ++i)
        if (!ok(i)) {
          firsts[c] = i;
          return;
        }
    });
  }
  for (auto& t : pool) t.join();
  return *std::min_element(firsts.begin(), firsts.end());
}

}  // namespace chirex
