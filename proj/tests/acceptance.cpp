// Acceptance suite: one line of output per criterion, exit status 0 only if
// every criterion passes.

#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "chirex/verifier.hpp"

using namespace chirex;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s — %s\n", criterion, ok ? "PASS" : "FAIL",
              what.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

// Measured order of the last rotation generator on the flagship instance,
// pinned as a regression constant after the first verified run.  Empty means
// not yet pinned; then only the lower bound is enforced.
const std::string kPinnedFlagshipLastOrder = "364";

VerifyOptions opts(int threads) {
  VerifyOptions o;
  o.threads = threads;
  return o;
}

const CheckResult* find_check(const Certificate& cert, const std::string& name) {
  for (const auto& c : cert.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

int main() {
  const int threads = std::max(2u, std::thread::hardware_concurrency());

  // --- 1. toroid suite -------------------------------------------------------
  {
    struct Case {
      int n;
      int64_t a;
      int k;
      int64_t whites;
    };
    const std::vector<Case> cases = {{2, 13, 1, 676},
                                     {2, 13, 2, 1352},
                                     {3, 19, 1, 164616},
                                     {3, 19, 2, 329232},
                                     {3, 19, 3, 658464}};
    bool ok = true;
    std::string detail;
    for (const Case& c : cases) {
      ToroidContext ctx(LatticeSpec::make(c.n, c.a, c.k));
      CheckResult res = check_toroid(ctx, opts(threads));
      std::vector<int> expected(c.n, 3);
      expected.front() = expected.back() = 4;
      if (res.status != Status::Pass || ctx.white_count() != c.whites ||
          ctx.schlafli() != expected) {
        ok = false;
        detail = "failed for n=" + std::to_string(c.n) + " a=" + std::to_string(c.a) +
                 " k=" + std::to_string(c.k);
        break;
      }
    }
    report(1, ok,
           ok ? "toroid relations, type, white counts and regularity on five instances"
              : detail);
  }

  // --- 2. separation properties ---------------------------------------------
  {
    ToroidContext t2(LatticeSpec::make(2, 13, 1));
    ToroidContext t3(LatticeSpec::make(3, 19, 1));
    bool ok = check_eta(t2, opts(threads)).status == Status::Pass &&
              check_eta(t3, opts(threads)).status == Status::Pass;
    report(2, ok, "diagonal-shift separation properties, items 1-7, both ranks");
  }

  // --- 3..7, 9, 10: flagship instance ----------------------------------------
  ToroidContext flag_ctx(LatticeSpec::make(2, 13, 1));
  Extension flagship(flag_ctx, {flag_ctx.spec(), 2029});
  Certificate flag_cert = certify(flagship, opts(threads));

  {
    const CheckResult* rel = find_check(flag_cert, "relations");
    bool ok = rel && rel->status == Status::Pass &&
              rel->details.value("mode", "") == "full" &&
              flagship.domain_size() == 4114812ull;
    report(3, ok, "all defining relations on the 4,114,812-point flagship domain");
  }
  const CheckResult* chi = find_check(flag_cert, "chirality");
  {
    bool ok = chi && chi->details.value("mu_orbit", uint64_t{0}) == 2029;
    report(4, ok, "twist orbit of the base point has exactly 2029 elements");
  }
  {
    bool ok = chi && chi->status == Status::Pass &&
              chi->details.value("mubar_max_orbit", uint64_t{1} << 62) <= 2028;
    report(5, ok,
           "mirrored-twist orbits are short or level-confined, max length <= 2028");
  }
  {
    const CheckResult* inter = find_check(flag_cert, "intersection");
    bool ok = inter && inter->status == Status::Pass &&
              inter->details.contains("premise_i") &&
              inter->details["premise_i"].value("restricted_order", 0) == 676 &&
              inter->details["tail_orbits"].contains("2") &&
              inter->details["tail_orbits"].contains("3");
    report(6, ok, "intersection-property schema for both tail subgroups");
  }
  {
    bool ok = flag_cert.conclusion == "CHIRAL_POLYTOPE_CERTIFIED" &&
              lattice_name(flag_ctx.spec()) == "{4,4}_(13,0)" &&
              flag_cert.schlafli.size() == 3 && flag_cert.schlafli[0] == "4" &&
              flag_cert.schlafli[1] == "4";
    const std::string& q = flag_cert.schlafli.back();
    if (kPinnedFlagshipLastOrder.empty()) {
      // Not yet pinned: require at least the proven lower bound.
      ok = ok && !(q == "1" || q == "2");
      std::printf("    measured last rotation order: %s\n", q.c_str());
    } else {
      ok = ok && q == kPinnedFlagshipLastOrder;
    }
    report(7, ok, "flagship certificate: certified chiral with the prescribed facets");
  }

  // --- 8. rank-5 sweep --------------------------------------------------------
  ToroidContext r5_ctx(LatticeSpec::make(3, 19, 1));
  Extension rank5(r5_ctx, {r5_ctx.spec(), 5});
  const std::vector<std::string> r5_checks = {"roots", "relations", "intersection",
                                              "chirality"};
  Certificate r5_cert = certify(rank5, opts(threads), r5_checks);
  {
    auto status = [&](const char* name) {
      const CheckResult* c = find_check(r5_cert, name);
      return c ? c->status : Status::Fail;
    };
    bool ok = rank5.domain_size() == 2469240ull && status("roots") == Status::Pass &&
              status("relations") == Status::Pass &&
              status("intersection") == Status::Pass &&
              status("chirality") == Status::Inconclusive;
    report(8, ok,
           "rank-5 relations, roots and intersection pass; chirality inconclusive "
           "for the small level count");
  }

  // --- 9. generator-substitution consistency ----------------------------------
  {
    // The substituted twist word already gates the chirality check; verify the
    // shift word as well: substituting in the word for the diagonal shift must
    // act as its 0-conjugate on every white flag.
    bool ok = chi && chi->status == Status::Pass;
    Word alpha_h = Extension::alpha_word(flagship.word_for_h());
    for (int32_t w = 0; ok && w < flag_ctx.white_count(); ++w) {
      uint64_t pt = flagship.apply_word(alpha_h, flagship.encode(w, 0));
      Flag expect = flag_ctx.hbar_apply(flag_ctx.white_flag(w), 1);
      if (flagship.point_level(pt) != 0 ||
          flagship.point_flag(pt) != flag_ctx.white_index(expect))
        ok = false;
    }
    report(9, ok,
           "generator substitution carries the twist word to its mirror and the "
           "shift word to the conjugate shift");
  }

  // --- 10. determinism across thread counts ------------------------------------
  {
    const int other = threads == 3 ? 5 : 3;
    Certificate flag_again = certify(flagship, opts(other));
    Certificate r5_again = certify(rank5, opts(other), r5_checks);
    bool ok = certificate_json(flag_cert, false).dump() ==
                  certificate_json(flag_again, false).dump() &&
              certificate_json(r5_cert, false).dump() ==
                  certificate_json(r5_again, false).dump();
    report(10, ok, "certificates are byte-identical across thread counts");
  }

  // --- 11. small-instance cross-validation -------------------------------------
  {
    ToroidContext small(LatticeSpec::make(2, 9, 1, true));
    Extension toy(small, {small.spec(), 2});
    CheckResult res = check_intersection(toy, opts(threads));
    bool ok = toy.domain_size() <= 100000 && res.status == Status::Pass &&
              res.details.contains("membership_cross_check") &&
              res.details["membership_cross_check"].value("run", false) &&
              res.details["membership_cross_check"].value("agrees", false);
    report(11, ok,
           "direct membership testing agrees with the schema verdict on a toy domain");
  }

  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
