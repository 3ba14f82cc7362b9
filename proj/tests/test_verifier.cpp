#include <random>

#include "chirex/verifier.hpp"
#include "doctest.h"

using namespace chirex;

namespace {

struct Toy {
  ToroidContext ctx;
  Extension ext;
  Toy() : ctx(LatticeSpec::make(2, 13, 1)), ext(ctx, {ctx.spec(), 5}) {}
};

Toy& toy() {
  static Toy t;
  return t;
}

VerifyOptions opts(int threads = 2) {
  VerifyOptions o;
  o.threads = threads;
  return o;
}

}  // namespace

TEST_CASE("primality") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(2029));
  CHECK(is_prime(1000000007ull));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(2028));
  CHECK_FALSE(is_prime(2047));  // 23 * 89, a classic base-2 pseudoprime
  CHECK_FALSE(is_prime(3215031751ull));
}

TEST_CASE("toroid check passes on a conforming instance") {
  auto& t = toy();
  CheckResult res = check_toroid(t.ctx, opts());
  CHECK(res.status == Status::Pass);
  CHECK(res.details["schlafli"] == nlohmann::json({4, 4}));
  CHECK(res.details["white_count"] == 676);
  CHECK(res.details["regular"] == true);
}

TEST_CASE("presentation violations are caught with a witness") {
  ToroidContext tiny(LatticeSpec::make(2, 3, 1, true));
  auto gens = detail::monodromy_tables(tiny);
  std::string which;
  CHECK(detail::coxeter_violation(gens, 2, 2, &which) ==
        static_cast<uint64_t>(tiny.flag_count()));
  // Break one generator: a cyclic shift is not an involution.
  const int64_t size = tiny.flag_count();
  for (int64_t c = 0; c < size; ++c)
    gens[2][c] = static_cast<int32_t>((c + 1) % size);
  uint64_t witness = detail::coxeter_violation(gens, 2, 2, &which);
  CHECK(witness < static_cast<uint64_t>(size));
  CHECK(which == "r2^2");
}

TEST_CASE("schlafli entries from generator tables") {
  auto gens = detail::monodromy_tables(toy().ctx);
  CHECK(detail::schlafli_from_tables(gens) == std::vector<int>{4, 4});
}

TEST_CASE("separation check") {
  CheckResult res = check_eta(toy().ctx, opts());
  CHECK(res.status == Status::Pass);
  CHECK(res.details["base_facet_flags"] == 8);
  CHECK(res.details["random_facets"].size() == 10);

  // Below the conforming scale the guarantees lapse.
  ToroidContext small(LatticeSpec::make(2, 9, 1, true));
  CheckResult inc = check_eta(small, opts());
  CHECK(inc.status == Status::Inconclusive);
  CHECK_FALSE(inc.note.empty());
}

TEST_CASE("root table check") {
  CheckResult res = check_roots(toy().ext, opts());
  CHECK(res.status == Status::Pass);
  CHECK(res.details["hole_vertex"] == nlohmann::json({0, 10}));
  CHECK(res.details["hole_facets"].size() == 4);
  CHECK(res.details["case_counts"]["special"] == 21);
  CHECK(res.details["multi_candidate_facets"] ==
        res.details["multi_candidate_agreeing"]);
}

TEST_CASE("relation check") {
  auto& t = toy();
  CheckResult res = check_relations(t.ext, opts());
  CHECK(res.status == Status::Pass);
  CHECK(res.details["mode"] == "full");
  CHECK(res.details["domain"] == t.ext.domain_size());
  CHECK(res.details["rotation_orders_on_flags"].size() == 2);

  VerifyOptions sampled = opts();
  sampled.sampled = true;
  sampled.sample_count = 2000;
  CheckResult sres = check_relations(t.ext, sampled);
  CHECK(sres.status == Status::Pass);
  CHECK(sres.details["mode"] == "sampled");
}

TEST_CASE("intersection check") {
  auto& t = toy();
  CheckResult res = check_intersection(t.ext, opts());
  CHECK(res.status == Status::Pass);
  CHECK(res.details["premise_i"]["restricted_order"] == 676);
  CHECK(res.details["premise_i"]["bsgs_order"] == "676");
  // The canonical witness flag: first-axis edge at the base vertex.
  Flag star{Perm{{1, 0}}, 0b10, {0, 12}};
  CHECK(res.details["witness_flag"] == t.ctx.flag_code(star));
  CHECK(res.details["tail_orbits"].contains("2"));
  CHECK(res.details["tail_orbits"].contains("3"));
  // Direct membership cross-validation is reserved for override instances.
  CHECK(res.details["membership_cross_check"]["run"] == false);
}

TEST_CASE("intersection cross-check runs on a small domain") {
  ToroidContext small(LatticeSpec::make(2, 9, 1, true));
  Extension ext(small, {small.spec(), 2});
  CHECK(ext.domain_size() == 1944);
  CheckResult res = check_intersection(ext, opts());
  CHECK(res.status == Status::Pass);
  CHECK(res.details["membership_cross_check"]["run"] == true);
  CHECK(res.details["membership_cross_check"]["agrees"] == true);
}

TEST_CASE("chirality check is inconclusive for a small prime") {
  auto& t = toy();
  CheckResult res = check_chirality(t.ext, opts());
  CHECK(res.status == Status::Inconclusive);
  CHECK(res.details["mu_orbit"] == 5);
  CHECK(res.details["p_prime"] == true);
  CHECK(res.details["p_exceeds_three_copies"] == false);
  CHECK(res.details["mubar_max_orbit"].get<uint64_t>() <= 3 * 676);
}

TEST_CASE("random rotation words fixing the base flag fix everything") {
  auto& t = toy();
  const int32_t W = static_cast<int32_t>(t.ctx.white_count());
  std::mt19937_64 rng(321);
  std::uniform_int_distribution<int> letter_dist(0, 3);
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    // Random word, then append the inverse of the path back to the base flag
    // so the whole word stabilizes it.
    Word w;
    for (int c = 0; c < 12; ++c) {
      int i = 1 + letter_dist(rng) % 2;
      w.push_back(letter_dist(rng) < 2 ? i : -i);
    }
    int32_t end = 0;
    for (int letter : w)
      end = letter > 0 ? t.ext.s_flag(letter, end) : t.ext.s_flag_inv(-letter, end);
    Word back = t.ext.s_word_for_white(end);
    for (auto it = back.rbegin(); it != back.rend(); ++it) w.push_back(-*it);
    ++found;
    for (int32_t probe : {1, 77, 400, W - 1}) {
      int32_t x = probe;
      for (int letter : w)
        x = letter > 0 ? t.ext.s_flag(letter, x) : t.ext.s_flag_inv(-letter, x);
      CHECK(x == probe);
    }
  }
  CHECK(found == 100);
}

TEST_CASE("certificate assembly") {
  auto& t = toy();
  Certificate cert = certify(t.ext, opts());
  CHECK(cert.checks.size() == 6);
  CHECK_FALSE(cert.conforming);
  CHECK(cert.conclusion == "ROTARY_GROUP_ONLY");
  REQUIRE(cert.schlafli.size() == 3);
  CHECK(cert.schlafli[0] == "4");
  CHECK(cert.schlafli[1] == "4");
  CHECK(cert.citations.size() == 5);

  nlohmann::json j = certificate_json(cert);
  CHECK(j["spec"]["p"] == 5);
  CHECK(j["conforming"] == false);
  CHECK_FALSE(j.contains("taint"));
  CHECK(j["checks"].size() == 6);
  CHECK(j["checks"][0].contains("runtime_ms"));
  CHECK_FALSE(certificate_json(cert, false)["checks"][0].contains("runtime_ms"));

  std::string report = render_report(j);
  CHECK(report.find("ROTARY_GROUP_ONLY") != std::string::npos);
  CHECK(report.find("chirality: INCONCLUSIVE") != std::string::npos);

  nlohmann::json broken = j;
  broken.erase("conclusion");
  CHECK_THROWS_AS(render_report(broken), std::invalid_argument);
  CHECK_THROWS_AS(render_report(nlohmann::json::object()), std::invalid_argument);
}

TEST_CASE("certificate determinism across thread counts") {
  auto& t = toy();
  Certificate c1 = certify(t.ext, opts(1), {"roots", "relations", "chirality"});
  Certificate c4 = certify(t.ext, opts(4), {"roots", "relations", "chirality"});
  CHECK(certificate_json(c1, false).dump() == certificate_json(c4, false).dump());
}

TEST_CASE("non-conforming scale taints the certificate") {
  ToroidContext small(LatticeSpec::make(2, 9, 1, true));
  Extension ext(small, {small.spec(), 2});
  Certificate cert = certify(ext, opts(), {"roots", "eta"});
  CHECK_FALSE(cert.conforming);
  nlohmann::json j = certificate_json(cert);
  CHECK(j["taint"] == "NON-CONFORMING");
}

TEST_CASE("root table audit dump") {
  nlohmann::json j = root_table_json(toy().ext);
  CHECK(j["entries"].size() == 169);
  CHECK(j["hole_vertex"] == nlohmann::json({0, 10}));
  CHECK(j["entries"][0].contains("exactly_one"));
  CHECK(j["entries"][0].contains("one_mod_3"));
  CHECK(j["entries"][0].contains("other"));
}
