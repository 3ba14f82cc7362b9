#pragma once

// Machine checks that the constructed permutation group is the rotation
// group of a chiral polytope with the prescribed toroidal facets: toroid
// sanity, diagonal-shift separation properties, root-table soundness, the
// defining relations, the intersection property (via a schema of finite
// premises), and non-existence of the regularizing automorphism.  Results
// are assembled into an auditable certificate.

#include <string>
#include <vector>

#include "chirex/extension.hpp"
#include "chirex/permengine.hpp"
#include "chirex/toroid.hpp"
#include "json.hpp"

namespace chirex {

enum class Status { Pass, Fail, Inconclusive, Overflow };

std::string status_name(Status s);

struct CheckResult {
  std::string name;
  Status status = Status::Fail;
  nlohmann::json details;
  std::string note;       // conformance notes and caveats
  double runtime_ms = 0;  // filled by the runner
};

struct VerifyOptions {
  int threads = 1;
  uint64_t seed = 12345;
  bool sampled = false;          // relation check: sample instead of full sweep
  uint64_t sample_count = 100000;
};

struct Certificate {
  ExtensionSpec spec;
  bool conforming = false;  // a >= 6n+1, p prime, p > 3W
  std::vector<CheckResult> checks;
  std::string conclusion;   // CHIRAL_POLYTOPE_CERTIFIED / ROTARY_GROUP_ONLY / NOT_VERIFIED
  std::vector<std::string> schlafli;  // entries as decimal strings (last may be huge)
  std::vector<std::string> citations;
};

// Individual checks.  Failures are returned as results, never thrown.
CheckResult check_toroid(const ToroidContext& ctx, const VerifyOptions& opt);
CheckResult check_eta(const ToroidContext& ctx, const VerifyOptions& opt);
CheckResult check_roots(const Extension& ext, const VerifyOptions& opt);
CheckResult check_relations(const Extension& ext, const VerifyOptions& opt);
CheckResult check_intersection(const Extension& ext, const VerifyOptions& opt);
CheckResult check_chirality(const Extension& ext, const VerifyOptions& opt);

// Runs the requested checks (names from {toroid, eta, roots, relations,
// intersection, chirality}; empty means all) and assembles the certificate,
// including the extension's Schlafli symbol with the measured order of the
// last rotation generator.
Certificate certify(const Extension& ext, const VerifyOptions& opt,
                    std::vector<std::string> requested = {});

nlohmann::json certificate_json(const Certificate& cert, bool include_timing = true);
// Renders a human-readable summary of a certificate JSON; throws
// std::invalid_argument on schema violations.
std::string render_report(const nlohmann::json& cert);
// Root-table audit dump.
nlohmann::json root_table_json(const Extension& ext);

bool is_prime(uint64_t x);

namespace detail {
// Monodromy generators r_0..r_n materialized as index tables on flag codes.
std::vector<std::vector<int32_t>> monodromy_tables(const ToroidContext& ctx);
// First flag code violating the Coxeter presentation (or table size when
// none); `which` receives the violated relation's name.
uint64_t coxeter_violation(const std::vector<std::vector<int32_t>>& gens, int n,
                           int threads, std::string* which);
// Schlafli entries computed from generator tables (cycle lcm of r_(i-1)r_i).
std::vector<int> schlafli_from_tables(const std::vector<std::vector<int32_t>>& gens);
}  // namespace detail

}  // namespace chirex
