// chirex: build cubic regular toroids and their twisted level extensions,
// run verification suites, and emit auditable certificates.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chirex/extension.hpp"
#include "chirex/toroid.hpp"
#include "chirex/verifier.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

struct RunConfig {
  int n = 0;
  int64_t a = 0;
  int k = 0;
  uint64_t p = 0;
  std::vector<std::string> checks;
  std::string mode = "full";
  uint64_t seed = 12345;
  int threads = 0;
  bool allow_small_a = false;
  bool strict = false;
  std::string output;
  bool as_json = false;
  std::string config_path;
};

int default_threads() {
  if (const char* env = std::getenv("CHIREX_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

void add_common(CLI::App* cmd, RunConfig& cfg, bool needs_p) {
  cmd->add_option("--n", cfg.n, "dimension of the toroid (rank minus 1)");
  cmd->add_option("--a", cfg.a, "lattice scale");
  cmd->add_option("--k", cfg.k, "lattice family selector (1, 2 or n)");
  if (needs_p) cmd->add_option("--p", cfg.p, "level parameter (levels in Z_3p)");
  cmd->add_option("--checks", cfg.checks,
                  "checks to run: toroid,eta,roots,relations,intersection,chirality,all")
      ->delimiter(',');
  cmd->add_option("--mode", cfg.mode, "relation sweep mode: full or sampled")
      ->check(CLI::IsMember({"full", "sampled"}));
  cmd->add_option("--seed", cfg.seed, "seed for sampled checks");
  cmd->add_option("--threads", cfg.threads, "worker threads for bulk sweeps");
  cmd->add_flag("--allow-small-a", cfg.allow_small_a,
                "accept a < 6n+1 (certificate is tainted NON-CONFORMING)");
  cmd->add_flag("--strict", cfg.strict, "treat INCONCLUSIVE results as failures");
  cmd->add_option("--output,-o", cfg.output, "write the report to this path");
  cmd->add_flag("--json", cfg.as_json, "emit JSON instead of text");
  cmd->add_option("--config", cfg.config_path, "JSON config file (flags win on conflict)");
}

// Merge values from a JSON config file for options the user did not pass.
void apply_config(const CLI::App* cmd, RunConfig& cfg) {
  if (cfg.config_path.empty()) return;
  std::ifstream in(cfg.config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + cfg.config_path);
  json j = json::parse(in);
  auto unset = [&](const std::string& flag) {
    auto* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  if (j.contains("n") && unset("--n")) cfg.n = j["n"].get<int>();
  if (j.contains("a") && unset("--a")) cfg.a = j["a"].get<int64_t>();
  if (j.contains("k") && unset("--k")) cfg.k = j["k"].get<int>();
  if (j.contains("p") && unset("--p")) cfg.p = j["p"].get<uint64_t>();
  if (j.contains("checks") && unset("--checks"))
    cfg.checks = j["checks"].get<std::vector<std::string>>();
  if (j.contains("mode") && unset("--mode")) cfg.mode = j["mode"].get<std::string>();
  if (j.contains("seed") && unset("--seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("threads") && unset("--threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("allow_small_a") && unset("--allow-small-a"))
    cfg.allow_small_a = j["allow_small_a"].get<bool>();
}

std::vector<std::string> normalize_checks(std::vector<std::string> checks) {
  static const std::vector<std::string> kAll = {"toroid", "eta", "roots",
                                                "relations", "intersection", "chirality"};
  if (checks.empty()) return {};
  for (const auto& c : checks) {
    if (c == "all") return {};
    if (std::find(kAll.begin(), kAll.end(), c) == kAll.end())
      throw CLI::ValidationError("--checks", "unknown check: " + c);
  }
  return checks;
}

void write_out(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(cfg.output);
    if (!out) throw std::runtime_error("cannot write " + cfg.output);
    out << text;
  }
}

chirex::VerifyOptions make_options(const RunConfig& cfg) {
  chirex::VerifyOptions opt;
  opt.threads = cfg.threads > 0 ? cfg.threads : default_threads();
  opt.seed = cfg.seed;
  opt.sampled = cfg.mode == "sampled";
  return opt;
}

int exit_code_for(const std::vector<chirex::CheckResult>& checks, bool strict) {
  for (const auto& c : checks) {
    if (c.status == chirex::Status::Fail || c.status == chirex::Status::Overflow)
      return 1;
    if (c.status == chirex::Status::Inconclusive && strict) return 1;
  }
  return 0;
}

int cmd_toroid(const CLI::App* cmd, RunConfig cfg) {
  apply_config(cmd, cfg);
  auto checks = normalize_checks(cfg.checks);
  auto spec = chirex::LatticeSpec::make(cfg.n, cfg.a, cfg.k, cfg.allow_small_a);
  chirex::ToroidContext ctx(spec);
  auto opt = make_options(cfg);

  std::vector<chirex::CheckResult> results;
  auto wants = [&](const std::string& name) {
    return checks.empty() || std::count(checks.begin(), checks.end(), name) > 0;
  };
  if (wants("toroid")) results.push_back(chirex::check_toroid(ctx, opt));
  if (wants("eta")) results.push_back(chirex::check_eta(ctx, opt));

  json report;
  report["toroid"] = {{"n", spec.n}, {"a", spec.a}, {"k", spec.k},
                      {"name", chirex::lattice_name(spec)}};
  report["schlafli"] = ctx.schlafli();
  report["white_count"] = ctx.white_count();
  report["checks"] = json::array();
  for (const auto& r : results)
    report["checks"].push_back({{"name", r.name},
                                {"status", chirex::status_name(r.status)},
                                {"details", r.details}});
  if (cfg.as_json) {
    write_out(cfg, report.dump(2));
  } else {
    std::ostringstream os;
    os << "toroid " << chirex::lattice_name(spec) << "\n"
       << "  white flags: " << ctx.white_count() << "\n";
    for (const auto& r : results)
      os << "  " << r.name << ": " << chirex::status_name(r.status) << "\n";
    write_out(cfg, os.str());
  }
  return exit_code_for(results, cfg.strict);
}

int cmd_ext(const CLI::App* cmd, RunConfig cfg) {
  apply_config(cmd, cfg);
  auto checks = normalize_checks(cfg.checks);
  if (cfg.p < 1) throw CLI::ValidationError("--p", "level parameter must be at least 1");
  auto spec = chirex::LatticeSpec::make(cfg.n, cfg.a, cfg.k, cfg.allow_small_a);
  chirex::ToroidContext ctx(spec);
  chirex::Extension ext(ctx, chirex::ExtensionSpec{spec, cfg.p});
  auto opt = make_options(cfg);

  chirex::Certificate cert = chirex::certify(ext, opt, checks);
  json cj = chirex::certificate_json(cert);
  if (cfg.as_json)
    write_out(cfg, cj.dump(2));
  else
    write_out(cfg, chirex::render_report(cj));
  return exit_code_for(cert.checks, cfg.strict);
}

int cmd_report(const RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open certificate: " << path << "\n";
    return 2;
  }
  json cert;
  try {
    cert = json::parse(in);
    write_out(cfg, chirex::render_report(cert));
  } catch (const std::exception& e) {
    std::cerr << "malformed certificate: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubic toroid extension builder and verifier"};
  app.require_subcommand(1);

  RunConfig toroid_cfg, ext_cfg, report_cfg;
  std::string report_path;

  CLI::App* toroid = app.add_subcommand("toroid", "build and check a cubic regular toroid");
  add_common(toroid, toroid_cfg, false);
  CLI::App* ext = app.add_subcommand("ext", "build and certify a twisted extension");
  add_common(ext, ext_cfg, true);
  CLI::App* report = app.add_subcommand("report", "render a certificate file");
  report->add_option("certificate", report_path, "certificate JSON path")->required();
  report->add_option("--output,-o", report_cfg.output, "write the report to this path");

  try {
    app.parse(argc, argv);
    if (toroid->parsed()) return cmd_toroid(toroid, toroid_cfg);
    if (ext->parsed()) return cmd_ext(ext, ext_cfg);
    if (report->parsed()) return cmd_report(report_cfg, report_path);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
