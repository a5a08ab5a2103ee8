#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "kofn/errors.hpp"
#include "kofn/version.hpp"

namespace kofn::cli {
namespace {

namespace fs = std::filesystem;

struct Subcommand {
  CLI::App* app = nullptr;
  std::function<CommandOutput(const Common&)> run;
};

template <class T>
CLI::Option* add_list(CLI::App* sub, const std::string& name, std::vector<T>& values,
                      const std::string& help) {
  return sub->add_option(name, values, help)->delimiter(',')->capture_default_str();
}

template <class T>
CLI::Option* add_value(CLI::App* sub, const std::string& name, T& value, const std::string& help) {
  return sub->add_option(name, value, help)->capture_default_str();
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Effective value of every option of `app` (given or default), keyed by
// its long name.
std::map<std::string, std::string> effective_options(const CLI::App* app) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config" || name == "version") continue;
    std::string value = opt->count() > 0 ? join(opt->results(), ',') : opt->get_default_str();
    // list defaults render as "[a,b]"
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
      value = value.substr(1, value.size() - 2);
    }
    out[name] = value;
  }
  return out;
}

void print_assertions(const std::vector<Assertion>& assertions) {
  for (const auto& a : assertions) {
    const char* tag = a.skipped ? "SKIP" : (a.passed ? "PASS" : "FAIL");
    std::cout << tag << ' ' << a.name;
    if (!a.detail.empty()) std::cout << ": " << a.detail;
    std::cout << '\n';
  }
}

int replay(const fs::path& manifest_path, const std::string& out_dir) {
  const json original = json::parse(read_text_file(manifest_path));
  auto args = original.at("replay_args").get<std::vector<std::string>>();
  const fs::path out = out_dir.empty() ? manifest_path.parent_path() / "replay" : fs::path(out_dir);
  args.push_back("--out");
  args.push_back(out.string());
  std::cout << "replaying " << join(args, ' ') << '\n';
  const int code = run(args);
  const json again = json::parse(read_text_file(out / "manifest.json"));

  std::map<std::string, std::string> digests;
  for (const auto& f : again.at("data_files")) digests[f.at("path")] = f.at("digest");
  bool same = code == original.at("exit_code").get<int>();
  if (!same) std::cout << "FAIL exit code " << code << " differs from the recorded one\n";
  for (const auto& f : original.at("data_files")) {
    const std::string path = f.at("path");
    const auto it = digests.find(path);
    const bool match = it != digests.end() && it->second == f.at("digest").get<std::string>();
    std::cout << (match ? "PASS" : "FAIL") << " reproduced " << path << '\n';
    same = same && match;
  }
  return same ? kExitPass : kExitAssertion;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"k-out-of-n OSSS inequality experiments", "kofn"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version_string()));
  app.set_config("--config", "", "TOML config file ([subcommand] sections); command-line flags win")
      ->check(CLI::ExistingFile);

  Common common;
  std::string out_dir;
  app.add_option("--seed", common.seed, "root seed of every random stream")->capture_default_str();
  app.add_option("--workers", common.workers, "worker threads")
      ->envname("KOFN_WORKERS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", out_dir, "output directory (default kofn-out/<subcommand>)");

  std::vector<Subcommand> subs;

  VerifyOsssOptions vo;
  {
    auto* s = app.add_subcommand("verify-osss", "constant search over generated suites (exact)");
    add_list(s, "--n", vo.n, "ground-set sizes");
    add_list(s, "--k", vo.k, "weights (default n/2)");
    add_value(s, "--suite-size", vo.suite_size, "generated events per n");
    add_value(s, "--trees", vo.trees, "generated decision trees per n");
    add_value(s, "--constant", vo.constant, "constant C (rational, e.g. 20 or 41/2)");
    add_list(s, "--epsilons", vo.epsilons, "epsilon grid for the per-epsilon maxima");
    add_value(s, "--tau-variant", vo.tau_variant, "standard or fixed-weight");
    subs.push_back({s, [&](const Common& c) { return verify_osss(vo, c); }});
  }
  CheckCouplingOptions co;
  {
    auto* s = app.add_subcommand("check-coupling", "exact coupling checks (Z marginal, identity, claim)");
    add_list(s, "--n", co.n, "ground-set sizes (at most 6)");
    add_list(s, "--k", co.k, "weights (default n/2)");
    add_value(s, "--events", co.events, "generated events per n");
    add_value(s, "--trees", co.trees, "generated decision trees per n");
    add_value(s, "--c1", co.c1, "distance threshold fraction c1 (rational)");
    add_value(s, "--tau-variant", co.tau_variant, "standard or fixed-weight");
    add_value(s, "--claim", co.claim, "run the conditional-law check for every t (0/1)");
    add_value(s, "--mc-samples", co.mc_samples, "Monte Carlo samples for the identity (0 skips)");
    add_value(s, "--mc-n", co.mc_n, "ground-set size of the Monte Carlo identity check");
    add_value(s, "--mc-events", co.mc_events, "events in the Monte Carlo identity check");
    add_value(s, "--correlation-search", co.correlation_search,
              "tabulate the correlation of disagreement and distance (0/1)");
    subs.push_back({s, [&](const Common& c) { return check_coupling(co, c); }});
  }
  CheckRussoOptions ro;
  {
    auto* s = app.add_subcommand("check-russo", "exact Russo identity on generic events and small boxes");
    add_list(s, "--n", ro.n, "ground-set sizes of generic events");
    add_value(s, "--events", ro.events, "generated events per n");
    add_list(s, "--R", ro.R, "box side lengths (at most 4)");
    subs.push_back({s, [&](const Common& c) { return check_russo(ro, c); }});
  }
  LognOptions lo;
  {
    auto* s = app.add_subcommand("logn-demo", "hybrid-encoding sum growth against ln n");
    add_list(s, "--n", lo.n, "even ground-set sizes");
    add_value(s, "--samples", lo.samples, "samples per n");
    add_value(s, "--bracket-samples", lo.bracket_samples, "Monte Carlo samples for the OSSS bracket");
    add_value(s, "--exact-bracket-max-n", lo.exact_bracket_max_n, "largest n with an exact bracket");
    add_value(s, "--max-bracket", lo.max_bracket, "bound asserted for the bracket");
    add_value(s, "--min-r-squared", lo.min_r_squared, "R^2 asserted for the ln n fit");
    subs.push_back({s, [&](const Common& c) { return logn_demo(lo, c); }});
  }
  CrossingOptions xo;
  {
    auto* s = app.add_subcommand("percolation-crossing", "crossing probability and exploration checks");
    add_list(s, "--R", xo.R, "even box sides for the crossing probability");
    add_value(s, "--samples", xo.samples, "Monte Carlo samples per R");
    add_list(s, "--agreement-R", xo.agreement_R, "box sides for the exploration/oracle check");
    add_value(s, "--agreement-samples", xo.agreement_samples,
              "sampled configurations per R (R <= 2 is exhaustive)");
    add_value(s, "--exact-max-R", xo.exact_max_R, "largest R computed by enumeration");
    add_value(s, "--sigmas", xo.sigmas, "tolerance in standard errors");
    subs.push_back({s, [&](const Common& c) { return percolation_crossing(xo, c); }});
  }
  ScalingOptions so;
  {
    auto* s = app.add_subcommand("pivotal-scaling", "pivotal growth, revealment decay, averaged OSSS");
    add_list(s, "--R", so.R, "even box sides for E[N^0]");
    add_value(s, "--samples", so.samples, "samples per R");
    add_value(s, "--sigmas", so.sigmas, "required consecutive separation");
    add_list(s, "--revealment-R", so.revealment_R, "even box sides for the revealment profile");
    add_value(s, "--revealment-samples", so.revealment_samples, "samples per revealment R");
    add_value(s, "--anchors", so.anchors, "anchors per revealment run (0 = all)");
    add_list(s, "--osss-R", so.osss_R, "even box sides for the averaged OSSS check (<= 4 exact)");
    add_value(s, "--osss-samples", so.osss_samples, "samples per averaged OSSS R");
    add_value(s, "--osss-batches", so.osss_batches, "batches for the OSSS standard errors");
    add_value(s, "--constant", so.constant, "constant C");
    add_value(s, "--osss-sigmas", so.osss_sigmas, "tolerance in standard errors");
    subs.push_back({s, [&](const Common& c) { return pivotal_scaling(so, c); }});
  }
  OneArmOptions ao;
  {
    auto* s = app.add_subcommand("one-arm", "one-arm probabilities, Bernoulli vs fixed weight");
    add_list(s, "--M", ao.M, "radii");
    add_value(s, "--samples", ao.samples, "samples per radius and measure");
    add_value(s, "--sigmas", ao.sigmas, "tolerance in standard errors");
    subs.push_back({s, [&](const Common& c) { return one_arm(ao, c); }});
  }
  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay-from-manifest", "rerun a recorded run and compare outputs");
  replay_cmd->add_option("--manifest", manifest_path, "manifest.json of the run")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (replay_cmd->parsed()) {
    try {
      return replay(manifest_path, out_dir);
    } catch (const std::exception& e) {
      std::cerr << "kofn: error: " << e.what() << '\n';
      return kExitUsage;
    }
  }

  const Subcommand* chosen = nullptr;
  for (const auto& s : subs) {
    if (s.app->parsed()) chosen = &s;
  }
  const std::string name = chosen->app->get_name();
  const fs::path out = out_dir.empty() ? fs::path("kofn-out") / name : fs::path(out_dir);

  const auto start = std::chrono::steady_clock::now();
  CommandOutput result;
  try {
    result = chosen->run(common);
  } catch (const DomainError& e) {
    std::cerr << "kofn " << name << ": invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "kofn " << name << ": invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IndexError& e) {
    std::cerr << "kofn " << name << ": invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "kofn " << name << ": too large for exact enumeration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "kofn " << name << ": error: " << e.what() << '\n';
    return kExitAssertion;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // Every option spelled out, so the run can be repeated without the
  // original config file.
  const auto options = effective_options(chosen->app);
  std::vector<std::string> replay_args{name};
  for (const auto& [key, value] : options) {
    if (value.empty()) continue;
    replay_args.push_back("--" + key);
    replay_args.push_back(value);
  }
  replay_args.insert(replay_args.end(), {"--seed", std::to_string(common.seed), "--workers",
                                         std::to_string(common.workers)});

  json files = json::array();
  for (const auto& f : result.files) {
    write_text_file(out / f.name, f.text);
    files.push_back({{"path", f.name}, {"bytes", f.text.size()}, {"digest", content_digest(f.text)}});
  }
  json assertions = json::array();
  json failed = json::array();
  for (const auto& a : result.assertions) {
    assertions.push_back({{"name", a.name}, {"passed", a.passed}, {"skipped", a.skipped}, {"detail", a.detail}});
    if (!a.passed) failed.push_back(a.name);
  }
  const bool passed = result.passed();
  const int code = passed ? kExitPass : kExitAssertion;
  json manifest = {{"tool", "kofn"},
                   {"version", std::string(version_string())},
                   {"subcommand", name},
                   {"argv", args},
                   {"config", {{"seed", common.seed}, {"workers", common.workers}, {"options", options}}},
                   {"replay_args", replay_args},
                   {"wall_time_seconds", seconds},
                   {"results", result.results},
                   {"assertions", assertions},
                   {"failed_assertions", failed},
                   {"data_files", files},
                   {"passed", passed},
                   {"exit_code", code}};
  write_text_file(out / "manifest.json", manifest.dump(2) + "\n");

  print_assertions(result.assertions);
  std::cout << "manifest: " << (out / "manifest.json").string() << '\n';
  return code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace kofn::cli
