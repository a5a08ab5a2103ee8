#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "report_io.hpp"

namespace kofn::cli {

struct Common {
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct Assertion {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
};

struct DataFile {
  std::string name;  // relative to the output directory
  std::string text;
};

// What a subcommand hands back to the driver: a JSON result summary, named
// assertions, and data files to write.
struct CommandOutput {
  json results = json::object();
  std::vector<Assertion> assertions;
  std::vector<DataFile> files;

  void check(std::string name, bool passed, std::string detail = {});
  void skip(std::string name, std::string detail);
  void add_file(std::string name, const CsvTable& table);
  bool passed() const;
};

struct VerifyOsssOptions {
  std::vector<std::size_t> n{10};
  std::vector<std::size_t> k;  // empty: n/2 for each n
  std::size_t suite_size = 200;
  std::size_t trees = 3;
  std::string constant = "20";
  std::vector<double> epsilons{0.1, 0.2, 0.3, 0.4, 0.5};
  std::string tau_variant = "standard";
};

struct CheckCouplingOptions {
  std::vector<std::size_t> n{4};
  std::vector<std::size_t> k;
  std::size_t events = 20;
  std::size_t trees = 3;
  std::string c1 = "1/4";
  std::string tau_variant = "standard";
  bool claim = true;
  std::size_t mc_samples = 0;
  std::size_t mc_n = 20;
  std::size_t mc_events = 3;
  bool correlation_search = false;
};

struct CheckRussoOptions {
  std::vector<std::size_t> n{6, 8, 10};
  std::size_t events = 10;
  std::vector<std::size_t> R{2};
};

struct LognOptions {
  std::vector<std::size_t> n{16, 32, 64, 128, 256, 512};
  std::size_t samples = 100000;
  std::size_t bracket_samples = 2000;
  std::size_t exact_bracket_max_n = 16;
  double max_bracket = 2.0;
  double min_r_squared = 0.9;
};

struct CrossingOptions {
  std::vector<std::size_t> R{2, 8, 16};
  std::size_t samples = 100000;
  std::vector<std::size_t> agreement_R{2, 4, 8, 16, 32};
  std::size_t agreement_samples = 100000;
  std::size_t exact_max_R = 4;
  double sigmas = 3.0;
};

struct ScalingOptions {
  std::vector<std::size_t> R{8, 16, 32, 64};
  std::size_t samples = 100000;
  double sigmas = 3.0;
  std::vector<std::size_t> revealment_R{8, 16, 32};
  std::size_t revealment_samples = 2000;
  std::size_t anchors = 0;  // 0: every anchor
  std::vector<std::size_t> osss_R{2, 8, 16};
  std::size_t osss_samples = 2000;
  std::size_t osss_batches = 20;
  double constant = 20.0;
  double osss_sigmas = 4.0;
};

struct OneArmOptions {
  std::vector<std::size_t> M{2, 4, 8, 16};
  std::size_t samples = 100000;
  double sigmas = 4.0;
};

CommandOutput verify_osss(const VerifyOsssOptions& o, const Common& c);
CommandOutput check_coupling(const CheckCouplingOptions& o, const Common& c);
CommandOutput check_russo(const CheckRussoOptions& o, const Common& c);
CommandOutput logn_demo(const LognOptions& o, const Common& c);
CommandOutput percolation_crossing(const CrossingOptions& o, const Common& c);
CommandOutput pivotal_scaling(const ScalingOptions& o, const Common& c);
CommandOutput one_arm(const OneArmOptions& o, const Common& c);

}  // namespace kofn::cli
