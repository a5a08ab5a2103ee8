#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kofn/coupling.hpp"
#include "kofn/encoding.hpp"
#include "kofn/errors.hpp"
#include "kofn/osss.hpp"
#include "kofn/percolation.hpp"
#include "kofn/pivotality.hpp"

namespace kofn::cli {

void CommandOutput::check(std::string name, bool passed, std::string detail) {
  while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
  assertions.push_back(Assertion{std::move(name), passed, false, std::move(detail)});
}

void CommandOutput::skip(std::string name, std::string detail) {
  assertions.push_back(Assertion{std::move(name), true, true, std::move(detail)});
}

void CommandOutput::add_file(std::string name, const CsvTable& table) {
  files.push_back(DataFile{std::move(name), table.text()});
}

bool CommandOutput::passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.passed; });
}

namespace {

std::string fmt(double x) { return format_double(x); }

std::vector<std::size_t> ks_for(std::size_t n, const std::vector<std::size_t>& ks) {
  if (ks.empty()) return {n / 2};
  for (std::size_t k : ks) {
    if (k > n) {
      throw DomainError("--k " + std::to_string(k) + " exceeds n = " + std::to_string(n));
    }
  }
  return ks;
}

void require_nonempty(const std::vector<std::size_t>& v, const char* flag) {
  if (v.empty()) throw DomainError(std::string(flag) + " needs at least one value");
}

void require_even(const std::vector<std::size_t>& v, const char* flag) {
  for (std::size_t x : v) {
    if (x == 0 || x % 2 != 0) {
      throw DomainError(std::string(flag) + " values must be even and positive, got " +
                        std::to_string(x));
    }
  }
}

void require_positive(std::size_t x, const char* flag) {
  if (x == 0) throw DomainError(std::string(flag) + " must be positive");
}

std::uint64_t sub_seed(const Common& c, std::uint64_t a, std::uint64_t b = 0) {
  return stream_seed(stream_seed(c.seed, a), b);
}

json ratio_json(const std::optional<Rational>& r) {
  if (!r) return "inf";
  return rational_json(*r);
}

// Site (x, y) of a box index.
std::string site_label(const TriangularBox& box, Element v) {
  return "(" + std::to_string(box.x_of(v)) + "," + std::to_string(box.y_of(v)) + ")";
}

}  // namespace

// --- verify-osss --------------------------------------------------------------

CommandOutput verify_osss(const VerifyOsssOptions& o, const Common& c) {
  require_nonempty(o.n, "--n");
  require_positive(o.suite_size, "--suite-size");
  require_positive(o.trees, "--trees");
  const Rational constant = parse_rational(o.constant);
  if (constant <= 0) throw DomainError("--constant must be positive");
  const TauVariant variant = parse_tau_variant(o.tau_variant);

  std::vector<SuiteAtN> suites;
  for (std::size_t n : o.n) {
    if (n == 0) throw DomainError("--n values must be positive");
    suites.push_back(SuiteAtN{n, ks_for(n, o.k), generated_event_suite(n, o.suite_size, sub_seed(c, 1, n)),
                              generated_tree_suite(n, o.trees, sub_seed(c, 2, n))});
  }
  const ConstantSearch search = search_constant(suites, o.epsilons, variant, c.workers);

  CsvTable table({"n", "k", "event", "tree", "lhs", "weighted_term", "average_term", "bracket",
                  "ratio", "ratio_decimal", "degenerate"});
  std::size_t violations = 0;
  for (const auto& row : search.rows) {
    const Rational bracket = row.weighted_term + row.average_term;
    if (row.lhs > constant * bracket) ++violations;
    table.row() << std::uint64_t{row.n} << std::uint64_t{row.k} << row.event << row.tree << row.lhs
                << row.weighted_term << row.average_term << bracket << ratio_string(row.ratio)
                << (row.ratio ? to_double(*row.ratio) : std::numeric_limits<double>::infinity())
                << row.degenerate;
  }
  CommandOutput out;
  out.add_file("osss.csv", table);

  json per_measure = json::array();
  for (const auto& cell : search.per_measure) {
    per_measure.push_back({{"n", cell.n}, {"k", cell.k}, {"instances", cell.instances},
                           {"max_ratio", ratio_json(cell.max_ratio)}});
  }
  json per_epsilon = json::array();
  for (const auto& cell : search.per_epsilon) {
    per_epsilon.push_back({{"epsilon", cell.epsilon}, {"instances", cell.instances},
                           {"max_ratio", cell.instances ? ratio_json(cell.max_ratio) : json(nullptr)}});
  }
  out.results = {{"instances", search.rows.size()},
                 {"constant", rational_json(constant)},
                 {"tau_variant", to_string(variant)},
                 {"global_max_ratio", search.rows.empty() ? json(nullptr) : ratio_json(search.global_max)},
                 {"global_max_ratio_decimal",
                  search.global_max ? to_double(*search.global_max) : std::numeric_limits<double>::infinity()},
                 {"per_measure", per_measure},
                 {"per_epsilon", per_epsilon}};
  out.check("osss_bound_holds", violations == 0 && search.holds_at(constant),
            std::to_string(violations) + " of " + std::to_string(search.rows.size()) +
                " instances exceed C = " + constant.get_str() + "; max ratio " +
                ratio_string(search.global_max));
  return out;
}

// --- check-coupling ---------------------------------------------------------------

CommandOutput check_coupling(const CheckCouplingOptions& o, const Common& c) {
  require_nonempty(o.n, "--n");
  require_positive(o.events, "--events");
  require_positive(o.trees, "--trees");
  const Rational c1 = parse_rational(o.c1);
  if (c1 <= 0) throw DomainError("--c1 must be positive");
  const TauVariant variant = parse_tau_variant(o.tau_variant);
  for (std::size_t n : o.n) {
    if (n == 0 || n > kCouplingExactMaxN) {
      throw DomainError("exact coupling checks need 1 <= n <= " + std::to_string(kCouplingExactMaxN) +
                        ", got " + std::to_string(n));
    }
  }

  CsvTable table({"n", "k", "event", "tree", "p_event", "lhs", "rhs", "term1", "term2",
                  "term1_bound", "marginal_exact", "independent_of_event",
                  "independent_of_transcript", "identity_holds", "term1_matches", "term1_bounded",
                  "claim_cells", "claim_mismatches"});
  std::size_t instances = 0, marginal_fail = 0, event_fail = 0, transcript_fail = 0,
              identity_fail = 0, term1_fail = 0, bound_fail = 0, claim_fail = 0, claim_cells = 0;
  for (std::size_t n : o.n) {
    const auto events = generated_event_suite(n, o.events, sub_seed(c, 1, n));
    const auto trees = generated_tree_suite(n, o.trees, sub_seed(c, 2, n));
    for (std::size_t k : ks_for(n, o.k)) {
      for (const auto& event : events) {
        for (const auto& tree : trees) {
          ++instances;
          const ZMarginalReport z = check_z_marginal(event, tree, n, k, variant);
          const TermIdentityReport ti = check_term_identity(event, tree, n, k, c1, variant);
          std::size_t cells = 0, mismatched = 0;
          if (o.claim) {
            for (std::size_t t = 0; t <= n; ++t) {
              const ClaimReport cr = check_claim_distributional_equality(event, tree, n, k, t, variant);
              cells += cr.cells;
              mismatched += cr.mismatched_cells;
            }
          }
          marginal_fail += !z.marginal_exact;
          event_fail += !z.independent_of_event;
          transcript_fail += !z.independent_of_transcript;
          identity_fail += !ti.identity_holds;
          term1_fail += !ti.term1_matches;
          bound_fail += !ti.term1_bounded;
          claim_fail += mismatched;
          claim_cells += cells;
          table.row() << std::uint64_t{n} << std::uint64_t{k} << event.name() << tree.name()
                      << ti.p_event << ti.lhs << ti.rhs << ti.term1 << ti.term2 << ti.term1_bound
                      << z.marginal_exact << z.independent_of_event << z.independent_of_transcript
                      << ti.identity_holds << ti.term1_matches << ti.term1_bounded
                      << std::uint64_t{cells} << std::uint64_t{mismatched};
        }
      }
    }
  }
  CommandOutput out;
  out.add_file("coupling.csv", table);
  const std::string of = " of " + std::to_string(instances) + " instances";
  out.check("z_marginal_exact", marginal_fail == 0, std::to_string(marginal_fail) + " failures" + of);
  out.check("z_independent_of_event", event_fail == 0, std::to_string(event_fail) + " failures" + of);
  out.check("z_independent_of_transcript", transcript_fail == 0,
            std::to_string(transcript_fail) + " failures" + of);
  out.check("decomposition_identity", identity_fail == 0, std::to_string(identity_fail) + " failures" + of);
  out.check("term1_equals_xy_form", term1_fail == 0, std::to_string(term1_fail) + " failures" + of);
  out.check("term1_bound", bound_fail == 0, std::to_string(bound_fail) + " failures" + of);
  if (o.claim) {
    out.check("claim_distributional_equality", claim_fail == 0,
              std::to_string(claim_fail) + " mismatched of " + std::to_string(claim_cells) + " cells");
  } else {
    out.skip("claim_distributional_equality", "disabled by --claim 0");
  }
  out.results = {{"instances", instances}, {"c1", rational_json(c1)},
                 {"tau_variant", to_string(variant)}, {"claim_cells", claim_cells}};

  if (o.mc_samples > 0) {
    CsvTable mc({"n", "k", "event", "tree", "rhs", "stderr", "reference", "reference_exact",
                 "paired_difference", "paired_stderr", "z", "samples", "seed"});
    const std::size_t n = o.mc_n;
    if (n < 2) throw DomainError("--mc-n must be at least 2");
    const auto events = generated_event_suite(n, o.mc_events, sub_seed(c, 3, n));
    const auto trees = generated_tree_suite(n, 1, sub_seed(c, 4, n));
    std::size_t failures = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::uint64_t seed = sub_seed(c, 5, i);
      const TermIdentityEstimate est = estimate_term_identity(
          events[i], trees.front(), n, n / 2, o.mc_samples, {seed, c.workers},
          to_double(c1), variant);
      failures += !est.passed();
      worst = std::max(worst, est.z_score);
      mc.row() << std::uint64_t{n} << std::uint64_t{n / 2} << est.event << est.tree << est.rhs.mean
               << est.rhs.std_error << est.reference << est.reference_exact
               << est.paired_difference.mean << est.paired_difference.std_error << est.z_score
               << std::uint64_t{o.mc_samples} << std::to_string(seed);
    }
    out.add_file("coupling_mc.csv", mc);
    out.check("decomposition_identity_mc", failures == 0,
              std::to_string(failures) + " of " + std::to_string(events.size()) +
                  " estimates beyond 4 sigma; worst z " + fmt(worst));
  }

  if (o.correlation_search) {
    std::vector<IncreasingEvent> pool;
    for (std::size_t n : o.n) {
      auto ev = generated_event_suite(n, o.events, sub_seed(c, 1, n));
      pool.insert(pool.end(), ev.begin(), ev.end());
    }
    json rows = json::array();
    std::size_t positive = 0;
    for (const auto& row : negative_correlation_search(pool, c1)) {
      positive += row.positively_correlated();
      rows.push_back({{"event", row.event}, {"n", row.n}, {"k", row.k},
                      {"joint", rational_json(row.joint)}, {"product", rational_json(row.product)},
                      {"positively_correlated", row.positively_correlated()}});
    }
    out.results["correlation_search"] = {{"rows", rows}, {"positively_correlated", positive}};
  }
  return out;
}

// --- check-russo --------------------------------------------------------------------

CommandOutput check_russo(const CheckRussoOptions& o, const Common& c) {
  CsvTable table({"source", "event", "n", "k", "lhs", "expected_pivotals", "rhs", "holds"});
  std::size_t generic = 0, generic_fail = 0, box = 0, box_fail = 0;
  for (std::size_t n : o.n) {
    if (n < 1 || n > 16) throw DomainError("--n values for the Russo check must lie in [1, 16]");
    for (const auto& event : generated_event_suite(n, o.events, sub_seed(c, 1, n))) {
      for (std::size_t k = 0; k < n; ++k) {
        const RussoReport r = russo_check(event, k);
        ++generic;
        generic_fail += !r.holds();
        table.row() << "generic" << r.event << std::uint64_t{n} << std::uint64_t{k} << r.lhs
                    << r.expected_pivotals << r.rhs << r.holds();
      }
    }
  }
  for (std::size_t R : o.R) {
    if (R < 1 || R > 4) throw DomainError("--R values for the Russo check must lie in [1, 4]");
    const TriangularBox b(R);
    const IncreasingEvent event = crossing_event(b);
    for (std::size_t k = 0; k < b.size(); ++k) {
      const RussoReport r = russo_check(event, k);
      ++box;
      box_fail += !r.holds();
      table.row() << "box" << r.event << std::uint64_t{b.size()} << std::uint64_t{k} << r.lhs
                  << r.expected_pivotals << r.rhs << r.holds();
    }
  }
  CommandOutput out;
  out.add_file("russo.csv", table);
  out.results = {{"generic_checks", generic}, {"box_checks", box}};
  if (generic) {
    out.check("russo_identity_generic", generic_fail == 0,
              std::to_string(generic_fail) + " of " + std::to_string(generic) + " (event, k) pairs fail");
  } else {
    out.skip("russo_identity_generic", "no generic events requested");
  }
  if (box) {
    out.check("russo_identity_box", box_fail == 0,
              std::to_string(box_fail) + " of " + std::to_string(box) + " (R, k) pairs fail");
  } else {
    out.skip("russo_identity_box", "no box sizes requested");
  }
  return out;
}

// --- logn-demo ------------------------------------------------------------------------

CommandOutput logn_demo(const LognOptions& o, const Common& c) {
  require_nonempty(o.n, "--n");
  require_even(o.n, "--n");
  require_positive(o.samples, "--samples");
  CsvTable table({"n", "sum", "stderr", "samples", "seed", "bracket", "bracket_stderr",
                  "bracket_engine"});
  CsvTable terms({"n", "t", "mean", "stderr"});
  std::vector<double> x, y;
  bool bracket_ok = true;
  double worst_bracket = 0.0;
  for (std::size_t n : o.n) {
    const std::uint64_t seed = sub_seed(c, 1, n);
    const LognEstimate est = logn_sum_estimate(n, o.samples, {seed, c.workers});
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(est.sum.mean);
    for (std::size_t t = 0; t < est.terms.size(); ++t) {
      terms.row() << std::uint64_t{n} << std::uint64_t{t + 1} << est.terms[t].mean
                  << est.terms[t].std_error;
    }
    // The same instance: A = {omega_{n-1} = 1}, T the identity order.
    const IncreasingEvent event = dictator(n, static_cast<Element>(n - 1));
    const DecisionTree tree = identity_order(n);
    const KOutOfN measure(n, n / 2);
    double bracket = 0.0, bracket_se = 0.0;
    std::string engine;
    if (n <= o.exact_bracket_max_n) {
      bracket = to_double(verify_osss_exact(event, tree, measure).bracket);
      engine = "exact";
    } else {
      const OsssEstimate mc =
          verify_osss_mc(event, tree, measure, std::max<std::size_t>(o.bracket_samples, 20),
                         {sub_seed(c, 2, n), c.workers});
      bracket = mc.bracket.mean;
      bracket_se = mc.bracket.std_error;
      engine = "mc";
    }
    worst_bracket = std::max(worst_bracket, bracket);
    bracket_ok = bracket_ok && bracket <= o.max_bracket;
    table.row() << std::uint64_t{n} << est.sum.mean << est.sum.std_error << std::uint64_t{o.samples}
                << std::to_string(seed) << bracket << bracket_se << engine;
  }
  CommandOutput out;
  out.add_file("logn.csv", table);
  out.add_file("logn_terms.csv", terms);
  out.check("bracket_bounded", bracket_ok,
            "largest bracket " + fmt(worst_bracket) + " against the bound " + fmt(o.max_bracket));
  if (x.size() >= 3) {
    const LinearFit fit = fit_line(x, y);
    const auto ci = fit.slope_interval(0.95);
    out.results = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared},
                   {"slope_ci", {ci.first, ci.second}}, {"residuals", fit.residuals}};
    out.check("logn_slope_positive", ci.first > 0.0,
              "slope " + fmt(fit.slope) + ", 95% CI [" + fmt(ci.first) + ", " + fmt(ci.second) + "]");
    out.check("logn_r_squared", fit.r_squared > o.min_r_squared,
              "R^2 " + fmt(fit.r_squared) + " against " + fmt(o.min_r_squared));
  } else {
    out.skip("logn_slope_positive", "needs at least three n values");
    out.skip("logn_r_squared", "needs at least three n values");
  }
  return out;
}

// --- percolation-crossing ------------------------------------------------------------

CommandOutput percolation_crossing(const CrossingOptions& o, const Common& c) {
  require_even(o.R, "--R");
  require_positive(o.samples, "--samples");
  CsvTable table({"R", "k", "engine", "estimate", "exact", "stderr", "samples", "seed"});
  CommandOutput out;
  bool symmetric = true;
  std::string detail;
  for (std::size_t R : o.R) {
    const std::size_t k = R * R / 2;
    if (R <= o.exact_max_R) {
      const Rational p = crossing_probability_exact(R, k);
      symmetric = symmetric && p == Rational(1, 2);
      table.row() << std::uint64_t{R} << std::uint64_t{k} << "exact" << to_double(p) << p << 0.0
                  << std::uint64_t{0} << "";
      detail += "R=" + std::to_string(R) + ": " + p.get_str() + "; ";
    } else {
      const std::uint64_t seed = sub_seed(c, 1, R);
      const Estimate p = crossing_probability_mc(R, k, o.samples, {seed, c.workers});
      symmetric = symmetric && p.within(0.5, o.sigmas);
      table.row() << std::uint64_t{R} << std::uint64_t{k} << "mc" << p.mean << "" << p.std_error
                  << std::uint64_t{o.samples} << std::to_string(seed);
      detail += "R=" + std::to_string(R) + ": z " + fmt(p.z_score(0.5)) + "; ";
    }
  }
  out.add_file("crossing.csv", table);
  out.check("crossing_symmetry", symmetric, detail);

  CsvTable agreement({"R", "k", "mode", "configurations", "anchors", "tree_mismatches",
                      "walk_mismatches", "duality_failures", "fallbacks", "seed"});
  std::size_t tree_bad = 0, walk_bad = 0, dual_bad = 0, fallbacks = 0, configurations = 0;
  for (std::size_t R : o.agreement_R) {
    if (R == 0) throw DomainError("--agreement-R values must be positive");
    const std::size_t k = R * R / 2;
    const bool exhaustive = R <= 2 || o.agreement_samples == 0;
    const std::uint64_t seed = sub_seed(c, 2, R);
    const AgreementReport r =
        exploration_agreement(R, k, exhaustive ? 0 : o.agreement_samples, {seed, c.workers});
    tree_bad += r.tree_mismatches;
    walk_bad += r.walk_mismatches;
    dual_bad += r.duality_failures;
    fallbacks += r.fallbacks;
    configurations += r.configurations;
    agreement.row() << std::uint64_t{R} << std::uint64_t{k} << (r.exhaustive ? "exhaustive" : "sampled")
                    << std::uint64_t{r.configurations} << std::uint64_t{r.anchors}
                    << std::uint64_t{r.tree_mismatches} << std::uint64_t{r.walk_mismatches}
                    << std::uint64_t{r.duality_failures} << std::uint64_t{r.fallbacks}
                    << (r.exhaustive ? std::string() : std::to_string(seed));
  }
  out.add_file("agreement.csv", agreement);
  if (!o.agreement_R.empty()) {
    const std::string of = " over " + std::to_string(configurations) + " configurations";
    out.check("exploration_matches_oracle", tree_bad == 0,
              std::to_string(tree_bad) + " tree decisions differ" + of);
    out.check("exploration_walks_match_segments", walk_bad == 0,
              std::to_string(walk_bad) + " walk answers differ" + of);
    out.check("walks_determine_event", fallbacks == 0,
              std::to_string(fallbacks) + " runs needed sites beyond the walks");
    out.check("duality_dichotomy", dual_bad == 0, std::to_string(dual_bad) + " failures" + of);
  }
  out.results = {{"agreement_configurations", configurations}};
  return out;
}

// --- pivotal-scaling --------------------------------------------------------------------

CommandOutput pivotal_scaling(const ScalingOptions& o, const Common& c) {
  require_even(o.R, "--R");
  require_even(o.revealment_R, "--revealment-R");
  require_even(o.osss_R, "--osss-R");
  require_positive(o.samples, "--samples");
  CommandOutput out;

  // E[N^0_R] and the fit.
  const PivotalScaling ps = pivotal_scaling_experiment(o.R, o.samples, {c.seed, c.workers});
  CsvTable table({"R", "k", "estimate", "stderr", "samples", "seed"});
  json derivative = json::array();
  for (const auto& row : ps.rows) {
    table.row() << std::uint64_t{row.R} << std::uint64_t{row.k} << row.pivotals.mean
                << row.pivotals.std_error << std::uint64_t{row.pivotals.samples}
                << std::to_string(row.seed);
    derivative.push_back({{"R", row.R}, {"estimate", 2.0 * row.pivotals.mean},
                          {"std_error", 2.0 * row.pivotals.std_error}});
  }
  out.add_file("pivotal_scaling.csv", table);
  double min_sep = std::numeric_limits<double>::infinity();
  for (double z : ps.separations) min_sep = std::min(min_sep, z);
  if (ps.rows.size() >= 2) {
    out.check("pivotal_strictly_increasing", ps.strictly_increasing, "");
    out.check("pivotal_separation", min_sep >= o.sigmas,
              "smallest consecutive separation " + fmt(min_sep) + " sigma");
  } else {
    out.skip("pivotal_strictly_increasing", "needs at least two R values");
    out.skip("pivotal_separation", "needs at least two R values");
  }
  if (ps.rows.size() >= 3) {
    out.check("pivotal_slope_positive", ps.slope_ci.first > 0.0,
              "slope " + fmt(ps.fit.slope) + ", 95% CI [" + fmt(ps.slope_ci.first) + ", " +
                  fmt(ps.slope_ci.second) + "]");
  } else {
    out.skip("pivotal_slope_positive", "needs at least three R values");
  }
  out.results["pivotal"] = {{"slope", ps.fit.slope},
                            {"intercept", ps.fit.intercept},
                            {"r_squared", ps.fit.r_squared},
                            {"slope_ci", {ps.slope_ci.first, ps.slope_ci.second}},
                            {"residuals", ps.fit.residuals},
                            {"separations", ps.separations},
                            {"discrete_derivative", derivative}};

  // Averaged revealment.
  CsvTable rev({"R", "samples", "anchors", "max_averaged", "stderr", "argmax", "corner_own_anchor",
                "corner_averaged", "seed"});
  std::vector<double> maxima;
  std::size_t mismatches = 0;
  for (std::size_t R : o.revealment_R) {
    std::vector<std::size_t> anchors;
    if (o.anchors > 0 && o.anchors < R) {
      for (std::size_t i = 0; i < o.anchors; ++i) anchors.push_back(i * R / o.anchors);
    }
    const std::uint64_t seed = sub_seed(c, 3, R);
    const RevealmentProfile p = revealment_profile(R, o.revealment_samples, {seed, c.workers}, anchors);
    const TriangularBox box(R);
    // The first site queried under the anchor at row 0 is the corner (R-1, 0).
    const Element corner = box.index(static_cast<int>(R) - 1, 0);
    maxima.push_back(p.max_averaged);
    mismatches += p.decision_mismatches;
    rev.row() << std::uint64_t{R} << std::uint64_t{o.revealment_samples}
              << std::uint64_t{p.anchors.size()} << p.max_averaged << p.argmax_std_error
              << site_label(box, p.argmax) << p.per_anchor.front()[corner]
              << p.averaged[corner].mean << std::to_string(seed);
  }
  out.add_file("revealment.csv", rev);
  if (!maxima.empty()) {
    bool decreasing = true;
    for (std::size_t i = 1; i < maxima.size(); ++i) decreasing = decreasing && maxima[i] < maxima[i - 1];
    const double top = *std::max_element(maxima.begin(), maxima.end());
    out.check("revealment_at_most_one", top <= 1.0, "largest " + fmt(top));
    if (maxima.size() >= 2) {
      std::string d;
      for (double m : maxima) d += fmt(m) + " ";
      out.check("revealment_decreasing", decreasing, "maxima " + d);
    } else {
      out.skip("revealment_decreasing", "needs at least two R values");
    }
    out.check("exploration_decisions", mismatches == 0,
              std::to_string(mismatches) + " decisions differ from the oracle");
  }

  // Anchor-averaged OSSS.
  CsvTable osss({"R", "engine", "anchor", "lhs", "weighted_term", "average_term", "bracket",
                 "bracket_stderr", "ratio", "ratio_stderr"});
  bool every = true, averaged = true;
  std::string detail;
  for (std::size_t R : o.osss_R) {
    AveragedOsssCheck chk;
    if (R <= 4) {
      chk = osss_averaged_bound_check_exact(R, Rational(o.constant));
      for (std::size_t a = 0; a < chk.anchors.size(); ++a) {
        const OsssReport& r = chk.per_anchor_exact[a];
        osss.row() << std::uint64_t{R} << "exact" << std::uint64_t{chk.anchors[a]} << r.lhs
                   << r.weighted_term << r.average_term << r.bracket << 0.0 << r.ratio_value() << 0.0;
      }
    } else {
      chk = osss_averaged_bound_check(R, o.osss_samples, {sub_seed(c, 4, R), c.workers}, o.constant,
                                      o.osss_sigmas, o.osss_batches);
      for (std::size_t a = 0; a < chk.anchors.size(); ++a) {
        const OsssEstimate& e = chk.per_anchor[a];
        osss.row() << std::uint64_t{R} << "mc" << std::uint64_t{chk.anchors[a]} << e.lhs.mean
                   << e.weighted_term.mean << e.average_term.mean << e.bracket.mean
                   << e.bracket.std_error << e.ratio.mean << e.ratio.std_error;
      }
    }
    every = every && chk.holds_every_anchor;
    averaged = averaged && chk.holds_averaged;
    detail += "R=" + std::to_string(R) + ": averaged ratio " + fmt(chk.averaged_ratio) + "; ";
  }
  out.add_file("osss_averaged.csv", osss);
  if (!o.osss_R.empty()) {
    out.check("osss_every_anchor", every, detail);
    out.check("osss_averaged", averaged, detail);
  }
  return out;
}

// --- one-arm ----------------------------------------------------------------------------

CommandOutput one_arm(const OneArmOptions& o, const Common& c) {
  require_nonempty(o.M, "--M");
  require_positive(o.samples, "--samples");
  CsvTable table({"M", "n", "k", "bernoulli", "bernoulli_stderr", "fixed_k", "fixed_k_stderr",
                  "samples", "seed"});
  CommandOutput out;
  bool bound = true, exact_ok = true, decreasing = true;
  double previous = 2.0;
  std::string detail;
  for (std::size_t M : o.M) {
    if (M == 0) throw DomainError("--M values must be positive");
    const std::uint64_t seed = sub_seed(c, 1, M);
    const OneArmEstimate e = one_arm_estimate(M, o.samples, {seed, c.workers});
    bound = bound && e.within_bound(o.sigmas);
    decreasing = decreasing && e.bernoulli.mean < previous;
    previous = e.bernoulli.mean;
    detail += "M=" + std::to_string(M) + ": " + fmt(e.fixed_k.mean) + " vs 2x" + fmt(e.bernoulli.mean) + "; ";
    table.row() << std::uint64_t{M} << std::uint64_t{e.n} << std::uint64_t{e.k} << e.bernoulli.mean
                << e.bernoulli.std_error << e.fixed_k.mean << e.fixed_k.std_error
                << std::uint64_t{o.samples} << std::to_string(seed);
    if (M == 1) {
      const auto [b, f] = one_arm_exact(1);
      exact_ok = e.bernoulli.within(to_double(b), o.sigmas) && e.fixed_k.within(to_double(f), o.sigmas);
      out.results["exact_M1"] = {{"bernoulli", rational_json(b)}, {"fixed_k", rational_json(f)}};
    }
  }
  out.add_file("one_arm.csv", table);
  out.check("fixed_k_at_most_twice_bernoulli", bound, detail);
  if (o.M.size() >= 2) {
    out.check("one_arm_decreasing", decreasing, "Bernoulli estimates in the order given");
  } else {
    out.skip("one_arm_decreasing", "needs at least two radii");
  }
  if (std::find(o.M.begin(), o.M.end(), 1) != o.M.end()) {
    out.check("one_arm_exact_M1", exact_ok, "estimates against exact enumeration");
  }
  return out;
}

}  // namespace kofn::cli
