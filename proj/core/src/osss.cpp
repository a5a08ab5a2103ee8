#include "kofn/osss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kofn/errors.hpp"
#include "kofn/pivotality.hpp"

namespace kofn {
namespace {

std::optional<Rational> ratio_of(const Rational& lhs, const Rational& bracket) {
  if (bracket == 0) {
    if (lhs == 0) return Rational(0);
    return std::nullopt;
  }
  return Rational(lhs / bracket);
}

// a < b on extended ratios (nullopt = +inf).
bool ratio_less(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

Estimate batch_estimate(const std::vector<double>& values) {
  RunningStats s;
  for (double v : values) s.add(v);
  return s.estimate();
}

}  // namespace

double OsssReport::ratio_value() const {
  return ratio ? to_double(*ratio) : std::numeric_limits<double>::infinity();
}

OsssReport assemble_osss_report(const IncreasingEvent& event, const DecisionTree& tree,
                                const KOutOfN& measure, const Rational& p_event,
                                std::vector<Rational> influences, ExactRevealments revealments,
                                TauVariant variant) {
  OsssReport r;
  r.event = event.name();
  r.tree = tree.name();
  r.n = measure.n();
  r.k = measure.k();
  r.variant = variant;
  r.p_event = p_event;
  r.lhs = p_event * (1 - p_event);
  r.degenerate = p_event == 0 || p_event == 1;
  r.weighted_term = 0;
  Rational influence_sum = 0;
  for (std::size_t e = 0; e < influences.size(); ++e) {
    r.weighted_term += influences[e] * revealments.delta[e];
    influence_sum += influences[e];
  }
  r.average_term = influence_sum * revealments.average;
  r.bracket = r.weighted_term + r.average_term;
  r.ratio = ratio_of(r.lhs, r.bracket);
  r.influences = std::move(influences);
  r.revealments = std::move(revealments);
  return r;
}

OsssReport verify_osss_exact(const IncreasingEvent& event, const DecisionTree& tree,
                             const KOutOfN& measure, TauVariant variant, std::uint64_t cap) {
  if (event.size() != measure.n() || tree.size() != measure.n()) {
    throw DimensionError("event, tree and measure sizes must agree");
  }
  return assemble_osss_report(event, tree, measure, probability_exact(event, measure, cap),
                              influences_exact(event, measure, cap),
                              revealments_exact(tree, event, measure, variant, cap), variant);
}

OsssEstimate assemble_osss_estimate(const std::vector<OsssBatch>& batches,
                                    std::optional<double> exact_lhs) {
  if (batches.empty()) throw DomainError("OSSS estimate needs at least one batch");
  const std::size_t n = batches.front().influence.size();
  std::vector<double> p, lhs, weighted, average, bracket;
  for (const auto& b : batches) {
    if (b.influence.size() != n || b.revealment.size() != n) {
      throw DimensionError("OSSS batches must share one ground set");
    }
    double w = 0.0;
    double isum = 0.0;
    double dsum = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
      w += b.influence[e] * b.revealment[e];
      isum += b.influence[e];
      dsum += b.revealment[e];
    }
    const double a = isum * dsum / static_cast<double>(n);
    const double m = static_cast<double>(b.influence_samples);
    // p(1-p) m/(m-1) is unbiased for P(A)(1-P(A)).
    const double l = exact_lhs ? *exact_lhs
                               : (m > 1 ? b.p_event * (1 - b.p_event) * m / (m - 1) : 0.0);
    p.push_back(b.p_event);
    lhs.push_back(l);
    weighted.push_back(w);
    average.push_back(a);
    bracket.push_back(w + a);
  }
  OsssEstimate r;
  r.batches = batches.size();
  for (const auto& b : batches) r.samples += b.influence_samples;
  r.p_event = batch_estimate(p);
  r.lhs = batch_estimate(lhs);
  r.weighted_term = batch_estimate(weighted);
  r.average_term = batch_estimate(average);
  r.bracket = batch_estimate(bracket);
  r.ratio.samples = batches.size();
  if (r.bracket.mean <= 0.0) {
    r.ratio.mean = r.lhs.mean > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return r;
  }
  const double ratio = r.lhs.mean / r.bracket.mean;
  double cov = 0.0;
  const std::size_t nb = batches.size();
  if (nb > 1) {
    for (std::size_t i = 0; i < nb; ++i) {
      cov += (lhs[i] - r.lhs.mean) * (bracket[i] - r.bracket.mean);
    }
    cov /= static_cast<double>(nb - 1) * static_cast<double>(nb);  // covariance of the means
  }
  const double var_l = r.lhs.std_error * r.lhs.std_error;
  const double var_b = r.bracket.std_error * r.bracket.std_error;
  double var = (var_l + ratio * ratio * var_b - 2 * ratio * cov) / (r.bracket.mean * r.bracket.mean);
  r.ratio.mean = ratio;
  r.ratio.std_error = std::sqrt(std::max(var, 0.0));
  return r;
}

OsssEstimate verify_osss_mc(const IncreasingEvent& event, const DecisionTree& tree,
                            const KOutOfN& measure, std::size_t samples,
                            const ParallelOptions& parallel, std::size_t batches,
                            TauVariant variant) {
  const std::size_t n = measure.n();
  if (event.size() != n || tree.size() != n) {
    throw DimensionError("event, tree and measure sizes must agree");
  }
  if (batches < 2) throw DomainError("Monte Carlo OSSS needs at least two batches");
  if (samples < batches) throw DomainError("Monte Carlo OSSS needs at least one sample per batch");
  std::vector<OsssBatch> out(batches);
  parallel_for_index(batches, parallel.workers, [&](std::size_t b) {
    Rng rng = make_stream(parallel.seed, b);
    const std::size_t m = worker_share(samples, static_cast<unsigned>(batches), static_cast<unsigned>(b));
    OsssBatch batch;
    batch.influence_samples = m;
    std::vector<std::size_t> hits(n, 0);
    std::size_t in_a = 0;
    Configuration omega(n);
    std::vector<Element> scratch;
    for (std::size_t i = 0; i < m; ++i) {
      measure.sample_into(rng, omega, scratch);
      if (event.contains(omega)) {
        ++in_a;
        continue;
      }
      for (std::size_t e = 0; e < n; ++e) {
        if (omega[e]) continue;
        omega.set(e, true);
        if (event.contains(omega)) ++hits[e];
        omega.set(e, false);
      }
    }
    std::vector<std::size_t> revealed(n, 0);
    for (std::size_t i = 0; i < m; ++i) {
      measure.sample_into(rng, omega, scratch);
      const Transcript t = run_tree(tree, event, omega, variant);
      for (Element e : t.order) ++revealed[e];
    }
    const double md = static_cast<double>(m);
    batch.p_event = static_cast<double>(in_a) / md;
    for (std::size_t e = 0; e < n; ++e) {
      batch.influence.push_back(static_cast<double>(hits[e]) / md);
      batch.revealment.push_back(static_cast<double>(revealed[e]) / md);
    }
    out[b] = std::move(batch);
  });
  OsssEstimate r = assemble_osss_estimate(out);
  r.event = event.name();
  r.tree = tree.name();
  r.n = n;
  r.k = measure.k();
  return r;
}

bool ConstantSearch::holds_at(const Rational& constant) const {
  for (const auto& row : rows) {
    if (row.lhs > constant * (row.weighted_term + row.average_term)) return false;
  }
  return true;
}

ConstantSearch search_constant(const std::vector<SuiteAtN>& suites,
                               const std::vector<double>& epsilons, TauVariant variant,
                               unsigned workers, std::uint64_t cap) {
  struct Job {
    const SuiteAtN* suite;
    std::size_t k;
    std::size_t event;
  };
  std::vector<Job> jobs;
  for (const auto& s : suites) {
    for (const auto& e : s.events) {
      if (e.size() != s.n) throw DimensionError("suite event on the wrong ground set");
    }
    for (const auto& t : s.trees) {
      if (t.size() != s.n) throw DimensionError("suite tree on the wrong ground set");
    }
    for (std::size_t k : s.ks) {
      if (k > s.n) throw DomainError("suite measure needs k <= n");
      for (std::size_t i = 0; i < s.events.size(); ++i) jobs.push_back({&s, k, i});
    }
  }
  // One job per (n, k, event): influences are shared by the trees.
  std::vector<std::vector<OsssRow>> results(jobs.size());
  parallel_for_index(jobs.size(), workers, [&](std::size_t j) {
    const Job& job = jobs[j];
    const KOutOfN measure(job.suite->n, job.k);
    const IncreasingEvent& event = job.suite->events[job.event];
    const Rational p = probability_exact(event, measure, cap);
    const auto infl = influences_exact(event, measure, cap);
    for (const auto& tree : job.suite->trees) {
      const OsssReport rep = assemble_osss_report(
          event, tree, measure, p, infl, revealments_exact(tree, event, measure, variant, cap),
          variant);
      results[j].push_back(OsssRow{rep.event, rep.tree, rep.n, rep.k, rep.lhs, rep.weighted_term,
                                   rep.average_term, rep.ratio, rep.degenerate});
    }
  });

  ConstantSearch out;
  for (auto& r : results) {
    for (auto& row : r) out.rows.push_back(std::move(row));
  }
  bool first = true;
  for (const auto& row : out.rows) {
    auto cell = std::find_if(out.per_measure.begin(), out.per_measure.end(),
                             [&](const ConstantCell& c) { return c.n == row.n && c.k == row.k; });
    if (cell == out.per_measure.end()) {
      out.per_measure.push_back(ConstantCell{row.n, row.k, row.ratio, 0});
      cell = out.per_measure.end() - 1;
    } else if (ratio_less(cell->max_ratio, row.ratio)) {
      cell->max_ratio = row.ratio;
    }
    ++cell->instances;
    if (first || ratio_less(out.global_max, row.ratio)) out.global_max = row.ratio;
    first = false;
  }
  out.infinite = !out.rows.empty() && !out.global_max;
  for (double eps : epsilons) {
    EpsilonCell cell;
    cell.epsilon = eps;
    bool any = false;
    for (const auto& row : out.rows) {
      const double lo = eps * static_cast<double>(row.n);
      const double hi = (1.0 - eps) * static_cast<double>(row.n);
      const double k = static_cast<double>(row.k);
      if (k + 1e-12 < lo || k - 1e-12 > hi) continue;
      if (!any || ratio_less(cell.max_ratio, row.ratio)) cell.max_ratio = row.ratio;
      any = true;
      ++cell.instances;
    }
    out.per_epsilon.push_back(cell);
  }
  return out;
}

std::string ratio_string(const std::optional<Rational>& ratio) {
  return ratio ? ratio->get_str() : std::string("inf");
}

}  // namespace kofn
