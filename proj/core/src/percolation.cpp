#include "kofn/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "kofn/errors.hpp"
#include "kofn/pivotality.hpp"
#include "union_find.hpp"

namespace kofn {
namespace {

std::size_t half_occupied(std::size_t R) {
  if (R % 2 != 0) throw DomainError("needs even R (k = R^2/2), got R = " + std::to_string(R));
  return R * R / 2;
}

Estimate scaled(const Estimate& e, double factor) {
  return Estimate{e.mean * factor, e.std_error * std::abs(factor), e.samples};
}

// Right-column reach of left-touching occupied clusters, as prefix/suffix
// ORs: upper[j] for rows >= j, lower[j] for rows <= j.
void right_reach(const TriangularBox& box, const Configuration& omega, detail::UnionFind& uf,
                 std::vector<std::uint8_t>& touches_left, std::vector<std::uint8_t>& upper,
                 std::vector<std::uint8_t>& lower) {
  const auto n = static_cast<std::uint32_t>(box.size());
  const int R = static_cast<int>(box.side());
  uf.reset(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!omega[v]) continue;
    for (Element w : box.neighbors(v)) {
      if (w > v && omega[w]) uf.unite(v, w);
    }
  }
  touches_left.assign(n, 0);
  for (int y = 0; y < R; ++y) {
    const Element v = box.index(0, y);
    if (omega[v]) touches_left[uf.find(v)] = 1;
  }
  std::vector<std::uint8_t> reach(R);
  for (int y = 0; y < R; ++y) {
    const Element v = box.index(R - 1, y);
    reach[y] = omega[v] && touches_left[uf.find(v)];
  }
  upper.assign(R, 0);
  lower.assign(R, 0);
  for (int y = R - 1; y >= 0; --y) upper[y] = reach[y] || (y + 1 < R && upper[y + 1]);
  for (int y = 0; y < R; ++y) lower[y] = reach[y] || (y > 0 && lower[y - 1]);
}

struct AgreementTally {
  std::size_t configurations = 0;
  std::size_t tree_mismatches = 0;
  std::size_t walk_mismatches = 0;
  std::size_t duality_failures = 0;
  std::size_t fallbacks = 0;

  void merge(const AgreementTally& o) {
    configurations += o.configurations;
    tree_mismatches += o.tree_mismatches;
    walk_mismatches += o.walk_mismatches;
    duality_failures += o.duality_failures;
    fallbacks += o.fallbacks;
  }
};

class AgreementChecker {
 public:
  explicit AgreementChecker(const TriangularBox& box) : box_(box), event_(crossing_event(box)) {
    for (std::size_t j = 0; j < box.side(); ++j) trees_.push_back(exploration_tree(box, j));
  }

  void check(const Configuration& omega, AgreementTally& tally) {
    ++tally.configurations;
    const bool crossing = has_horizontal_crossing(box_, omega);
    if (crossing == has_vacant_vertical_crossing(box_, omega)) ++tally.duality_failures;
    right_reach(box_, omega, uf_, touches_left_, upper_, lower_);
    for (std::size_t j = 0; j < trees_.size(); ++j) {
      const Transcript t = run_tree(trees_[j], event_, omega);
      if (t.decision != crossing) ++tally.tree_mismatches;
      const ExplorationResult ex = explore(box_, j, omega);
      bool ok = ex.upper == static_cast<bool>(upper_[j]) && ex.decision == crossing;
      if (j >= 1 && !ex.upper) ok = ok && ex.lower && *ex.lower == static_cast<bool>(lower_[j]);
      if (!ok) ++tally.walk_mismatches;
      if (t.order.size() > ex.revealed.size() ||
          !std::equal(t.order.begin(), t.order.end(), ex.revealed.begin())) {
        ++tally.fallbacks;
      }
    }
  }

 private:
  const TriangularBox& box_;
  IncreasingEvent event_;
  std::vector<DecisionTree> trees_;
  detail::UnionFind uf_;
  std::vector<std::uint8_t> touches_left_, upper_, lower_;
};

// --- One-arm geometry ---------------------------------------------------------

// Rhombus |x|, |y| <= M around the origin; the event only looks at the
// hexagon of graph radius M inside it.
struct OneArmGeometry {
  std::size_t M = 0;
  std::size_t n = 0;
  Element origin = 0;
  std::vector<std::uint8_t> in_hexagon;
  std::vector<std::uint8_t> on_rim;  // graph distance exactly M
  std::vector<std::vector<Element>> neighbors;

  explicit OneArmGeometry(std::size_t m) : M(m) {
    if (M == 0) throw DomainError("one-arm radius must be M >= 1");
    const int r = static_cast<int>(M);
    const int side = 2 * r + 1;
    n = static_cast<std::size_t>(side) * side;
    in_hexagon.assign(n, 0);
    on_rim.assign(n, 0);
    neighbors.resize(n);
    auto id = [&](int x, int y) { return static_cast<Element>((x + r) + (y + r) * side); };
    auto dist = [](int x, int y) { return std::max({std::abs(x), std::abs(y), std::abs(x + y)}); };
    origin = id(0, 0);
    for (int y = -r; y <= r; ++y) {
      for (int x = -r; x <= r; ++x) {
        const int d = dist(x, y);
        if (d > r) continue;
        const Element v = id(x, y);
        in_hexagon[v] = 1;
        on_rim[v] = d == r;
        for (const auto& o : kHexDirections) {
          const int nx = x + o[0];
          const int ny = y + o[1];
          if (dist(nx, ny) <= r) neighbors[v].push_back(id(nx, ny));
        }
      }
    }
  }

  bool event(const Configuration& omega, std::vector<std::uint8_t>& seen,
             std::vector<Element>& stack) const {
    if (!omega[origin]) return false;
    seen.assign(n, 0);
    stack.assign(1, origin);
    seen[origin] = 1;
    while (!stack.empty()) {
      const Element v = stack.back();
      stack.pop_back();
      if (on_rim[v]) return true;
      for (Element w : neighbors[v]) {
        if (!seen[w] && omega[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return false;
  }
};

struct Hits {
  std::size_t hits = 0;
  std::size_t total = 0;
  void merge(const Hits& o) {
    hits += o.hits;
    total += o.total;
  }
  Estimate estimate() const { return proportion_estimate(hits, total); }
};

}  // namespace

RussoReport russo_check(const IncreasingEvent& event, std::size_t k, std::uint64_t cap) {
  const std::size_t n = event.size();
  if (k >= n) throw DomainError("the Russo identity needs k < n (P_{k+1,n} must exist)");
  const KOutOfN lower(n, k);
  const KOutOfN upper(n, k + 1);
  RussoReport r;
  r.event = event.name();
  r.n = n;
  r.k = k;
  r.lhs = probability_exact(event, upper, cap) - probability_exact(event, lower, cap);
  BigInt total = 0;
  lower.for_each(
      [&](const Configuration& omega) { total += count_zero_pivotals(event, omega); }, cap);
  r.expected_pivotals = make_rational(total, lower.support_size());
  r.rhs = r.expected_pivotals / Rational(static_cast<unsigned long>(n - k));
  r.rhs.canonicalize();
  return r;
}

Rational crossing_probability_exact(std::size_t R, std::size_t k, std::uint64_t cap) {
  const TriangularBox box(R);
  if (k > box.size()) throw DomainError("k exceeds the number of sites");
  return probability_exact(crossing_event(box), KOutOfN(box.size(), k), cap);
}

Estimate crossing_probability_mc(std::size_t R, std::size_t k, std::size_t samples,
                                 const ParallelOptions& parallel) {
  const TriangularBox box(R);
  if (k > box.size()) throw DomainError("k exceeds the number of sites");
  const KOutOfN measure(box.size(), k);
  return parallel_accumulate<Hits>(samples, parallel, [&](Rng& rng, std::size_t count) {
           Hits h;
           Configuration omega(box.size());
           std::vector<Element> scratch;
           for (std::size_t i = 0; i < count; ++i) {
             measure.sample_into(rng, omega, scratch);
             h.hits += has_horizontal_crossing(box, omega) ? 1 : 0;
           }
           h.total = count;
           return h;
         })
      .estimate();
}

Rational expected_pivotals_exact(std::size_t R, std::size_t k, std::uint64_t cap) {
  const TriangularBox box(R);
  if (k > box.size()) throw DomainError("k exceeds the number of sites");
  const KOutOfN measure(box.size(), k);
  BigInt total = 0;
  measure.for_each([&](const Configuration& omega) { total += count_zero_pivotal(box, omega); },
                   cap);
  return make_rational(total, measure.support_size());
}

Estimate expected_pivotals_mc(std::size_t R, std::size_t k, std::size_t samples,
                              const ParallelOptions& parallel) {
  const TriangularBox box(R);
  if (k > box.size()) throw DomainError("k exceeds the number of sites");
  const KOutOfN measure(box.size(), k);
  return parallel_accumulate<RunningStats>(samples, parallel, [&](Rng& rng, std::size_t count) {
           RunningStats s;
           Configuration omega(box.size());
           std::vector<Element> scratch;
           std::vector<std::uint8_t> flags;
           for (std::size_t i = 0; i < count; ++i) {
             measure.sample_into(rng, omega, scratch);
             zero_pivotal_flags(box, omega, flags);
             s.add(static_cast<double>(std::count(flags.begin(), flags.end(), 1)));
           }
           return s;
         })
      .estimate();
}

Estimate discrete_derivative(std::size_t R, std::size_t samples, const ParallelOptions& parallel) {
  const std::size_t k = half_occupied(R);
  const double n = static_cast<double>(R * R);
  return scaled(expected_pivotals_mc(R, k, samples, parallel), n / (n - static_cast<double>(k)));
}

Estimate discrete_derivative_direct(std::size_t R, std::size_t samples,
                                    const ParallelOptions& parallel) {
  const std::size_t k = half_occupied(R);
  const double n = static_cast<double>(R * R);
  const Estimate lo =
      crossing_probability_mc(R, k, samples, {stream_seed(parallel.seed, 0), parallel.workers});
  const Estimate hi =
      crossing_probability_mc(R, k + 1, samples, {stream_seed(parallel.seed, 1), parallel.workers});
  return Estimate{n * (hi.mean - lo.mean),
                  n * std::sqrt(lo.std_error * lo.std_error + hi.std_error * hi.std_error),
                  samples};
}

Rational discrete_derivative_exact(std::size_t R) {
  const std::size_t k = half_occupied(R);
  const std::size_t n = R * R;
  return expected_pivotals_exact(R, k) * make_rational(BigInt(static_cast<unsigned long>(n)),
                                                       BigInt(static_cast<unsigned long>(n - k)));
}

PivotalScaling pivotal_scaling_experiment(const std::vector<std::size_t>& radii,
                                          std::size_t samples, const ParallelOptions& parallel) {
  PivotalScaling out;
  for (std::size_t R : radii) {
    const std::size_t k = half_occupied(R);
    const std::uint64_t seed = stream_seed(parallel.seed, R);
    out.rows.push_back(
        PivotalRow{R, k, expected_pivotals_mc(R, k, samples, {seed, parallel.workers}), seed});
  }
  std::vector<double> x, y;
  bool positive = true;
  for (const auto& row : out.rows) {
    positive = positive && row.pivotals.mean > 0.0;
    x.push_back(std::log(static_cast<double>(row.R)));
    y.push_back(std::log(std::max(row.pivotals.mean, 1e-300)));
  }
  if (out.rows.size() >= 2 && positive) {
    out.fit = fit_line(x, y);
    out.slope_ci = out.fit.slope_interval(0.95);
  }
  out.strictly_increasing = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    const Estimate& a = out.rows[i - 1].pivotals;
    const Estimate& b = out.rows[i].pivotals;
    const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    const double diff = b.mean - a.mean;
    out.separations.push_back(se > 0.0 ? diff / se
                                       : (diff > 0 ? INFINITY : (diff < 0 ? -INFINITY : 0.0)));
    if (!(diff > 0.0)) out.strictly_increasing = false;
  }
  return out;
}

RevealmentProfile revealment_profile(std::size_t R, std::size_t samples,
                                     const ParallelOptions& parallel,
                                     std::vector<std::size_t> anchors) {
  const TriangularBox box(R);
  const std::size_t n = box.size();
  const std::size_t k = n / 2;
  if (anchors.empty()) {
    for (std::size_t j = 0; j < R; ++j) anchors.push_back(j);
  }
  std::vector<DecisionTree> trees;
  for (std::size_t j : anchors) trees.push_back(exploration_tree(box, j));
  const IncreasingEvent event = crossing_event(box);
  const KOutOfN measure(n, k);
  const std::size_t A = anchors.size();

  struct Tally {
    std::vector<double> sum, sum_sq;
    std::vector<std::uint64_t> per_anchor;
    std::size_t samples = 0;
    std::size_t mismatches = 0;
    void merge(const Tally& o) {
      for (std::size_t i = 0; i < sum.size(); ++i) {
        sum[i] += o.sum[i];
        sum_sq[i] += o.sum_sq[i];
      }
      for (std::size_t i = 0; i < per_anchor.size(); ++i) per_anchor[i] += o.per_anchor[i];
      samples += o.samples;
      mismatches += o.mismatches;
    }
  };

  const Tally tally = parallel_accumulate<Tally>(samples, parallel, [&](Rng& rng, std::size_t count) {
    Tally t;
    t.sum.assign(n, 0.0);
    t.sum_sq.assign(n, 0.0);
    t.per_anchor.assign(A * n, 0);
    Configuration omega(n);
    std::vector<Element> scratch;
    std::vector<std::uint32_t> hits(n);
    for (std::size_t i = 0; i < count; ++i) {
      measure.sample_into(rng, omega, scratch);
      const bool crossing = has_horizontal_crossing(box, omega);
      std::fill(hits.begin(), hits.end(), 0);
      for (std::size_t a = 0; a < A; ++a) {
        const Transcript tr = run_tree(trees[a], event, omega);
        if (tr.decision != crossing) ++t.mismatches;
        for (Element e : tr.order) {
          ++hits[e];
          ++t.per_anchor[a * n + e];
        }
      }
      for (std::size_t e = 0; e < n; ++e) {
        const double h = static_cast<double>(hits[e]);
        t.sum[e] += h;
        t.sum_sq[e] += h * h;
      }
    }
    t.samples = count;
    return t;
  });

  RevealmentProfile out;
  out.R = R;
  out.samples = samples;
  out.anchors = anchors;
  out.decision_mismatches = tally.mismatches;
  const double s = static_cast<double>(std::max<std::size_t>(samples, 1));
  out.per_anchor.assign(A, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t e = 0; e < n; ++e) {
      out.per_anchor[a][e] = static_cast<double>(tally.per_anchor[a * n + e]) / s;
    }
  }
  const double ad = static_cast<double>(A);
  for (std::size_t e = 0; e < n; ++e) {
    out.averaged.push_back(mean_estimate(tally.sum[e] / ad, tally.sum_sq[e] / (ad * ad), samples));
    if (e == 0 || out.averaged[e].mean > out.max_averaged) {
      out.max_averaged = out.averaged[e].mean;
      out.argmax = static_cast<Element>(e);
      out.argmax_std_error = out.averaged[e].std_error;
    }
  }
  return out;
}

AgreementReport exploration_agreement(std::size_t R, std::size_t k, std::size_t samples,
                                      const ParallelOptions& parallel) {
  const TriangularBox box(R);
  if (k > box.size()) throw DomainError("k exceeds the number of sites");
  const KOutOfN measure(box.size(), k);
  AgreementTally tally;
  if (samples == 0) {
    AgreementChecker checker(box);
    measure.for_each([&](const Configuration& omega) { checker.check(omega, tally); });
  } else {
    tally = parallel_accumulate<AgreementTally>(samples, parallel, [&](Rng& rng, std::size_t count) {
      AgreementTally t;
      AgreementChecker checker(box);
      Configuration omega(box.size());
      std::vector<Element> scratch;
      for (std::size_t i = 0; i < count; ++i) {
        measure.sample_into(rng, omega, scratch);
        checker.check(omega, t);
      }
      return t;
    });
  }
  AgreementReport r;
  r.R = R;
  r.configurations = tally.configurations;
  r.anchors = R;
  r.tree_mismatches = tally.tree_mismatches;
  r.walk_mismatches = tally.walk_mismatches;
  r.duality_failures = tally.duality_failures;
  r.fallbacks = tally.fallbacks;
  r.exhaustive = samples == 0;
  return r;
}

// --- One arm -------------------------------------------------------------------

bool OneArmEstimate::within_bound(double sigmas) const {
  const double se = std::sqrt(fixed_k.std_error * fixed_k.std_error +
                              4.0 * bernoulli.std_error * bernoulli.std_error);
  return fixed_k.mean <= 2.0 * bernoulli.mean + sigmas * se;
}

bool one_arm_event(std::size_t M, const Configuration& omega) {
  const OneArmGeometry g(M);
  if (omega.size() != g.n) throw DimensionError("configuration does not fit the (2M+1)^2 rhombus");
  std::vector<std::uint8_t> seen;
  std::vector<Element> stack;
  return g.event(omega, seen, stack);
}

OneArmEstimate one_arm_estimate(std::size_t M, std::size_t samples,
                                const ParallelOptions& parallel) {
  const OneArmGeometry g(M);
  OneArmEstimate out;
  out.M = M;
  out.n = g.n;
  out.k = (g.n + 1) / 2;
  const KOutOfN measure(g.n, out.k);
  out.bernoulli =
      parallel_accumulate<Hits>(samples, {stream_seed(parallel.seed, 0), parallel.workers},
                                [&](Rng& rng, std::size_t count) {
                                  Hits h;
                                  Configuration omega(g.n);
                                  std::vector<std::uint8_t> seen;
                                  std::vector<Element> stack;
                                  for (std::size_t i = 0; i < count; ++i) {
                                    std::uint64_t bits = 0;
                                    for (std::size_t e = 0; e < g.n; ++e) {
                                      if (e % 64 == 0) bits = rng();
                                      omega.set(e, (bits >> (e % 64)) & 1U);
                                    }
                                    h.hits += g.event(omega, seen, stack) ? 1 : 0;
                                  }
                                  h.total = count;
                                  return h;
                                })
          .estimate();
  out.fixed_k =
      parallel_accumulate<Hits>(samples, {stream_seed(parallel.seed, 1), parallel.workers},
                                [&](Rng& rng, std::size_t count) {
                                  Hits h;
                                  Configuration omega(g.n);
                                  std::vector<Element> scratch;
                                  std::vector<std::uint8_t> seen;
                                  std::vector<Element> stack;
                                  for (std::size_t i = 0; i < count; ++i) {
                                    measure.sample_into(rng, omega, scratch);
                                    h.hits += g.event(omega, seen, stack) ? 1 : 0;
                                  }
                                  h.total = count;
                                  return h;
                                })
          .estimate();
  return out;
}

std::pair<Rational, Rational> one_arm_exact(std::size_t M) {
  const OneArmGeometry g(M);
  if (g.n > 20) throw ResourceError("exact one-arm enumeration is limited to 20 sites (M = 1)");
  std::vector<std::uint8_t> seen;
  std::vector<Element> stack;
  std::uint64_t bernoulli = 0;
  Configuration omega(g.n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.n); ++mask) {
    for (std::size_t e = 0; e < g.n; ++e) omega.set(e, (mask >> e) & 1U);
    bernoulli += g.event(omega, seen, stack) ? 1 : 0;
  }
  const KOutOfN measure(g.n, (g.n + 1) / 2);
  std::uint64_t fixed = 0;
  measure.for_each([&](const Configuration& w) { fixed += g.event(w, seen, stack) ? 1 : 0; });
  Rational b(static_cast<unsigned long>(bernoulli), static_cast<unsigned long>(1) << g.n);
  b.canonicalize();
  return {b, make_rational(BigInt(static_cast<unsigned long>(fixed)), measure.support_size())};
}

// --- Anchor-averaged OSSS -------------------------------------------------------

AveragedOsssCheck osss_averaged_bound_check(std::size_t R, std::size_t samples,
                                            const ParallelOptions& parallel, double constant,
                                            double sigmas, std::size_t batches) {
  const std::size_t k = half_occupied(R);
  if (batches < 2) throw DomainError("Monte Carlo OSSS needs at least two batches");
  if (samples < batches) throw DomainError("Monte Carlo OSSS needs at least one sample per batch");
  const TriangularBox box(R);
  const std::size_t n = box.size();
  const KOutOfN measure(n, k);
  const IncreasingEvent event = crossing_event(box);
  std::vector<DecisionTree> trees;
  for (std::size_t j = 0; j < R; ++j) trees.push_back(exploration_tree(box, j));

  // per_batch[b][a]: influences are shared by every anchor of a batch.
  std::vector<std::vector<OsssBatch>> per_batch(batches);
  parallel_for_index(batches, parallel.workers, [&](std::size_t b) {
    Rng rng = make_stream(parallel.seed, b);
    const std::size_t m = worker_share(samples, static_cast<unsigned>(batches), static_cast<unsigned>(b));
    const double md = static_cast<double>(m);
    Configuration omega(n);
    std::vector<Element> scratch;
    std::vector<std::uint8_t> flags;
    std::vector<std::size_t> pivotal(n, 0);
    std::size_t in_a = 0;
    for (std::size_t i = 0; i < m; ++i) {
      measure.sample_into(rng, omega, scratch);
      if (has_horizontal_crossing(box, omega)) {
        ++in_a;
        continue;
      }
      zero_pivotal_flags(box, omega, flags);
      for (std::size_t e = 0; e < n; ++e) pivotal[e] += flags[e];
    }
    std::vector<std::vector<std::size_t>> revealed(R, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < m; ++i) {
      measure.sample_into(rng, omega, scratch);
      for (std::size_t a = 0; a < R; ++a) {
        for (Element e : run_tree(trees[a], event, omega).order) ++revealed[a][e];
      }
    }
    OsssBatch shared;
    shared.p_event = static_cast<double>(in_a) / md;
    shared.influence_samples = m;
    for (std::size_t e = 0; e < n; ++e) shared.influence.push_back(static_cast<double>(pivotal[e]) / md);
    for (std::size_t a = 0; a < R; ++a) {
      OsssBatch batch = shared;
      for (std::size_t e = 0; e < n; ++e) batch.revealment.push_back(static_cast<double>(revealed[a][e]) / md);
      per_batch[b].push_back(std::move(batch));
    }
  });

  AveragedOsssCheck out;
  out.R = R;
  out.samples = samples;
  out.lhs = 0.25;
  out.holds_every_anchor = true;
  for (std::size_t a = 0; a < R; ++a) {
    out.anchors.push_back(a);
    std::vector<OsssBatch> column;
    for (const auto& row : per_batch) column.push_back(row[a]);
    OsssEstimate est = assemble_osss_estimate(column, 0.25);
    est.event = event.name();
    est.tree = trees[a].name();
    est.n = n;
    est.k = k;
    out.holds_every_anchor = out.holds_every_anchor && est.holds_at(constant, sigmas);
    out.per_anchor.push_back(std::move(est));
  }
  // Averaging the per-anchor inequalities: 1/4 <= C * mean_a bracket_a.
  RunningStats averaged;
  for (const auto& row : per_batch) {
    double total = 0.0;
    for (const auto& batch : row) {
      double w = 0.0, isum = 0.0, dsum = 0.0;
      for (std::size_t e = 0; e < n; ++e) {
        w += batch.influence[e] * batch.revealment[e];
        isum += batch.influence[e];
        dsum += batch.revealment[e];
      }
      total += w + isum * dsum / static_cast<double>(n);
    }
    averaged.add(total / static_cast<double>(R));
  }
  const Estimate bracket = averaged.estimate();
  out.averaged_bracket = bracket.mean;
  if (bracket.mean > 0.0) {
    out.averaged_ratio = out.lhs / bracket.mean;
    out.averaged_ratio_std_error = out.lhs * bracket.std_error / (bracket.mean * bracket.mean);
  } else {
    out.averaged_ratio = INFINITY;
  }
  out.holds_averaged = out.averaged_ratio <= constant + sigmas * out.averaged_ratio_std_error;
  return out;
}

AveragedOsssCheck osss_averaged_bound_check_exact(std::size_t R, const Rational& constant) {
  const std::size_t k = half_occupied(R);
  const TriangularBox box(R);
  const KOutOfN measure(box.size(), k);
  const IncreasingEvent event = crossing_event(box);
  AveragedOsssCheck out;
  out.R = R;
  out.exact = true;
  out.holds_every_anchor = true;
  Rational lhs = 0;
  Rational bracket_sum = 0;
  for (std::size_t j = 0; j < R; ++j) {
    out.anchors.push_back(j);
    OsssReport rep = verify_osss_exact(event, exploration_tree(box, j), measure);
    out.holds_every_anchor = out.holds_every_anchor && rep.holds_at(constant);
    lhs = rep.lhs;
    bracket_sum += rep.bracket;
    out.per_anchor_exact.push_back(std::move(rep));
  }
  const Rational averaged = bracket_sum / Rational(static_cast<unsigned long>(R));
  out.lhs = to_double(lhs);
  out.averaged_bracket = to_double(averaged);
  out.averaged_ratio = averaged > 0 ? to_double(Rational(lhs / averaged)) : INFINITY;
  out.holds_averaged = lhs <= constant * averaged;
  return out;
}

}  // namespace kofn
