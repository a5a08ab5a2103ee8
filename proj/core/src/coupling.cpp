#include "kofn/coupling.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>

#include "kofn/errors.hpp"
#include "kofn/pivotality.hpp"

namespace kofn {
namespace {

std::uint64_t factorial(std::size_t m) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= m; ++i) f *= i;
  return f;
}

// Applies steps [0, t) of the transcript to X.
Configuration z_state(const Configuration& x, const Configuration& y, const Matching& sigma,
                      const Transcript& transcript, std::size_t t) {
  Configuration z = x;
  const std::size_t steps = std::min(t, transcript.tau);
  for (std::size_t j = 0; j < steps; ++j) {
    const Element e = transcript.order[j];
    const Element f = sigma(e);
    z.set(e, y[e]);
    z.set(f, y[f]);
  }
  return z;
}

void check_exact_size(std::size_t n, std::size_t k, std::size_t max_n) {
  if (k > n) throw DomainError("coupling checks need 0 <= k <= n");
  if (n > max_n) {
    throw ResourceError("matching-summed exact check at n=" + std::to_string(n) +
                        " exceeds the limit n <= " + std::to_string(max_n));
  }
}

void check_instance(const IncreasingEvent& event, const DecisionTree& tree, std::size_t n) {
  if (event.size() != n || tree.size() != n) {
    throw DimensionError("event and tree must live on the same n as the measure");
  }
}

// Omega_{k,n} with tree transcripts on every X; matchings of (X, Y) get
// integer weight h!/(d/2)! so every (X, Y, sigma) has weight over the common
// denominator binom(n,k)^2 * h!, h = min(k, n-k).
struct ExactSpace {
  std::vector<Configuration> omegas;
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> index;
  std::vector<Transcript> transcripts;
  std::uint64_t h_factorial = 1;

  ExactSpace(const IncreasingEvent& event, const DecisionTree& tree, std::size_t n,
             std::size_t k, TauVariant variant) {
    KOutOfN measure(n, k);
    auto en = measure.enumerate();
    for (const auto& omega : en) {
      index.emplace(omega, omegas.size());
      omegas.push_back(omega);
      transcripts.push_back(run_tree(tree, event, omega, variant));
    }
    h_factorial = factorial(std::min(k, n - k));
  }

  BigInt total_weight() const {
    return BigInt(static_cast<unsigned long>(omegas.size())) *
           BigInt(static_cast<unsigned long>(omegas.size())) *
           BigInt(static_cast<unsigned long>(h_factorial));
  }

  template <class Visit>
  void for_each(Visit visit) const {
    for (std::size_t xi = 0; xi < omegas.size(); ++xi) {
      for (std::size_t yi = 0; yi < omegas.size(); ++yi) {
        const auto matchings = all_matchings(omegas[xi], omegas[yi]);
        const std::uint64_t w = h_factorial / matchings.size();
        for (const auto& sigma : matchings) visit(xi, yi, sigma, w);
      }
    }
  }
};

std::string transcript_key(const Transcript& t, std::size_t steps) {
  std::string key;
  for (std::size_t j = 0; j < steps; ++j) {
    key += std::to_string(t.order[j]);
    key += t.values[j] ? '+' : '-';
  }
  return key;
}

}  // namespace

DisagreementPoints disagreement_points(const Configuration& x, const Configuration& y) {
  if (x.size() != y.size()) throw DimensionError("disagreement points need equal lengths");
  if (x.ones() != y.ones()) {
    throw DomainError("matchings need equal weights (|x|=" + std::to_string(x.ones()) +
                      ", |y|=" + std::to_string(y.ones()) + ")");
  }
  DisagreementPoints p;
  for (std::size_t e = 0; e < x.size(); ++e) {
    if (x[e] && !y[e]) p.one_zero.push_back(static_cast<Element>(e));
    if (!x[e] && y[e]) p.zero_one.push_back(static_cast<Element>(e));
  }
  return p;
}

Matching::Matching(std::size_t n, const DisagreementPoints& points,
                   std::span<const Element> partner)
    : map_(n) {
  if (partner.size() != points.one_zero.size() || points.one_zero.size() != points.zero_one.size()) {
    throw DomainError("a matching pairs every (1,0) point with one (0,1) point");
  }
  std::iota(map_.begin(), map_.end(), Element{0});
  for (std::size_t i = 0; i < partner.size(); ++i) {
    const Element a = points.one_zero[i];
    const Element b = partner[i];
    if (a >= n || b >= n) throw IndexError("matching element outside [0, n)");
    map_[a] = b;
    map_[b] = a;
  }
}

Matching Matching::identity(std::size_t n) {
  Matching m;
  m.map_.resize(n);
  std::iota(m.map_.begin(), m.map_.end(), Element{0});
  return m;
}

bool Matching::valid_for(const Configuration& x, const Configuration& y) const {
  if (x.size() != map_.size() || y.size() != map_.size() || x.ones() != y.ones()) return false;
  for (std::size_t e = 0; e < map_.size(); ++e) {
    const Element f = map_[e];
    if (f >= map_.size() || map_[f] != e) return false;
    const bool agree = x[e] == y[e];
    if (agree != (f == e)) return false;
    if (!agree) {
      // (1,0) pairs with (0,1).
      if (x[f] == y[f] || x[e] == x[f]) return false;
    }
  }
  return true;
}

Matching uniform_matching(const Configuration& x, const Configuration& y, Rng& rng) {
  const DisagreementPoints p = disagreement_points(x, y);
  std::vector<Element> partner = p.zero_one;
  for (std::size_t i = 0; i + 1 < partner.size(); ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, partner.size() - i));
    std::swap(partner[i], partner[j]);
  }
  return Matching(x.size(), p, partner);
}

std::vector<Matching> all_matchings(const Configuration& x, const Configuration& y) {
  const DisagreementPoints p = disagreement_points(x, y);
  std::vector<Element> partner = p.zero_one;
  std::vector<Matching> out;
  do {
    out.emplace_back(x.size(), p, partner);
  } while (std::next_permutation(partner.begin(), partner.end()));
  return out;
}

ZSequence build_z_sequence(const Configuration& x, const Configuration& y,
                           const Matching& sigma, const DecisionTree& tree,
                           const IncreasingEvent& event, TauVariant variant) {
  if (!sigma.valid_for(x, y)) throw DomainError("matching is not valid for (X, Y)");
  ZSequence z;
  z.transcript = run_tree(tree, event, x, variant);
  const std::size_t n = x.size();
  z.states.reserve(n + 1);
  z.states.push_back(x);
  for (std::size_t j = 1; j <= n; ++j) {
    Configuration next = z.states.back();
    if (j <= z.transcript.tau) {
      const Element e = z.transcript.order[j - 1];
      const Element f = sigma(e);
      next.set(e, y[e]);
      next.set(f, y[f]);
    }
    z.states.push_back(std::move(next));
  }
  return z;
}

bool check_z_structure(const Configuration& x, const Configuration& y, const Matching& sigma,
                       const ZSequence& z) {
  const std::size_t n = x.size();
  const std::size_t tau = z.transcript.tau;
  if (z.states.size() != n + 1 || z.states[0] != x) return false;
  std::vector<std::uint8_t> touched(n, 0);
  for (std::size_t j = 0; j <= n; ++j) {
    if (j >= 1 && j <= tau) {
      const Element e = z.transcript.order[j - 1];
      touched[e] = 1;
      touched[sigma(e)] = 1;
    }
    const Configuration& s = z.states[j];
    if (s.ones() != x.ones()) return false;
    if (j >= tau && s != z.states[tau]) return false;
    for (std::size_t f = 0; f < n; ++f) {
      if (s[f] != (touched[f] ? y[f] : x[f])) return false;
    }
  }
  return true;
}

ZMarginalReport check_z_marginal(const IncreasingEvent& event, const DecisionTree& tree,
                                 std::size_t n, std::size_t k, TauVariant variant,
                                 std::size_t max_n) {
  check_exact_size(n, k, max_n);
  check_instance(event, tree, n);
  const ExactSpace space(event, tree, n, k, variant);
  const std::size_t size = space.omegas.size();
  std::vector<BigInt> z_count(size, 0);
  std::vector<BigInt> z_count_in_a(size, 0);
  std::map<std::string, std::vector<BigInt>> by_transcript;
  std::map<std::string, BigInt> transcript_weight;
  BigInt in_a = 0;
  std::size_t terms = 0;
  space.for_each([&](std::size_t xi, std::size_t yi, const Matching& sigma, std::uint64_t w) {
    const Transcript& t = space.transcripts[xi];
    const Configuration z = z_state(space.omegas[xi], space.omegas[yi], sigma, t, n);
    const std::size_t zi = space.index.at(z);
    const BigInt bw(static_cast<unsigned long>(w));
    z_count[zi] += bw;
    if (t.decision) {
      z_count_in_a[zi] += bw;
      in_a += bw;
    }
    const std::string key = transcript_key(t, t.tau);
    auto& row = by_transcript[key];
    if (row.empty()) row.assign(size, 0);
    row[zi] += bw;
    transcript_weight[key] += bw;
    ++terms;
  });

  ZMarginalReport r;
  r.event = event.name();
  r.tree = tree.name();
  r.n = n;
  r.k = k;
  r.support = space.omegas;
  r.weighted_terms = terms;
  const BigInt total = space.total_weight();
  r.p_event = make_rational(in_a, total);
  const Rational uniform = make_rational(BigInt(1), BigInt(static_cast<unsigned long>(size)));
  r.marginal_exact = true;
  r.independent_of_event = true;
  for (std::size_t i = 0; i < size; ++i) {
    r.marginal.push_back(make_rational(z_count[i], total));
    r.joint_in_a.push_back(make_rational(z_count_in_a[i], total));
    if (r.marginal.back() != uniform) r.marginal_exact = false;
    if (r.joint_in_a.back() != r.p_event * r.marginal.back()) r.independent_of_event = false;
  }
  r.independent_of_transcript = true;
  for (const auto& [key, row] : by_transcript) {
    const BigInt& kw = transcript_weight[key];
    for (std::size_t i = 0; i < size; ++i) {
      // P(key, z) * total == P(key) * P(z) * total, cross-multiplied.
      if (row[i] * total != kw * z_count[i]) r.independent_of_transcript = false;
    }
  }
  return r;
}

TermIdentityReport check_term_identity(const IncreasingEvent& event, const DecisionTree& tree,
                                       std::size_t n, std::size_t k, const Rational& c1,
                                       TauVariant variant, std::size_t max_n) {
  check_exact_size(n, k, max_n);
  check_instance(event, tree, n);
  const ExactSpace space(event, tree, n, k, variant);
  const Rational threshold = c1 * Rational(static_cast<long>(n));
  BigInt in_a = 0;
  BigInt one_z_near = 0;
  BigInt one_z_far = 0;
  BigInt one_y_near = 0;
  BigInt near = 0;
  space.for_each([&](std::size_t xi, std::size_t yi, const Matching& sigma, std::uint64_t w) {
    const Configuration& x = space.omegas[xi];
    const Configuration& y = space.omegas[yi];
    const Transcript& t = space.transcripts[xi];
    const BigInt bw(static_cast<unsigned long>(w));
    const bool x_in = t.decision;
    const bool y_in = space.transcripts[yi].decision;
    const bool z_in = event.contains(z_state(x, y, sigma, t, n));
    const bool is_near = Rational(static_cast<long>(x.hamming_distance(y))) < threshold;
    if (x_in) in_a += bw;
    if (is_near) near += bw;
    if (x_in != z_in) (is_near ? one_z_near : one_z_far) += bw;
    if (x_in != y_in && is_near) one_y_near += bw;
  });
  const BigInt total = space.total_weight();
  TermIdentityReport r;
  r.event = event.name();
  r.tree = tree.name();
  r.n = n;
  r.k = k;
  r.c1 = c1;
  r.p_event = make_rational(in_a, total);
  r.lhs = 2 * r.p_event * (1 - r.p_event);
  r.term1 = make_rational(one_z_near, total);
  r.term2 = make_rational(one_z_far, total);
  r.rhs = r.term1 + r.term2;
  r.term1_via_y = make_rational(one_y_near, total);
  r.term1_bound = 4 * r.p_event * (1 - r.p_event) * make_rational(near, total);
  r.identity_holds = r.lhs == r.rhs;
  r.term1_matches = r.term1 == r.term1_via_y;
  r.term1_bounded = r.term1 <= r.term1_bound;
  return r;
}

bool TermIdentityEstimate::passed(double sigmas) const { return z_score <= sigmas; }

namespace {

struct TermAccumulator {
  RunningStats rhs;
  RunningStats term1;
  RunningStats term2;
  RunningStats diff;
  RunningStats via_y;
  void merge(const TermAccumulator& o) {
    rhs.merge(o.rhs);
    term1.merge(o.term1);
    term2.merge(o.term2);
    diff.merge(o.diff);
    via_y.merge(o.via_y);
  }
};

}  // namespace

TermIdentityEstimate estimate_term_identity(const IncreasingEvent& event,
                                            const DecisionTree& tree, std::size_t n,
                                            std::size_t k, std::size_t samples,
                                            const ParallelOptions& parallel, double c1,
                                            TauVariant variant, std::uint64_t reference_cap) {
  check_instance(event, tree, n);
  const KOutOfN measure(n, k);
  const double threshold = c1 * static_cast<double>(n);
  auto acc = parallel_accumulate<TermAccumulator>(samples, parallel, [&](Rng& rng,
                                                                         std::size_t count) {
    TermAccumulator local;
    Configuration x(n);
    Configuration y(n);
    std::vector<Element> scratch;
    for (std::size_t i = 0; i < count; ++i) {
      measure.sample_into(rng, x, scratch);
      measure.sample_into(rng, y, scratch);
      const Matching sigma = uniform_matching(x, y, rng);
      const Transcript t = run_tree(tree, event, x, variant);
      const bool z_in = event.contains(z_state(x, y, sigma, t, n));
      const bool y_in = event.contains(y);
      const bool one_z = t.decision != z_in;
      const bool one_y = t.decision != y_in;
      const bool is_near = static_cast<double>(x.hamming_distance(y)) < threshold;
      local.rhs.add(one_z);
      local.term1.add(one_z && is_near);
      local.term2.add(one_z && !is_near);
      local.via_y.add(one_y);
      local.diff.add(static_cast<double>(one_z) - static_cast<double>(one_y));
    }
    return local;
  });
  TermIdentityEstimate r;
  r.event = event.name();
  r.tree = tree.name();
  r.n = n;
  r.k = k;
  r.c1 = c1;
  r.rhs = acc.rhs.estimate();
  r.term1 = acc.term1.estimate();
  r.term2 = acc.term2.estimate();
  r.paired_difference = acc.diff.estimate();
  if (measure.support_size() <= BigInt(static_cast<unsigned long>(reference_cap))) {
    const Rational p = probability_exact(event, measure, reference_cap);
    r.reference = to_double(2 * p * (1 - p));
    r.reference_exact = true;
    r.z_score = r.rhs.z_score(r.reference);
  } else {
    r.reference = acc.via_y.mean();
    r.z_score = r.paired_difference.z_score(0.0);
  }
  return r;
}

ClaimReport check_claim_distributional_equality(const IncreasingEvent& event,
                                                const DecisionTree& tree, std::size_t n,
                                                std::size_t k, std::size_t t,
                                                TauVariant variant, std::size_t max_n) {
  check_exact_size(n, k, max_n);
  check_instance(event, tree, n);
  if (t > n) throw DomainError("claim check needs t <= n");
  const ExactSpace space(event, tree, n, k, variant);
  // cell -> (law of Z^(t), law of Y), as integer weights over omega indices.
  std::map<std::string, std::pair<std::map<std::size_t, BigInt>, std::map<std::size_t, BigInt>>>
      cells;
  space.for_each([&](std::size_t xi, std::size_t yi, const Matching& sigma, std::uint64_t w) {
    const Transcript& tr = space.transcripts[xi];
    if (tr.tau < t) return;
    const Configuration& x = space.omegas[xi];
    const Configuration& y = space.omegas[yi];
    std::string key = transcript_key(tr, t);
    key += '|';
    for (std::size_t e = 0; e < n; ++e) {
      const Element f = sigma(static_cast<Element>(e));
      if (f == e) {
        key += x[e] ? '1' : '0';
      } else {
        key += 'p';
        key += std::to_string(std::min<std::size_t>(e, f));
      }
      key += ',';
    }
    const BigInt bw(static_cast<unsigned long>(w));
    auto& cell = cells[key];
    cell.first[space.index.at(z_state(x, y, sigma, tr, t))] += bw;
    cell.second[yi] += bw;
  });
  ClaimReport r;
  r.event = event.name();
  r.tree = tree.name();
  r.n = n;
  r.k = k;
  r.t = t;
  r.cells = cells.size();
  for (const auto& [key, laws] : cells) {
    if (laws.first != laws.second) ++r.mismatched_cells;
  }
  return r;
}

CorrelationRow correlation_row(const IncreasingEvent& event, std::size_t k, const Rational& c1,
                               std::uint64_t cap) {
  const std::size_t n = event.size();
  const KOutOfN measure(n, k);
  const std::uint64_t size = measure.support_size_capped(cap);
  if (size * size > cap) {
    throw ResourceError("correlation search over binom(" + std::to_string(n) + "," +
                        std::to_string(k) + ")^2 pairs exceeds the cap");
  }
  std::vector<Configuration> omegas;
  std::vector<std::uint8_t> in;
  auto en = measure.enumerate(cap);
  for (const auto& omega : en) {
    omegas.push_back(omega);
    in.push_back(event.contains(omega) ? 1 : 0);
  }
  const Rational threshold = c1 * Rational(static_cast<long>(n));
  unsigned long joint = 0;
  unsigned long one = 0;
  unsigned long near = 0;
  for (std::size_t a = 0; a < omegas.size(); ++a) {
    for (std::size_t b = 0; b < omegas.size(); ++b) {
      const bool is_near =
          Rational(static_cast<long>(omegas[a].hamming_distance(omegas[b]))) < threshold;
      const bool exactly_one = in[a] != in[b];
      near += is_near;
      one += exactly_one;
      joint += is_near && exactly_one;
    }
  }
  const BigInt pairs = BigInt(static_cast<unsigned long>(size)) * BigInt(static_cast<unsigned long>(size));
  CorrelationRow row;
  row.event = event.name();
  row.n = n;
  row.k = k;
  row.joint = make_rational(BigInt(joint), pairs);
  row.product = make_rational(BigInt(one), pairs) * make_rational(BigInt(near), pairs);
  return row;
}

std::vector<CorrelationRow> negative_correlation_search(const std::vector<IncreasingEvent>& events,
                                                        const Rational& c1, std::uint64_t cap) {
  std::vector<CorrelationRow> rows;
  for (const auto& event : events) {
    for (std::size_t k = 0; k <= event.size(); ++k) rows.push_back(correlation_row(event, k, c1, cap));
  }
  return rows;
}

}  // namespace kofn
