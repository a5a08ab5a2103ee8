#include "kofn/encoding.hpp"

#include <cmath>
#include <map>
#include <string>

#include "kofn/errors.hpp"

namespace kofn {
namespace {

__extension__ using u128 = unsigned __int128;

// A point strictly inside the cell [j/s, (j+1)/s).
std::uint64_t cell_midpoint(std::uint64_t j, std::uint64_t s) {
  return static_cast<std::uint64_t>((static_cast<u128>(2 * j + 1) << 64) / (2 * s));
}

struct PairKey {
  Configuration alpha;
  Configuration beta;
  bool operator<(const PairKey& o) const {
    if (alpha != o.alpha) return alpha < o.alpha;
    return beta < o.beta;
  }
};

}  // namespace

bool below_fraction(std::uint64_t u, std::uint64_t num, std::uint64_t den) noexcept {
  if (num >= den) return true;
  return static_cast<u128>(u) * den < (static_cast<u128>(num) << 64);
}

UniformSeed UniformSeed::from_doubles(std::span<const double> values) {
  std::vector<std::uint64_t> words;
  words.reserve(values.size());
  for (double v : values) {
    if (!(v >= 0.0 && v < 1.0)) throw DomainError("uniform seed entries must lie in [0, 1)");
    words.push_back(static_cast<std::uint64_t>(std::ldexp(v, 64)));
  }
  return UniformSeed(std::move(words));
}

UniformSeed UniformSeed::draw(std::size_t m, Rng& rng) {
  std::vector<std::uint64_t> words(m);
  for (auto& w : words) w = rng();
  return UniformSeed(std::move(words));
}

double UniformSeed::value(std::size_t i) const { return std::ldexp(static_cast<double>(word(i)), -64); }

Configuration encode_fmu(const KOutOfN& measure, const UniformSeed& u) {
  const std::size_t n = measure.n();
  if (u.size() != n) {
    throw DimensionError("seed of length " + std::to_string(u.size()) + " for a measure on " +
                         std::to_string(n) + " elements");
  }
  Configuration x(n);
  std::uint64_t zeros = n - measure.k();
  for (std::size_t t = 0; t < n; ++t) {
    const std::uint64_t slots = n - t;
    if (below_fraction(u.word(t), zeros, slots) && zeros > 0) {
      --zeros;
    } else {
      x.set(t, true);
    }
  }
  return x;
}

CoupledPairLaw::CoupledPairLaw(std::size_t m, std::size_t k, std::vector<PairMass> entries)
    : m_(m), k_(k), entries_(std::move(entries)) {
  for (auto& e : entries_) e.mass.canonicalize();
}

Rational CoupledPairLaw::mass(const Configuration& alpha, const Configuration& beta) const {
  for (const auto& e : entries_) {
    if (e.alpha == alpha && e.beta == beta) return e.mass;
  }
  return Rational(0);
}

Rational CoupledPairLaw::total() const {
  Rational s = 0;
  for (const auto& e : entries_) s += e.mass;
  return s;
}

CoupledPairLaw coupled_pair_law(std::size_t m, std::size_t k) {
  if (m < 2 || k < 1 || k + 1 > m) {
    throw DomainError("coupled pair law needs 1 <= k <= m-1 (got m=" + std::to_string(m) +
                      ", k=" + std::to_string(k) + ")");
  }
  const KOutOfN measure(m, k);
  const Rational each =
      make_rational(BigInt(1), measure.support_size() * BigInt(static_cast<unsigned long>(m - k)));
  std::vector<PairMass> entries;
  auto en = measure.enumerate();
  for (const auto& alpha : en) {
    for (std::size_t e = 0; e < m; ++e) {
      if (alpha[e]) continue;
      entries.push_back(PairMass{alpha, alpha.flipped(e), each});
    }
  }
  return CoupledPairLaw(m, k, std::move(entries));
}

CoupledPairLaw shared_seed_law_exact(std::size_t m, std::size_t k) {
  if (m < 2 || k < 1 || k + 1 > m) throw DomainError("shared-seed law needs 1 <= k <= m-1");
  if (m > 10) throw ResourceError("shared-seed cell enumeration is limited to m <= 10");
  std::map<PairKey, Rational> law;
  Configuration a(m);
  Configuration b(m);
  // At position t with s slots, U_t in cell j gives a 0 for the trajectory
  // with z zeros left iff j < z. Cells with equal outcomes are grouped.
  auto walk = [&](auto&& self, std::size_t t, std::size_t za, std::size_t zb,
                  const Rational& p) -> void {
    if (t == m) {
      law[PairKey{a, b}] += p;
      return;
    }
    const std::size_t s = m - t;
    const std::size_t lo = std::min(za, zb);
    const std::size_t hi = std::max(za, zb);
    auto branch = [&](bool bit_a, bool bit_b, std::size_t cells) {
      if (cells == 0) return;
      a.set(t, bit_a);
      b.set(t, bit_b);
      self(self, t + 1, za - (bit_a ? 0 : 1), zb - (bit_b ? 0 : 1),
           p * make_rational(BigInt(static_cast<unsigned long>(cells)), BigInt(static_cast<unsigned long>(s))));
    };
    branch(false, false, lo);
    branch(za < zb, zb < za, hi - lo);  // only the trajectory with more zeros left gets a 0
    branch(true, true, s - hi);
    a.set(t, false);
    b.set(t, false);
  };
  walk(walk, 0, m - k, m - k - 1, Rational(1));
  std::vector<PairMass> entries;
  for (auto& [key, p] : law) entries.push_back(PairMass{key.alpha, key.beta, p});
  return CoupledPairLaw(m, k, std::move(entries));
}

namespace {

struct PairCounts {
  std::map<PairKey, std::size_t> counts;
  std::size_t violations = 0;
  void merge(const PairCounts& o) {
    for (const auto& [key, c] : o.counts) counts[key] += c;
    violations += o.violations;
  }
};

}  // namespace

SharedSeedComparison compare_shared_seed(std::size_t m, std::size_t k, std::size_t samples,
                                         const ParallelOptions& parallel) {
  const CoupledPairLaw law = coupled_pair_law(m, k);
  const KOutOfN low(m, k);
  const KOutOfN high(m, k + 1);
  auto acc = parallel_accumulate<PairCounts>(samples, parallel, [&](Rng& rng, std::size_t count) {
    PairCounts local;
    for (std::size_t i = 0; i < count; ++i) {
      const UniformSeed u = UniformSeed::draw(m, rng);
      Configuration z = encode_fmu(low, u);
      Configuration zp = encode_fmu(high, u);
      if (!z.leq(zp)) ++local.violations;
      ++local.counts[PairKey{std::move(z), std::move(zp)}];
    }
    return local;
  });
  SharedSeedComparison out;
  out.m = m;
  out.k = k;
  out.samples = samples;
  out.order_violations = acc.violations;
  std::map<PairKey, double> expected;
  for (const auto& e : law.entries()) expected[PairKey{e.alpha, e.beta}] = to_double(e.mass);
  double tv = 0.0;
  const double n = static_cast<double>(samples);
  for (const auto& [key, p] : expected) {
    auto it = acc.counts.find(key);
    const double q = it == acc.counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    tv += std::abs(p - q);
  }
  for (const auto& [key, c] : acc.counts) {
    if (!expected.contains(key)) {
      tv += static_cast<double>(c) / n;
      out.off_support += c;
    }
  }
  out.total_variation = tv / 2.0;
  return out;
}

std::vector<std::uint8_t> logn_term_indicators(std::size_t n, const UniformSeed& u,
                                               const UniformSeed& v) {
  if (n == 0 || n % 2 != 0) throw DomainError("the log n demonstration needs even n");
  if (u.size() != n || v.size() != n) throw DimensionError("seeds must have length n");
  const KOutOfN measure(n, n / 2);
  std::vector<std::uint64_t> words = u.words();
  // G_1 = F(U); G_{t+1} replaces U_t by V_t.
  bool prev = encode_fmu(measure, UniformSeed(words))[n - 1];
  std::vector<std::uint8_t> out(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    words[t] = v.word(t);
    const bool next = encode_fmu(measure, UniformSeed(words))[n - 1];
    out[t] = prev != next ? 1 : 0;
    prev = next;
  }
  return out;
}

namespace {

struct LognAccumulator {
  std::vector<RunningStats> terms;
  RunningStats sum;
  void merge(const LognAccumulator& o) {
    if (terms.empty()) terms.resize(o.terms.size());
    for (std::size_t i = 0; i < o.terms.size(); ++i) terms[i].merge(o.terms[i]);
    sum.merge(o.sum);
  }
};

}  // namespace

LognEstimate logn_sum_estimate(std::size_t n, std::size_t samples,
                               const ParallelOptions& parallel) {
  if (n == 0 || n % 2 != 0) throw DomainError("the log n demonstration needs even n");
  auto acc = parallel_accumulate<LognAccumulator>(samples, parallel, [n](Rng& rng,
                                                                         std::size_t count) {
    LognAccumulator local;
    local.terms.resize(n);
    std::vector<std::uint64_t> u(n);
    std::vector<std::uint64_t> v(n);
    std::vector<std::uint8_t> hit(n);
    for (std::size_t i = 0; i < count; ++i) {
      for (auto& w : u) w = rng();
      for (auto& w : v) w = rng();
      // Hybrids G_t and G_{t+1} share the V-prefix before t and the U-suffix
      // after t; only position t differs. Once their zero counts agree again
      // the suffix encodings coincide, so each pair is followed only until
      // it coalesces.
      std::uint64_t zeros = n / 2;
      std::size_t total = 0;
      for (std::size_t t = 0; t < n; ++t) {
        const std::uint64_t slots = n - t;
        const bool zero_u = zeros > 0 && below_fraction(u[t], zeros, slots);
        const bool zero_v = zeros > 0 && below_fraction(v[t], zeros, slots);
        bool differ = false;
        if (zero_u != zero_v) {
          if (t + 1 == n) {
            differ = true;
          } else {
            std::uint64_t za = zeros - (zero_u ? 1 : 0);
            std::uint64_t zb = zeros - (zero_v ? 1 : 0);
            for (std::size_t j = t + 1; j < n; ++j) {
              const std::uint64_t s = n - j;
              const bool a = za > 0 && below_fraction(u[j], za, s);
              const bool b = zb > 0 && below_fraction(u[j], zb, s);
              if (a != b) {
                differ = j + 1 == n;
                break;
              }
              za -= a ? 1 : 0;
              zb -= b ? 1 : 0;
            }
          }
        }
        hit[t] = differ ? 1 : 0;
        total += hit[t];
        zeros -= zero_v ? 1 : 0;
      }
      for (std::size_t t = 0; t < n; ++t) local.terms[t].add(hit[t]);
      local.sum.add(static_cast<double>(total));
    }
    return local;
  });
  LognEstimate out;
  out.n = n;
  out.samples = samples;
  for (const auto& s : acc.terms) out.terms.push_back(s.estimate());
  out.sum = acc.sum.estimate();
  return out;
}

LognExact logn_sum_exact_small(std::size_t n) {
  if (n == 0 || n % 2 != 0) throw DomainError("the log n demonstration needs even n");
  if (n > 6) throw ResourceError("exact log n cell enumeration is limited to n <= 6");
  std::vector<std::uint64_t> cu(n);
  std::vector<std::uint64_t> cv(n);
  std::vector<BigInt> counts(n, 0);
  // Every cell has the same probability 1/(n!)^2.
  auto walk = [&](auto&& self, std::size_t t) -> void {
    if (t == n) {
      std::vector<std::uint64_t> uw(n);
      std::vector<std::uint64_t> vw(n);
      for (std::size_t i = 0; i < n; ++i) {
        uw[i] = cell_midpoint(cu[i], n - i);
        vw[i] = cell_midpoint(cv[i], n - i);
      }
      const auto hits = logn_term_indicators(n, UniformSeed(uw), UniformSeed(vw));
      for (std::size_t i = 0; i < n; ++i) counts[i] += hits[i];
      return;
    }
    const std::size_t s = n - t;
    for (std::size_t a = 0; a < s; ++a) {
      for (std::size_t b = 0; b < s; ++b) {
        cu[t] = a;
        cv[t] = b;
        self(self, t + 1);
      }
    }
  };
  walk(walk, 0);
  BigInt cells = 1;
  for (std::size_t i = 1; i <= n; ++i) cells *= BigInt(static_cast<unsigned long>(i * i));
  LognExact out;
  out.n = n;
  out.sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out.terms.push_back(make_rational(counts[i], cells));
    out.sum += out.terms.back();
  }
  return out;
}

}  // namespace kofn
