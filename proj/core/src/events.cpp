#include "kofn/events.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kofn/errors.hpp"

namespace kofn {
namespace {

class ExtremesTracker final : public DeterminationTracker {
 public:
  explicit ExtremesTracker(IncreasingEvent event)
      : event_(std::move(event)), low_(event_.size()), high_(event_.size()) {
    for (std::size_t e = 0; e < high_.size(); ++e) high_.set(e, true);
  }

  void reveal(Element e, bool value) override {
    if (value) {
      low_.set(e, true);
    } else {
      high_.set(e, false);
    }
  }

  std::optional<bool> decided() const override {
    const bool at_low = event_.contains(low_);
    const bool at_high = event_.contains(high_);
    if (at_low == at_high) return at_low;
    return std::nullopt;
  }

 private:
  IncreasingEvent event_;
  Configuration low_;   // unrevealed filled with 0
  Configuration high_;  // unrevealed filled with 1
};

class MintermTracker final : public DeterminationTracker {
 public:
  MintermTracker(std::size_t n, const std::vector<std::vector<Element>>& minterms)
      : sizes_(minterms.size()), hits_(minterms.size(), 0), dead_(minterms.size(), 0),
        owners_(n), alive_(minterms.size()) {
    for (std::size_t m = 0; m < minterms.size(); ++m) {
      sizes_[m] = minterms[m].size();
      if (sizes_[m] == 0) ++satisfied_;
      for (Element e : minterms[m]) owners_[e].push_back(static_cast<std::uint32_t>(m));
    }
  }

  void reveal(Element e, bool value) override {
    for (std::uint32_t m : owners_[e]) {
      if (value) {
        if (++hits_[m] == sizes_[m] && !dead_[m]) ++satisfied_;
      } else if (!dead_[m]) {
        dead_[m] = 1;
        --alive_;
      }
    }
  }

  std::optional<bool> decided() const override {
    if (satisfied_ > 0) return true;
    if (alive_ == 0) return false;
    return std::nullopt;
  }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> hits_;
  std::vector<std::uint8_t> dead_;
  std::vector<std::vector<std::uint32_t>> owners_;
  std::size_t alive_;
  std::size_t satisfied_ = 0;
};

class ThresholdTracker final : public DeterminationTracker {
 public:
  ThresholdTracker(std::size_t n, const std::vector<Element>& coords, std::size_t threshold)
      : member_(n, 0), unrevealed_(coords.size()), threshold_(threshold) {
    for (Element e : coords) member_[e] = 1;
  }

  void reveal(Element e, bool value) override {
    if (!member_[e]) return;
    --unrevealed_;
    if (value) ++ones_;
  }

  std::optional<bool> decided() const override {
    if (ones_ >= threshold_) return true;
    if (ones_ + unrevealed_ < threshold_) return false;
    return std::nullopt;
  }

 private:
  std::vector<std::uint8_t> member_;
  std::size_t unrevealed_;
  std::size_t ones_ = 0;
  std::size_t threshold_;
};

std::string join_elements(const std::vector<Element>& elems) {
  std::string out;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(elems[i]);
  }
  return out;
}

}  // namespace

IncreasingEvent::IncreasingEvent(std::string name, std::size_t n, Oracle oracle,
                                 TrackerFactory tracker) {
  if (n == 0) throw DomainError("events live on a ground set with n >= 1");
  if (!oracle) throw DomainError("event '" + name + "' needs a membership oracle");
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->n = n;
  impl->oracle = std::move(oracle);
  impl->tracker = std::move(tracker);
  impl_ = std::move(impl);
}

IncreasingEvent IncreasingEvent::from_minterms(std::string name, std::size_t n,
                                               std::vector<std::vector<Element>> minterms) {
  if (n == 0) throw DomainError("events live on a ground set with n >= 1");
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->n = n;
  impl->dnf = true;
  for (auto& term : minterms) {
    std::sort(term.begin(), term.end());
    term.erase(std::unique(term.begin(), term.end()), term.end());
    for (Element e : term) {
      if (e >= n) throw IndexError("minterm element " + std::to_string(e) + " outside [0, n)");
    }
    impl->minterm_masks.push_back(Configuration::from_ones(n, term));
  }
  impl->minterms = std::move(minterms);
  return IncreasingEvent(std::move(impl));
}

bool IncreasingEvent::contains(const Configuration& omega) const {
  if (omega.size() != impl_->n) {
    throw DimensionError("event '" + impl_->name + "' on " + std::to_string(impl_->n) +
                         " elements evaluated at a configuration of length " +
                         std::to_string(omega.size()));
  }
  if (impl_->dnf) {
    for (const auto& mask : impl_->minterm_masks) {
      if (omega.contains_all(mask)) return true;
    }
    return false;
  }
  return impl_->oracle(omega);
}

std::unique_ptr<DeterminationTracker> IncreasingEvent::make_tracker() const {
  if (impl_->tracker) return impl_->tracker();
  if (impl_->dnf) return std::make_unique<MintermTracker>(impl_->n, impl_->minterms);
  return make_extremes_tracker(*this);
}

std::unique_ptr<DeterminationTracker> make_extremes_tracker(const IncreasingEvent& event) {
  return std::make_unique<ExtremesTracker>(event);
}

IncreasingEvent dictator(std::size_t n, Element e) {
  if (e >= n) throw IndexError("dictator coordinate outside [0, n)");
  return IncreasingEvent::from_minterms("dictator(" + std::to_string(e) + ")", n, {{e}});
}

IncreasingEvent threshold_event(std::size_t n, std::vector<Element> coords,
                                std::size_t threshold) {
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  for (Element e : coords) {
    if (e >= n) throw IndexError("threshold coordinate outside [0, n)");
  }
  std::string name = "threshold(>=" + std::to_string(threshold) + " of {" +
                     join_elements(coords) + "})";
  auto oracle = [coords, threshold](const Configuration& omega) {
    std::size_t ones = 0;
    for (Element e : coords) ones += omega[e] ? 1 : 0;
    return ones >= threshold;
  };
  auto tracker = [n, coords, threshold]() -> std::unique_ptr<DeterminationTracker> {
    return std::make_unique<ThresholdTracker>(n, coords, threshold);
  };
  return IncreasingEvent(std::move(name), n, std::move(oracle), std::move(tracker));
}

IncreasingEvent majority(std::size_t n, std::size_t m) {
  if (m == 0) m = n;
  if (m > n) throw DomainError("majority over more coordinates than the ground set holds");
  std::vector<Element> coords(m);
  std::iota(coords.begin(), coords.end(), Element{0});
  auto event = threshold_event(n, std::move(coords), m / 2 + 1);
  return IncreasingEvent("majority(" + std::to_string(m) + " of " + std::to_string(n) + ")", n,
                         [event](const Configuration& w) { return event.contains(w); },
                         [event] { return event.make_tracker(); });
}

IncreasingEvent tribes(std::size_t n, std::size_t width) {
  if (width == 0 || width > n) throw DomainError("tribes width must lie in [1, n]");
  std::vector<std::vector<Element>> blocks;
  for (std::size_t start = 0; start + width <= n; start += width) {
    std::vector<Element> block(width);
    std::iota(block.begin(), block.end(), static_cast<Element>(start));
    blocks.push_back(std::move(block));
  }
  return IncreasingEvent::from_minterms("tribes(w=" + std::to_string(width) + ")", n,
                                        std::move(blocks));
}

IncreasingEvent constant_event(std::size_t n, bool value) {
  if (value) return IncreasingEvent::from_minterms("always", n, {{}});
  return IncreasingEvent::from_minterms("never", n, {});
}

IncreasingEvent random_monotone_dnf(std::size_t n, Rng& rng, std::string name) {
  const std::size_t terms = 1 + static_cast<std::size_t>(uniform_below(rng, 2 * n));
  const std::size_t max_width = (n + 1) / 2;
  std::vector<std::vector<Element>> minterms;
  minterms.reserve(terms);
  std::vector<Element> pool(n);
  for (std::size_t t = 0; t < terms; ++t) {
    const std::size_t width = 1 + static_cast<std::size_t>(uniform_below(rng, max_width));
    std::iota(pool.begin(), pool.end(), Element{0});
    for (std::size_t i = 0; i < width; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
      std::swap(pool[i], pool[j]);
    }
    minterms.emplace_back(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(width));
  }
  if (name.empty()) name = "dnf(" + std::to_string(terms) + " terms)";
  return IncreasingEvent::from_minterms(std::move(name), n, std::move(minterms));
}

std::vector<IncreasingEvent> generated_event_suite(std::size_t n, std::size_t count,
                                                   std::uint64_t seed) {
  std::vector<IncreasingEvent> suite;
  suite.reserve(count);
  auto push = [&](IncreasingEvent e) {
    if (suite.size() < count) suite.push_back(std::move(e));
  };
  push(dictator(n, 0));
  if (n > 1) push(dictator(n, static_cast<Element>(n - 1)));
  // Odd coordinate counts keep majorities nontrivial under a fixed weight.
  if (n >= 2) push(majority(n, n % 2 == 0 ? n - 1 : n));
  if (n >= 3) push(majority(n, (n / 2) | 1U));
  if (n >= 4) push(tribes(n, 2));
  if (n >= 6) push(tribes(n, 3));
  Rng rng = make_stream(seed, 0x5eed);
  std::size_t index = 0;
  while (suite.size() < count) {
    push(random_monotone_dnf(n, rng, "dnf#" + std::to_string(index++)));
  }
  return suite;
}

std::optional<MonotonicityViolation> check_monotone_exhaustive(const IncreasingEvent& event) {
  const std::size_t n = event.size();
  if (n > 20) throw ResourceError("exhaustive monotonicity check is limited to n <= 20");
  Configuration omega(n);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    for (std::size_t e = 0; e < n; ++e) omega.set(e, (code >> e) & 1U);
    if (!event.contains(omega)) continue;
    for (std::size_t e = 0; e < n; ++e) {
      if (omega[e]) continue;
      Configuration up = omega.flipped(e);
      if (!event.contains(up)) return MonotonicityViolation{omega, std::move(up)};
    }
  }
  return std::nullopt;
}

std::optional<MonotonicityViolation> check_monotone_random(const IncreasingEvent& event,
                                                           std::size_t pairs, Rng& rng) {
  const std::size_t n = event.size();
  for (std::size_t i = 0; i < pairs; ++i) {
    Configuration lower(n);
    for (std::size_t e = 0; e < n; ++e) lower.set(e, fair_bit(rng));
    Configuration upper = lower;
    for (std::size_t e = 0; e < n; ++e) {
      if (!lower[e] && fair_bit(rng)) upper.set(e, true);
    }
    if (event.contains(lower) && !event.contains(upper)) {
      return MonotonicityViolation{std::move(lower), std::move(upper)};
    }
  }
  return std::nullopt;
}

}  // namespace kofn
