#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kofn/configuration.hpp"
#include "kofn/random.hpp"

namespace kofn {

// Incremental evaluation of "is membership already decided by the revealed
// bits?" for the standard stopping rule, where every completion in {0,1}^E
// counts. Implementations may assume the event is increasing.
class DeterminationTracker {
 public:
  virtual ~DeterminationTracker() = default;
  virtual void reveal(Element e, bool value) = 0;
  // The membership value shared by every completion, if there is one.
  virtual std::optional<bool> decided() const = 0;
};

// An event A in {0,1}^n with an increasing-membership contract: omega <= sigma
// and omega in A imply sigma in A. The contract is not certified at
// construction (oracles are black boxes); see check_monotone_*.
//
// Events are immutable and cheap to copy; copies share state.
class IncreasingEvent {
 public:
  using Oracle = std::function<bool(const Configuration&)>;
  using TrackerFactory = std::function<std::unique_ptr<DeterminationTracker>()>;

  // Black-box oracle; determination falls back to evaluating the all-zero and
  // all-one completions.
  IncreasingEvent(std::string name, std::size_t n, Oracle oracle,
                  TrackerFactory tracker = {});

  // Monotone DNF given by its minterms (minimal 1-sets); the list is the
  // membership certificate.
  static IncreasingEvent from_minterms(std::string name, std::size_t n,
                                       std::vector<std::vector<Element>> minterms);

  const std::string& name() const noexcept { return impl_->name; }
  std::size_t size() const noexcept { return impl_->n; }

  // Throws DimensionError on a length mismatch.
  bool contains(const Configuration& omega) const;
  bool operator()(const Configuration& omega) const { return contains(omega); }

  // True for events built from minterms (including the empty DNF).
  bool has_minterms() const noexcept { return impl_->dnf; }
  const std::vector<std::vector<Element>>& minterms() const noexcept { return impl_->minterms; }

  std::unique_ptr<DeterminationTracker> make_tracker() const;

 private:
  struct Impl {
    std::string name;
    std::size_t n = 0;
    Oracle oracle;
    TrackerFactory tracker;
    std::vector<std::vector<Element>> minterms;
    std::vector<Configuration> minterm_masks;
    bool dnf = false;
  };
  explicit IncreasingEvent(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

// Generic tracker: decided iff the all-zero and all-one completions agree.
std::unique_ptr<DeterminationTracker> make_extremes_tracker(const IncreasingEvent& event);

// --- Generators -----------------------------------------------------------

// A = {omega_e = 1}.
IncreasingEvent dictator(std::size_t n, Element e);

// A = {at least `threshold` ones among `coords`}.
IncreasingEvent threshold_event(std::size_t n, std::vector<Element> coords,
                                std::size_t threshold);

// Strict majority of the first m coordinates (m defaults to n).
IncreasingEvent majority(std::size_t n, std::size_t m = 0);

// Tribes: disjoint consecutive blocks of `width`; A holds if some block is
// all ones. Elements past the last full block are irrelevant.
IncreasingEvent tribes(std::size_t n, std::size_t width);

// Always (value = true) or never (value = false).
IncreasingEvent constant_event(std::size_t n, bool value);

// Random monotone DNF: m uniform in [1, 2n] minterms, each of width uniform
// in [1, ceil(n/2)] on a uniform random subset.
IncreasingEvent random_monotone_dnf(std::size_t n, Rng& rng, std::string name = {});

// Mixed family used as the default test surface: dictators, majorities,
// tribes, and random monotone DNFs, `count` events in total, deterministic
// given `seed`.
std::vector<IncreasingEvent> generated_event_suite(std::size_t n, std::size_t count,
                                                   std::uint64_t seed);

// --- Monotonicity spot checks -----------------------------------------------

// A witnessed pair lower <= upper with lower in A and upper not in A.
struct MonotonicityViolation {
  Configuration lower;
  Configuration upper;
};

// Exhaustive over the covering relation (omega, omega^(e)) for n <= 20.
std::optional<MonotonicityViolation> check_monotone_exhaustive(const IncreasingEvent& event);

// `pairs` random comparable pairs omega <= sigma.
std::optional<MonotonicityViolation> check_monotone_random(const IncreasingEvent& event,
                                                           std::size_t pairs, Rng& rng);

}  // namespace kofn
