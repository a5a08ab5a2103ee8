#include <memory>
#include <string>

#include "kofn/errors.hpp"
#include "kofn/percolation.hpp"
#include "union_find.hpp"

namespace kofn {
namespace {

void check_size(const TriangularBox& box, const Configuration& omega) {
  if (omega.size() != box.size()) {
    throw DimensionError("configuration of length " + std::to_string(omega.size()) +
                         " on a box with " + std::to_string(box.size()) + " sites");
  }
}

// Joins same-coloured neighbours of `colour` and the two virtual side nodes
// n (first side) and n+1 (second side); returns whether they meet.
template <class First, class Second>
bool sides_joined(const TriangularBox& box, const Configuration& omega, bool colour,
                  First on_first, Second on_second) {
  const auto n = static_cast<std::uint32_t>(box.size());
  detail::UnionFind uf(n + 2);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (omega[v] != colour) continue;
    for (Element w : box.neighbors(v)) {
      if (w > v && omega[w] == colour) uf.unite(v, w);
    }
    if (on_first(v)) uf.unite(v, n);
    if (on_second(v)) uf.unite(v, n + 1);
  }
  return uf.same(n, n + 1);
}

// Occupied cluster flags: bit 0 touches the left side, bit 1 the right.
// Returns false if some cluster already touches both.
bool label_occupied(const TriangularBox& box, const Configuration& omega, detail::UnionFind& uf,
                    std::vector<std::uint8_t>& flags) {
  const auto n = static_cast<std::uint32_t>(box.size());
  uf.reset(n);
  flags.assign(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!omega[v]) continue;
    for (Element w : box.neighbors(v)) {
      if (w > v && omega[w]) uf.unite(v, w);
    }
  }
  bool crossing = false;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!omega[v]) continue;
    auto& f = flags[uf.find(v)];
    if (box.on_left(v)) f |= 1;
    if (box.on_right(v)) f |= 2;
    if (f == 3) crossing = true;
  }
  return !crossing;
}

std::uint8_t neighbour_flags(const TriangularBox& box, const Configuration& omega, Element v,
                             bool colour, detail::UnionFind& uf,
                             const std::vector<std::uint8_t>& flags) {
  std::uint8_t f = 0;
  for (Element w : box.neighbors(v)) {
    if (omega[w] == colour) f |= flags[uf.find(w)];
  }
  return f;
}

class CrossingTracker final : public DeterminationTracker {
 public:
  explicit CrossingTracker(std::shared_ptr<const TriangularBox> box)
      : box_(std::move(box)), n_(static_cast<std::uint32_t>(box_->size())), uf_(n_ + 4),
        state_(n_, -1) {}

  void reveal(Element e, bool value) override {
    state_[e] = value ? 1 : 0;
    for (Element w : box_->neighbors(e)) {
      if (state_[w] == state_[e]) uf_.unite(e, w);
    }
    if (value) {
      if (box_->on_left(e)) uf_.unite(e, left());
      if (box_->on_right(e)) uf_.unite(e, right());
    } else {
      if (box_->on_top(e)) uf_.unite(e, top());
      if (box_->on_bottom(e)) uf_.unite(e, bottom());
    }
  }

  std::optional<bool> decided() const override {
    if (uf_.same(left(), right())) return true;
    if (uf_.same(top(), bottom())) return false;
    return std::nullopt;
  }

 private:
  std::uint32_t left() const { return n_; }
  std::uint32_t right() const { return n_ + 1; }
  std::uint32_t top() const { return n_ + 2; }
  std::uint32_t bottom() const { return n_ + 3; }

  std::shared_ptr<const TriangularBox> box_;
  std::uint32_t n_;
  mutable detail::UnionFind uf_;
  std::vector<std::int8_t> state_;
};

}  // namespace

TriangularBox::TriangularBox(std::size_t R) : R_(R) {
  if (R == 0) throw DomainError("the box needs side length R >= 1");
  const int r = static_cast<int>(R);
  offsets_.reserve(R * R + 1);
  offsets_.push_back(0);
  for (int y = 0; y < r; ++y) {
    for (int x = 0; x < r; ++x) {
      for (const auto& d : kHexDirections) {
        if (inside(x + d[0], y + d[1])) adjacency_.push_back(index(x + d[0], y + d[1]));
      }
      offsets_.push_back(adjacency_.size());
    }
  }
}

TriangularBox build_box(std::size_t R) { return TriangularBox(R); }

bool has_horizontal_crossing(const TriangularBox& box, const Configuration& omega) {
  check_size(box, omega);
  return sides_joined(
      box, omega, true, [&](Element v) { return box.on_left(v); },
      [&](Element v) { return box.on_right(v); });
}

bool has_vacant_vertical_crossing(const TriangularBox& box, const Configuration& omega) {
  check_size(box, omega);
  return sides_joined(
      box, omega, false, [&](Element v) { return box.on_top(v); },
      [&](Element v) { return box.on_bottom(v); });
}

IncreasingEvent crossing_event(const TriangularBox& box) {
  auto shared = std::make_shared<const TriangularBox>(box);
  auto oracle = [shared](const Configuration& omega) {
    return has_horizontal_crossing(*shared, omega);
  };
  auto tracker = [shared]() -> std::unique_ptr<DeterminationTracker> {
    return std::make_unique<CrossingTracker>(shared);
  };
  return IncreasingEvent("crossing(R=" + std::to_string(box.side()) + ")", box.size(),
                         std::move(oracle), std::move(tracker));
}

bool left_connects_to_right_segment(const TriangularBox& box, const Configuration& omega,
                                    int lo, int hi) {
  check_size(box, omega);
  const int r = static_cast<int>(box.side());
  return sides_joined(
      box, omega, true, [&](Element v) { return box.on_left(v); },
      [&](Element v) {
        const int y = box.y_of(v);
        return box.x_of(v) == r - 1 && y >= lo && y <= hi;
      });
}

void zero_pivotal_flags(const TriangularBox& box, const Configuration& omega,
                        std::vector<std::uint8_t>& flags) {
  check_size(box, omega);
  const std::size_t n = box.size();
  flags.assign(n, 0);
  detail::UnionFind uf;
  std::vector<std::uint8_t> cluster;
  // Once A holds no vacant site can be 0-pivotal.
  if (!label_occupied(box, omega, uf, cluster)) return;
  for (Element v = 0; v < n; ++v) {
    if (omega[v]) continue;
    std::uint8_t f = neighbour_flags(box, omega, v, true, uf, cluster);
    if (box.on_left(v)) f |= 1;
    if (box.on_right(v)) f |= 2;
    flags[v] = f == 3 ? 1 : 0;
  }
}

std::size_t count_zero_pivotal(const TriangularBox& box, const Configuration& omega) {
  std::vector<std::uint8_t> flags;
  zero_pivotal_flags(box, omega, flags);
  std::size_t count = 0;
  for (auto f : flags) count += f;
  return count;
}

std::size_t count_zero_pivotal_naive(const TriangularBox& box, const Configuration& omega) {
  check_size(box, omega);
  if (has_horizontal_crossing(box, omega)) return 0;
  Configuration scratch = omega;
  std::size_t count = 0;
  for (Element v = 0; v < box.size(); ++v) {
    if (omega[v]) continue;
    scratch.set(v, true);
    if (has_horizontal_crossing(box, scratch)) ++count;
    scratch.set(v, false);
  }
  return count;
}

bool four_arm_witness(const TriangularBox& box, const Configuration& omega, Element v) {
  check_size(box, omega);
  if (v >= box.size()) throw IndexError("site outside the box");
  if (omega[v]) return false;
  const auto n = static_cast<std::uint32_t>(box.size());

  detail::UnionFind uf;
  std::vector<std::uint8_t> cluster;
  label_occupied(box, omega, uf, cluster);
  std::uint8_t occupied = neighbour_flags(box, omega, v, true, uf, cluster);
  if (box.on_left(v)) occupied |= 1;
  if (box.on_right(v)) occupied |= 2;
  if (occupied != 3) return false;

  // Vacant clusters with v itself removed; bit 0 top, bit 1 bottom.
  uf.reset(n);
  cluster.assign(n, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    if (omega[a] || a == v) continue;
    for (Element b : box.neighbors(a)) {
      if (b > a && b != v && !omega[b]) uf.unite(a, b);
    }
  }
  for (std::uint32_t a = 0; a < n; ++a) {
    if (omega[a] || a == v) continue;
    auto& f = cluster[uf.find(a)];
    if (box.on_top(a)) f |= 1;
    if (box.on_bottom(a)) f |= 2;
  }
  std::uint8_t vacant = neighbour_flags(box, omega, v, false, uf, cluster);
  if (box.on_top(v)) vacant |= 1;
  if (box.on_bottom(v)) vacant |= 2;
  return vacant == 3;
}

}  // namespace kofn
