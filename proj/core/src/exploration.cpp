#include <memory>
#include <string>

#include "kofn/errors.hpp"
#include "kofn/percolation.hpp"

namespace kofn {
namespace {

int direction_index(int dx, int dy) {
  for (int i = 0; i < 6; ++i) {
    if (kHexDirections[i][0] == dx && kHexDirections[i][1] == dy) return i;
  }
  throw TreeDefinitionError("exploration walker lost adjacency");
}

// The two interface walks for anchor j. Each keeps a white site W and a
// black site B, adjacent, and probes the third corner C of the triangle
// on a fixed side: C = W + rot(B - W), rot = -60 degrees for the first walk
// and +60 for the second. C replaces the site of its own colour.
//
// Outside the box the walks see a frame at x, y in {-1, R}:
//   x = -1            white (the left side, target of both walks)
//   x = R             white on the walk's right segment, black elsewhere
//   y = -1, y = R     black (0 <= x < R)
// First walk: right segment y >= j; it stops when a real W reaches x = 0
// (crossing to that segment) or a real B reaches y = R-1 (blocked).
// Second walk: right segment 0 <= y < j, mirrored; it stops at a real W with
// x = 0 or a real B with y = 0.
class InterfaceWalk {
 public:
  InterfaceWalk(const TriangularBox& box, std::size_t anchor)
      : box_(box), R_(static_cast<int>(box.side())), j_(static_cast<int>(anchor)),
        colour_(box.size(), -1), limit_(8 * (box.side() + 2) * (box.side() + 2) + 16) {
    start(1);
  }

  // The next unknown real site the walk needs, or empty once both walks end.
  std::optional<Element> advance() {
    while (phase_ != kDone) {
      const int d = direction_index(bx_ - wx_, by_ - wy_);
      const auto& r = kHexDirections[phase_ == 1 ? (d + 5) % 6 : (d + 1) % 6];
      const int cx = wx_ + r[0];
      const int cy = wy_ + r[1];
      if (cx < -1 || cy < -1 || cx > R_ || cy > R_) {
        throw TreeDefinitionError("exploration walker left its frame");
      }
      const int c = colour(cx, cy);
      if (c < 0) return box_.index(cx, cy);
      if (++steps_ > limit_) throw TreeDefinitionError("exploration walker did not stop");
      if (c) {
        wx_ = cx;
        wy_ = cy;
      } else {
        bx_ = cx;
        by_ = cy;
      }
      check_stop();
    }
    return std::nullopt;
  }

  void observe(Element v, bool white) { colour_[v] = white ? 1 : 0; }

  bool done() const { return phase_ == kDone; }
  std::optional<bool> upper() const { return as_optional(upper_); }
  std::optional<bool> lower() const { return as_optional(lower_); }
  std::size_t steps() const { return steps_; }

 private:
  static constexpr int kDone = 3;

  static std::optional<bool> as_optional(int v) {
    if (v < 0) return std::nullopt;
    return v == 1;
  }

  void start(int phase) {
    phase_ = phase;
    if (phase == 1) {
      wx_ = R_, wy_ = j_, bx_ = R_, by_ = j_ - 1;
    } else {
      wx_ = R_, wy_ = j_ - 1, bx_ = R_, by_ = j_;
    }
  }

  int colour(int x, int y) const {
    if (box_.inside(x, y)) return colour_[box_.index(x, y)];
    if (x == -1) return 1;
    if (x == R_) return phase_ == 1 ? (y >= j_ ? 1 : 0) : (y >= 0 && y < j_ ? 1 : 0);
    return 0;
  }

  void check_stop() {
    const bool w_left = box_.inside(wx_, wy_) && wx_ == 0;
    if (phase_ == 1) {
      if (w_left) {
        upper_ = 1;
        phase_ = kDone;
      } else if (box_.inside(bx_, by_) && by_ == R_ - 1) {
        upper_ = 0;
        if (j_ >= 1) {
          start(2);
        } else {
          phase_ = kDone;
        }
      }
    } else if (w_left) {
      lower_ = 1;
      phase_ = kDone;
    } else if (box_.inside(bx_, by_) && by_ == 0) {
      lower_ = 0;
      phase_ = kDone;
    }
  }

  const TriangularBox& box_;
  int R_;
  int j_;
  int phase_ = 1;
  int wx_ = 0, wy_ = 0, bx_ = 0, by_ = 0;
  std::vector<std::int8_t> colour_;
  int upper_ = -1;  // walk answers, -1 while unknown
  int lower_ = -1;
  std::size_t steps_ = 0;
  std::size_t limit_;
};

class ExplorationCursor final : public QueryCursor {
 public:
  ExplorationCursor(std::shared_ptr<const TriangularBox> box, std::size_t anchor)
      : box_(std::move(box)), walk_(*box_, anchor), revealed_(box_->size(), 0) {}

  Element next() override {
    if (auto e = walk_.advance()) return *e;
    // Not reached when the crossing tracker drives the run: the walks
    // determine A_R. Other events may ask for more.
    while (fallback_ < revealed_.size() && revealed_[fallback_]) ++fallback_;
    if (fallback_ == revealed_.size()) {
      throw TreeDefinitionError("exploration tree has no unrevealed site left");
    }
    return static_cast<Element>(fallback_);
  }

  void observe(Element e, bool value) override {
    revealed_[e] = 1;
    walk_.observe(e, value);
  }

 private:
  std::shared_ptr<const TriangularBox> box_;
  InterfaceWalk walk_;
  std::vector<std::uint8_t> revealed_;
  std::size_t fallback_ = 0;
};

void check_anchor(const TriangularBox& box, std::size_t anchor) {
  if (anchor >= box.side()) {
    throw DomainError("anchor " + std::to_string(anchor) + " is not on the right side of a box of side " +
                      std::to_string(box.side()));
  }
}

}  // namespace

DecisionTree exploration_tree(const TriangularBox& box, std::size_t anchor) {
  check_anchor(box, anchor);
  auto shared = std::make_shared<const TriangularBox>(box);
  std::string name = "exploration(R=" + std::to_string(box.side()) + ",v0=(" +
                     std::to_string(box.side() - 1) + "," + std::to_string(anchor) + "))";
  return DecisionTree(std::move(name), box.size(), [shared, anchor]() -> std::unique_ptr<QueryCursor> {
    return std::make_unique<ExplorationCursor>(shared, anchor);
  });
}

ExplorationResult explore(const TriangularBox& box, std::size_t anchor,
                          const Configuration& omega) {
  check_anchor(box, anchor);
  if (omega.size() != box.size()) throw DimensionError("configuration does not fit the box");
  InterfaceWalk walk(box, anchor);
  ExplorationResult r;
  while (auto e = walk.advance()) {
    r.revealed.push_back(*e);
    walk.observe(*e, omega[*e]);
  }
  r.upper = walk.upper().value_or(false);
  r.lower = walk.lower();
  r.decision = r.upper || r.lower.value_or(false);
  r.steps = walk.steps();
  return r;
}

}  // namespace kofn
