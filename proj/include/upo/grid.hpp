#pragma once

#include <cstdint>
#include <optional>

namespace upo {

using GridIndex = std::int64_t;
using TimeIndex = std::int64_t;

/// Closed index interval [lo, hi].
struct IndexInterval {
  GridIndex lo = 0;
  GridIndex hi = 0;

  bool contains(GridIndex i) const { return i >= lo && i <= hi; }
  std::int64_t size() const { return hi - lo + 1; }
};

/// Equidistant input set u = i * spacing, optionally restricted to an index interval.
class InputGrid {
 public:
  explicit InputGrid(double spacing, std::optional<IndexInterval> bounds = std::nullopt);

  double spacing() const { return spacing_; }
  const std::optional<IndexInterval>& bounds() const { return bounds_; }

  double value(GridIndex i) const { return static_cast<double>(i) * spacing_; }
  GridIndex nearest(double u) const;

  bool contains(GridIndex i) const { return !bounds_ || bounds_->contains(i); }
  /// Throws BoundsError when `i` is outside the bounds.
  void check(GridIndex i) const;
  /// Midpoint of the bounds (rounded down); 0 for an unbounded grid.
  GridIndex midpoint() const;

 private:
  double spacing_;
  std::optional<IndexInterval> bounds_;
};

}  // namespace upo
