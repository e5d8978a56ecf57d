#include "upo/grid.hpp"

#include <cmath>
#include <string>

#include "upo/errors.hpp"

namespace upo {

NonUniqueMaximizer::NonUniqueMaximizer(std::int64_t k, std::int64_t first, std::int64_t second)
    : Error("maximizer at k=" + std::to_string(k) + " is not unique (indices " + std::to_string(first) + " and " +
            std::to_string(second) + ")"),
      time_(k),
      first_(first),
      second_(second) {}

AssumptionViolation::AssumptionViolation(const std::string& what, std::int64_t k, std::int64_t index)
    : Error(what + " (witness k=" + std::to_string(k) + ", index=" + std::to_string(index) + ")"),
      time_(k),
      index_(index) {}

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : Error(line > 0 ? source + ":" + std::to_string(line) + ": " + message : source + ": " + message), line_(line) {}

InputGrid::InputGrid(double spacing, std::optional<IndexInterval> bounds) : spacing_(spacing), bounds_(bounds) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw ParameterError("grid spacing must be positive, got " + std::to_string(spacing));
  }
  if (bounds_ && bounds_->lo >= bounds_->hi) {
    throw ParameterError("grid bounds need lo < hi");
  }
}

GridIndex InputGrid::nearest(double u) const { return static_cast<GridIndex>(std::llround(u / spacing_)); }

void InputGrid::check(GridIndex i) const {
  if (!contains(i)) {
    throw BoundsError("grid index " + std::to_string(i) + " outside [" + std::to_string(bounds_->lo) + ", " +
                      std::to_string(bounds_->hi) + "]");
  }
}

GridIndex InputGrid::midpoint() const {
  if (!bounds_) return 0;
  return bounds_->lo + (bounds_->hi - bounds_->lo) / 2;
}

}  // namespace upo
