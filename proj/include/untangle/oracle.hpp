#pragma once

// Ground truth for small instances. Nothing here reuses the predicates or the
// flip code of the model, so disagreements expose bugs on either side.

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "untangle/model.hpp"
#include "untangle/strategies.hpp"

namespace untangle::oracle {

struct Verdict {
  bool valid = true;
  /// Index of the offending event; the event count for a bad final state.
  std::size_t index = 0;
  std::string reason;

  std::string to_string() const;
};

/// Re-simulates the events from the initial instance, re-checking every clause
/// of the flip definition and the declared property.
Verdict validate(const Instance& initial, std::span<const FlipEvent> events,
                 bool require_crossing_free = true);
Verdict validate_trace(const UntangleTrace& trace);

struct SearchResult {
  /// Minimum number of flips, or empty when the state cap was exceeded.
  std::optional<int> flips;
  std::size_t states = 0;
};

/// Exact minimum untangle length over every removal and insertion choice
/// legal for the property. Requires n <= 6.
SearchResult min_flips_bfs(const Instance& inst, std::size_t cap);

inline constexpr int kMaxBfsSegments = 6;

}  // namespace untangle::oracle
