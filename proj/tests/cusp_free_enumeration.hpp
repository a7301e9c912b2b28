#pragma once

// Exhaustive list of cusp-free diagrams, with sigma of both ends counted
// straight from the anchors so the check does not go through the congruence
// code.

#include <cstdint>
#include <functional>
#include <vector>

#include "morse_concordance/fold_diagram.hpp"

namespace test_diagrams {

using namespace morse_concordance;

/// Every single-segment cusp-free component of dimension n with turnings up
/// to max_turnings that is structurally valid on its own.
inline std::vector<DiagramComponent> cusp_free_components(int n, int max_turnings) {
  std::vector<DiagramComponent> out;
  auto keep = [&](const DiagramComponent& c) {
    if (validate_diagram({n, {c}}, ValidationLevel::structural).ok()) out.push_back(c);
  };
  for (int abs = (n + 1) / 2; abs <= n; ++abs) {
    for (int t = 0; t <= max_turnings; ++t) {
      for (Side s0 : {Side::bottom, Side::top}) {
        for (Side s1 : {Side::bottom, Side::top}) {
          for (int l0 = 0; l0 <= n; ++l0) {
            for (int l1 = 0; l1 <= n; ++l1) {
              DiagramComponent c;
              c.endpoints = {{s0, l0}, {s1, l1}};
              c.segments = {{abs, t}};
              keep(c);
            }
          }
        }
      }
      DiagramComponent loop;
      loop.shape = Shape::circle;
      loop.segments = {{abs, t}};
      keep(loop);
    }
  }
  return out;
}

inline int anchor_sigma(const ConcordanceDiagram& d, Side side) {
  const int k = (d.n - 1) / 2;
  int count = 0;
  for (const auto& c : d.components)
    for (const auto& e : c.endpoints)
      if (e.side == side && e.morse_index <= k) ++count;
  return count % 2;
}

struct EnumerationTally {
  std::int64_t candidates = 0;
  std::int64_t strict = 0;
  std::int64_t violations = 0;
};

/// Visits all multisets of at most max_components components and checks
/// sigma(f0) = sigma(f1) on the strictly valid ones.
inline EnumerationTally enumerate_cusp_free(int n, int max_components, int max_turnings) {
  const auto pool = cusp_free_components(n, max_turnings);
  EnumerationTally tally;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> grow = [&](std::size_t from) {
    if (!pick.empty()) {
      ConcordanceDiagram d{n, {}};
      for (std::size_t i : pick) d.components.push_back(pool[i]);
      ++tally.candidates;
      if (validate_diagram(d, ValidationLevel::strict).ok()) {
        ++tally.strict;
        if (anchor_sigma(d, Side::bottom) != anchor_sigma(d, Side::top)) ++tally.violations;
      }
    }
    if (static_cast<int>(pick.size()) == max_components) return;
    for (std::size_t i = from; i < pool.size(); ++i) {
      pick.push_back(i);
      grow(i);
      pick.pop_back();
    }
  };
  grow(0);
  return tally;
}

}  // namespace test_diagrams
