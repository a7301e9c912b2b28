#pragma once

// Combinatorial model of the singular set S(F) of a generic map
// F: M x [0,1] -> R x [0,1] between two Morse functions f0 (bottom, t = 0)
// and f1 (top, t = 1).
//
// S(F) is a disjoint union of arcs and circles. Cusps cut it into fold
// segments; each segment carries its absolute fold index and the number of
// critical points of the height F2 = pr2 o F on it ("turnings"). Arcs end on
// critical points of f0 or f1.
//
// Index rules, from the fold and cusp normal forms with m = n + 1:
//   fold segment absolute index in [ceil(n/2), n]
//   cusp absolute index i in [ceil((n-1)/2), n-1]
//   the fold branches at a cusp of index i have absolute indices {i, i+1}
//   when i > (n-1)/2 and {i+1, i+1} when i = (n-1)/2.
//
// Oriented index. Traverse a component and measure the fold index against
// the normal obtained by turning the image tangent clockwise; call it rho.
// rho is constant on a segment and rho and n - rho are the two values with the
// segment's absolute index. Cusps sit in the upward standard position, so a
// traversal enters going up and leaves going down, and rho' = n - 1 - rho or
// n + 1 - rho across the cusp. A traversal leaving a bottom anchor of Morse
// index lambda starts with rho = lambda, one leaving a top anchor with
// rho = n - lambda; it reaches a bottom anchor with lambda = n - rho and a
// top anchor with lambda = rho. For cusp-free arcs this is exactly "same
// side: lambda and n - lambda, opposite sides: equal indices".
//
// Turning parities per segment type (ends of the segment):
//   (1)' bottom-bottom odd   (2)' top-top odd     (3)' bottom-top even
//   (4)' closed circle even  (5)' bottom-cusp even (6)' cusp-cusp odd
//   (7)' top-cusp odd
// The (5)'/(7)' split is a consequence of the upward cusp normalization.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morse_concordance/invariants.hpp"
#include "morse_concordance/morse_data.hpp"

namespace morse_concordance {

enum class Side { bottom, top };

struct BoundaryAnchor {
  Side side = Side::bottom;
  int morse_index = 0;

  friend bool operator==(const BoundaryAnchor&, const BoundaryAnchor&) = default;
};

struct Cusp {
  int absolute_index = 0;

  friend bool operator==(const Cusp&, const Cusp&) = default;
};

struct FoldSegment {
  int absolute_index = 0;
  std::int64_t turning_count = 0;

  friend bool operator==(const FoldSegment&, const FoldSegment&) = default;
};

enum class Shape { arc, circle };

/// One component of S(F). cusps[j] separates segments[j] and segments[j+1]
/// (cyclically for circles). Arcs have |cusps| = |segments| - 1 and two
/// endpoints; circles have |cusps| = |segments|, or one segment and no cusp.
struct DiagramComponent {
  Shape shape = Shape::arc;
  std::vector<FoldSegment> segments;
  std::vector<Cusp> cusps;
  std::vector<BoundaryAnchor> endpoints;

  friend bool operator==(const DiagramComponent&, const DiagramComponent&) = default;
};

struct ConcordanceDiagram {
  int n = 0;
  std::vector<DiagramComponent> components;

  std::size_t cusp_count() const;

  friend bool operator==(const ConcordanceDiagram&, const ConcordanceDiagram&) = default;
};

enum class ValidationLevel { structural, strict };

namespace diagram_code {
inline constexpr const char* kDimension = "dimension";
inline constexpr const char* kArity = "arity";
inline constexpr const char* kSegmentRange = "segment_range";
inline constexpr const char* kCuspRange = "cusp_range";
inline constexpr const char* kAnchorRange = "anchor_range";
inline constexpr const char* kNegativeTurnings = "negative_turnings";
inline constexpr const char* kCuspAdjacency = "cusp_adjacency";
inline constexpr const char* kArcEndpoint = "arc_endpoint";
inline constexpr const char* kEndpointRelation = "endpoint_relation";
inline constexpr const char* kOrientation = "orientation";
inline constexpr const char* kTurningParity = "turning_parity";
inline constexpr const char* kEulerParity = "euler_parity";
inline constexpr const char* kBoundaryVector = "boundary_vector";
}  // namespace diagram_code

struct DiagramViolation {
  std::string code;
  /// Component index, or -1 for diagram-level violations.
  int component = -1;
  /// Segment or cusp position inside the component, or -1.
  int position = -1;
  std::string detail;
};

struct DiagramReport {
  std::vector<DiagramViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(std::string_view code) const;
};

DiagramReport validate_diagram(const ConcordanceDiagram& d, ValidationLevel level);

/// Types of components of S(F).
enum class ComponentType {
  bottom_arc = 1,    ///< both ends on critical points of f0
  top_arc = 2,       ///< both ends on critical points of f1
  crossing_arc = 3,  ///< one end on f0, the other on f1
  circle = 4,
};

ComponentType component_type(const DiagramComponent& c);

/// Index i(c) of a crossing arc: the Morse index at its bottom end. Empty for
/// other component types.
std::optional<int> crossing_index(const DiagramComponent& c);

/// Types of components of S(F) minus the cusps, named by their two ends.
enum class SegmentType {
  bottom_bottom = 1,
  top_top = 2,
  bottom_top = 3,
  closed = 4,
  bottom_cusp = 5,
  cusp_cusp = 6,
  top_cusp = 7,
};

SegmentType segment_type(const DiagramComponent& c, std::size_t segment);

/// Required parity of the turning count on a segment of the given type.
int turning_parity(SegmentType type);

/// Smallest nonnegative turning count with the required parity.
inline std::int64_t minimal_turnings(SegmentType type) { return turning_parity(type); }

/// Critical vectors of f0 and f1 read off the anchors.
std::pair<CriticalVector, CriticalVector> boundary_data(const ConcordanceDiagram& d);

/// Oriented index of every segment of a component along its stored
/// traversal, or empty when no consistent assignment exists. Circles have
/// two assignments (rho and n - rho); the one starting from the higher value
/// on the first segment is returned.
std::optional<std::vector<int>> oriented_indices(int n, const DiagramComponent& c);

struct Congruence {
  std::string name;
  std::string statement;
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  /// The congruence is asserted for this diagram. Congruences that need every
  /// cusp to have absolute index k are evaluated but not asserted otherwise.
  bool applies = true;
  bool holds = true;
  /// Component the congruence is about, -1 for global ones.
  int component = -1;
};

struct CongruenceReport {
  int n = 0;
  CriticalVector bottom;
  CriticalVector top;
  std::vector<Congruence> congruences;

  /// Applicable congruences that fail. Zero on every strictly valid diagram.
  std::size_t violations() const;
};

/// Evaluates, mod 2, the counting identities behind the classification:
///   a   sigma(f0) = #type 1 + #{type 3 : i(c) <= k}
///   b   sigma(f1) = #type 2 + #{type 3 : i(c) <= k}
///   c   total turnings = 0
///   d1  total cusps = #type 1 + #type 2
///   d2  #type 1 + #type 2 = sigma(f0) + sigma(f1)
///   e   per component: turnings = l(c) + 1 (types 1, 2), l(c) (types 3, 4)
///   f   #cusps of index k = sigma(f0) + sigma(f1)
///   g   sigma(f0) = sigma(f1) for cusp-free diagrams
/// with n = 2k + 1. a, b, d2 are asserted only when every cusp has index k;
/// sigma-based ones only for odd n. Throws Error("invalid_diagram") unless
/// the diagram is strictly valid.
CongruenceReport verify_congruences(const ConcordanceDiagram& d);

struct CuspRef {
  std::size_t component = 0;
  std::size_t cusp = 0;

  friend bool operator==(const CuspRef&, const CuspRef&) = default;
};

enum class CuspPolarity {
  /// Index-k cusp of odd n: the high direction runs through it.
  through,
  /// Both incident branches point their high direction into the cusp.
  in,
  out,
};

/// Polarity of a cusp in a structurally valid diagram.
CuspPolarity cusp_polarity(const ConcordanceDiagram& d, CuspRef ref);

/// Removes two cusps of equal absolute index and splices the four incident
/// branches pairwise along equal absolute indices, keeping the oriented
/// index consistent. Spliced segments get minimal turning counts for their new
/// type. Cusps of index above (n-1)/2 must have opposite polarity.
///
/// Throws Error("cusp_not_found"), Error("index_mismatch"),
/// Error("not_matching") or Error("invalid_diagram"); an
/// InternalConsistencyError if the result fails strict validation or changes
/// the boundary data.
ConcordanceDiagram eliminate_matching_pair(const ConcordanceDiagram& d, CuspRef a, CuspRef b);

struct EliminationObstruction {
  /// "cusp_parity": odd number of index-k cusps, equal to sigma(f0)+sigma(f1).
  /// "phi": unequal numbers of in and out cusps at some index, which equals a
  /// difference between Phi(f0) and Phi(f1).
  std::string kind;
  int cusp_index = 0;
  std::string detail;
};

struct EliminationResult {
  /// Cusp-free diagram on success, the diagram reached so far on failure.
  ConcordanceDiagram diagram;
  std::optional<EliminationObstruction> obstruction;
  int pairs_eliminated = 0;

  bool succeeded() const noexcept { return !obstruction.has_value(); }
};

/// Eliminates cusps in matching pairs from the top index down. Succeeds
/// exactly when Phi(f0) = Phi(f1) and, for odd n, sigma(f0) = sigma(f1).
/// Throws Error("invalid_diagram") unless d is strictly valid.
EliminationResult eliminate_all_cusps(const ConcordanceDiagram& d);

enum class CuspMode {
  none,
  /// Only cusps of absolute index k, n = 2k + 1.
  middle_index,
  any,
};

struct GeneratorOptions {
  CuspMode cusps = CuspMode::any;
  /// Add birth arcs until every cusp index has as many in as out cusps, which
  /// makes Phi(f0) = Phi(f1).
  bool balanced = false;
  bool require_cusp = false;
  int max_attempts = 1000;
};

/// Random strictly valid diagram, deterministic in (n, seed, budget, options).
/// budget caps the number of random components drawn before repairs.
/// Throws Error("budget_too_small") or Error("retry_exhausted").
ConcordanceDiagram random_diagram(int n, std::uint64_t seed, int budget,
                                  const GeneratorOptions& options = {});

}  // namespace morse_concordance
