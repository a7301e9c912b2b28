#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace morse_concordance {

/// Closed manifold M, described only by the data the invariants need.
struct ManifoldDescriptor {
  int dimension = 1;
  bool orientable = true;
  bool connected = true;
  std::int64_t euler_characteristic = 0;

  friend bool operator==(const ManifoldDescriptor&, const ManifoldDescriptor&) = default;
};

/// Counts nu_0..nu_n of critical points by Morse index. This is the whole
/// representation of a Morse function: every concordance invariant reads
/// only these counts.
class CriticalVector {
 public:
  CriticalVector() = default;
  explicit CriticalVector(std::vector<std::int64_t> counts) : nu_(std::move(counts)) {}
  CriticalVector(std::initializer_list<std::int64_t> counts) : nu_(counts) {}

  /// Zero vector of dimension n (length n + 1).
  static CriticalVector zeros(int n);

  /// Dimension n; the vector has n + 1 entries. -1 for an empty vector.
  int dimension() const noexcept { return static_cast<int>(nu_.size()) - 1; }
  std::size_t size() const noexcept { return nu_.size(); }

  std::int64_t operator[](int index) const { return nu_.at(static_cast<std::size_t>(index)); }
  std::int64_t& operator[](int index) { return nu_.at(static_cast<std::size_t>(index)); }

  std::span<const std::int64_t> counts() const noexcept { return nu_; }

  friend bool operator==(const CriticalVector&, const CriticalVector&) = default;

 private:
  std::vector<std::int64_t> nu_;
};

struct MorseFunctionRecord {
  ManifoldDescriptor manifold;
  CriticalVector critical_vector;
  std::string label;

  friend bool operator==(const MorseFunctionRecord&, const MorseFunctionRecord&) = default;
};

namespace violation_code {
inline constexpr const char* kDimensionNotPositive = "dimension_not_positive";
inline constexpr const char* kOddDimensionEuler = "odd_dimension_nonzero_euler";
inline constexpr const char* kLengthMismatch = "length_mismatch";
inline constexpr const char* kNegativeCount = "negative_count";
inline constexpr const char* kMissingMinimum = "missing_minimum";
inline constexpr const char* kMissingMaximum = "missing_maximum";
inline constexpr const char* kEulerIdentity = "euler_identity";
inline constexpr const char* kDisconnected = "disconnected";
}  // namespace violation_code

struct Violation {
  std::string code;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Violations make a record invalid; warnings do not (the classification assumes a
/// connected M, but sub-objects may legitimately be disconnected).
struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<Violation> warnings;

  bool ok() const noexcept { return violations.empty(); }
  bool has(std::string_view code) const;

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Sum over lambda of (-1)^lambda nu_lambda.
std::int64_t alternating_sum(const CriticalVector& v);

/// Checks the descriptor on its own (n >= 1, chi = 0 for odd n).
ValidationReport validate_manifold(const ManifoldDescriptor& m);

/// Checks v against a manifold of dimension n with Euler characteristic chi.
ValidationReport validate_vector(const CriticalVector& v, int n, std::int64_t chi);

ValidationReport validate_record(const MorseFunctionRecord& r);

/// Adds a birth pair at indices (index, index + 1). Throws
/// Error("index_out_of_range") unless 0 <= index <= n - 1.
CriticalVector add_cancelling_pair(const CriticalVector& v, int index);

std::string to_string(const CriticalVector& v);

}  // namespace morse_concordance
