#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morse_concordance/morse_data.hpp"

namespace morse_concordance {

/// Element of the two-element group, addition mod 2.
class Z2 {
 public:
  constexpr Z2() = default;
  constexpr explicit Z2(std::int64_t value) : value_(static_cast<int>(((value % 2) + 2) % 2)) {}

  constexpr int value() const noexcept { return value_; }

  friend constexpr Z2 operator+(Z2 a, Z2 b) { return Z2(a.value_ + b.value_); }
  friend constexpr bool operator==(Z2, Z2) = default;

 private:
  int value_ = 0;
};

/// Concordance class of a Morse function: Phi, plus sigma in odd dimensions.
struct ConcordanceClass {
  int n = 0;
  /// phi_lambda for lambda = floor((n+3)/2) .. n, increasing.
  std::vector<std::int64_t> phi;
  std::optional<Z2> sigma;

  friend bool operator==(const ConcordanceClass&, const ConcordanceClass&) = default;
};

/// Smallest Morse index that appears in Phi.
constexpr int phi_first_index(int n) { return (n + 3) / 2; }

/// nu_lambda - nu_{n-lambda}.
std::int64_t phi_lambda(const CriticalVector& v, int lambda);

std::vector<std::int64_t> phi(const CriticalVector& v);

/// Count of critical points of index <= k, mod 2, for n = 2k + 1.
/// Throws Error("sigma_even_dimension") when n is even.
Z2 sigma(const CriticalVector& v);

ConcordanceClass concordance_class(const CriticalVector& v);

/// The first invariant that differs between two classes.
struct InvariantWitness {
  /// "phi_<lambda>" or "sigma".
  std::string component;
  /// Morse index of the differing phi component; -1 for sigma.
  int lambda = -1;
  std::int64_t value0 = 0;
  std::int64_t value1 = 0;

  friend bool operator==(const InvariantWitness&, const InvariantWitness&) = default;
};

struct ConcordanceVerdict {
  bool concordant = false;
  std::optional<InvariantWitness> witness;
  ConcordanceClass class0;
  ConcordanceClass class1;
  std::vector<std::string> notes;
};

/// Decides whether two Morse functions on m are concordant from their
/// critical vectors. Throws Error("dimension_mismatch") or
/// Error("invalid_vector") when the inputs do not describe Morse functions
/// on m.
ConcordanceVerdict decide_concordant(const ManifoldDescriptor& m, const CriticalVector& v0,
                                     const CriticalVector& v1);

struct Realization {
  CriticalVector vector;
  std::vector<std::string> notes;
};

/// Builds a critical vector on m with the requested invariants.
///
/// The result is valid against m and concordance_class(result) equals
/// (target_phi, target_sigma). Throws Error("bad_target") when the target's
/// shape does not fit n and Error("infeasible") when no nonnegative vector
/// satisfies the constraints; the message names the failing constraint.
///
/// This is a data-level constructor: it does not certify that a smooth Morse
/// function with these counts exists on a particular M.
Realization realize_vector(const ManifoldDescriptor& m, const std::vector<std::int64_t>& target_phi,
                           std::optional<Z2> target_sigma);

struct WitnessPair {
  CriticalVector first;
  CriticalVector second;
  std::vector<std::string> report;
  /// Both functions are oriented cobordant too (n = 3 mod 4).
  bool oriented_framing = false;
};

/// A pair of Morse functions on m with equal Phi and different sigma: not
/// concordant, although cobordant. Odd n only; throws
/// Error("no_witness_even_dimension") otherwise.
WitnessPair witness_pair(const ManifoldDescriptor& m);

std::string to_string(const ConcordanceClass& c);

}  // namespace morse_concordance
