#include "morse_concordance/invariants.hpp"

#include <algorithm>
#include <sstream>

#include "morse_concordance/error.hpp"

namespace morse_concordance {

namespace {

std::string join_violations(const ValidationReport& report) {
  std::string out;
  for (const auto& v : report.violations) {
    if (!out.empty()) out += "; ";
    out += v.code + ": " + v.detail;
  }
  return out;
}

void require_dimension(const CriticalVector& v) {
  if (v.dimension() < 1)
    throw Error("invalid_vector", "critical vector needs at least two entries");
}

}  // namespace

std::int64_t phi_lambda(const CriticalVector& v, int lambda) {
  require_dimension(v);
  const int n = v.dimension();
  if (lambda < 0 || lambda > n) {
    throw Error("index_out_of_range",
                "phi index " + std::to_string(lambda) + " outside [0, " + std::to_string(n) + "]");
  }
  return v[lambda] - v[n - lambda];
}

std::vector<std::int64_t> phi(const CriticalVector& v) {
  require_dimension(v);
  const int n = v.dimension();
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(n / 2));
  for (int lambda = phi_first_index(n); lambda <= n; ++lambda) out.push_back(phi_lambda(v, lambda));
  return out;
}

Z2 sigma(const CriticalVector& v) {
  require_dimension(v);
  const int n = v.dimension();
  if (n % 2 == 0)
    throw Error("sigma_even_dimension", "sigma is undefined for even dimension " + std::to_string(n));
  const int k = (n - 1) / 2;
  std::int64_t sum = 0;
  for (int lambda = 0; lambda <= k; ++lambda) sum += v[lambda];
  return Z2(sum);
}

ConcordanceClass concordance_class(const CriticalVector& v) {
  ConcordanceClass c;
  c.n = v.dimension();
  c.phi = phi(v);
  if (c.n % 2 == 1) c.sigma = sigma(v);
  return c;
}

ConcordanceVerdict decide_concordant(const ManifoldDescriptor& m, const CriticalVector& v0,
                                     const CriticalVector& v1) {
  if (v0.dimension() != m.dimension || v1.dimension() != m.dimension) {
    throw Error("dimension_mismatch", "critical vectors " + to_string(v0) + " and " + to_string(v1) +
                                          " do not both have dimension " +
                                          std::to_string(m.dimension));
  }
  ValidationReport manifold_report = validate_manifold(m);
  if (!manifold_report.ok()) throw Error("invalid_manifold", join_violations(manifold_report));
  for (const CriticalVector* v : {&v0, &v1}) {
    ValidationReport r = validate_vector(*v, m.dimension, m.euler_characteristic);
    if (!r.ok()) throw Error("invalid_vector", to_string(*v) + ": " + join_violations(r));
  }

  ConcordanceVerdict verdict;
  verdict.class0 = concordance_class(v0);
  verdict.class1 = concordance_class(v1);
  if (!m.connected) verdict.notes.push_back("manifold is not connected; the classification assumes it is");
  if (m.dimension == 1)
    verdict.notes.push_back("n = 1: Phi is empty and the verdict rests on sigma alone");

  const int first = phi_first_index(m.dimension);
  for (std::size_t i = 0; i < verdict.class0.phi.size(); ++i) {
    if (verdict.class0.phi[i] != verdict.class1.phi[i]) {
      const int lambda = first + static_cast<int>(i);
      verdict.witness = InvariantWitness{"phi_" + std::to_string(lambda), lambda,
                                         verdict.class0.phi[i], verdict.class1.phi[i]};
      return verdict;
    }
  }
  if (verdict.class0.sigma && *verdict.class0.sigma != *verdict.class1.sigma) {
    verdict.witness =
        InvariantWitness{"sigma", -1, verdict.class0.sigma->value(), verdict.class1.sigma->value()};
    return verdict;
  }
  verdict.concordant = true;
  return verdict;
}

Realization realize_vector(const ManifoldDescriptor& m, const std::vector<std::int64_t>& target_phi,
                           std::optional<Z2> target_sigma) {
  const int n = m.dimension;
  if (n < 1) throw Error("bad_target", "dimension must be at least 1");
  if (target_phi.size() != static_cast<std::size_t>(n / 2)) {
    throw Error("bad_target", "Phi target has " + std::to_string(target_phi.size()) +
                                  " components, dimension " + std::to_string(n) + " needs " +
                                  std::to_string(n / 2));
  }
  if ((n % 2 == 1) != target_sigma.has_value()) {
    throw Error("bad_target", n % 2 == 1 ? "odd dimension needs a sigma target"
                                         : "even dimension takes no sigma target");
  }
  const std::int64_t chi = m.euler_characteristic;
  if (n % 2 == 1 && chi != 0) {
    throw Error("infeasible", "sum (-1)^lambda nu_lambda = " + std::to_string(chi) +
                                  " has no solution: every vector in odd dimension has alternating sum 0");
  }

  CriticalVector v = CriticalVector::zeros(n);
  const int first = phi_first_index(n);
  auto target = [&](int lambda) { return target_phi[static_cast<std::size_t>(lambda - first)]; };

  // Each Phi component pins a difference nu_lambda - nu_{n-lambda}; place the
  // smaller side at its lower bound (1 for the extreme indices, 0 otherwise).
  for (int lambda = first; lambda <= n; ++lambda) {
    const std::int64_t floor_value = (lambda == n) ? 1 : 0;
    const std::int64_t a = target(lambda);
    const std::int64_t low = std::max(floor_value, floor_value - a);
    v[n - lambda] = low;
    v[lambda] = low + a;
  }

  Realization out;
  if (n % 2 == 0) {
    // Middle index k moves the alternating sum in steps of (-1)^k; the pair
    // (k+1, k-1) moves it in steps of 2 (-1)^(k+1).
    const int k = n / 2;
    const std::int64_t sign_k = (k % 2 == 0) ? 1 : -1;
    std::int64_t diff = (chi - alternating_sum(v)) * sign_k;
    if (diff < 0) {
      const std::int64_t pairs = (-diff + 1) / 2;
      v[k + 1] += pairs;
      v[k - 1] += pairs;
      diff += 2 * pairs;
    }
    v[k] += diff;
  } else {
    // Odd n: the unconstrained pair (k+1, k) carries the alternating sum.
    const int k = (n - 1) / 2;
    const std::int64_t sign = (k % 2 == 0) ? -1 : 1;  // (-1)^(k+1)
    const std::int64_t needed = (chi - alternating_sum(v)) * sign;  // nu_{k+1} - nu_k to add
    const std::int64_t floor_value = (k == 0) ? 1 : 0;
    const std::int64_t base_k = v[k];
    const std::int64_t base_k1 = v[k + 1];
    if (k == 0) {
      // n = 1: nu_0 = nu_1 >= 1 and the pair is the only data.
      v[0] = std::max(floor_value, floor_value - needed);
      v[1] = v[0] + needed;
    } else {
      v[k] = base_k + std::max<std::int64_t>(0, -needed);
      v[k + 1] = base_k1 + std::max<std::int64_t>(0, needed);
    }
    if (sigma(v) != *target_sigma) {
      v = add_cancelling_pair(v, k);
      out.notes.push_back("added a cancelling pair at indices " + std::to_string(k) + ", " +
                          std::to_string(k + 1) + " to set sigma");
    }
  }

  if (ValidationReport r = validate_vector(v, n, chi); !r.ok())
    throw InternalConsistencyError("realized vector " + to_string(v) + " is invalid: " + join_violations(r));
  ConcordanceClass got = concordance_class(v);
  if (got.phi != target_phi || got.sigma != target_sigma)
    throw InternalConsistencyError("realized vector " + to_string(v) + " misses the target invariants");

  out.notes.push_back("data-level construction: existence of a smooth Morse function with these counts on the given manifold is not certified");
  out.vector = std::move(v);
  return out;
}

WitnessPair witness_pair(const ManifoldDescriptor& m) {
  const int n = m.dimension;
  if (n < 1 || n % 2 == 0) {
    throw Error("no_witness_even_dimension",
                "in even dimension unoriented cobordant Morse functions are concordant; no witness exists");
  }
  const int k = (n - 1) / 2;
  Realization base = realize_vector(m, std::vector<std::int64_t>(static_cast<std::size_t>(n / 2), 0), Z2(1));
  WitnessPair out;
  out.first = base.vector;
  out.second = add_cancelling_pair(base.vector, k);
  out.oriented_framing = (n % 4 == 3);

  const ConcordanceClass c0 = concordance_class(out.first);
  const ConcordanceClass c1 = concordance_class(out.second);
  if (c0.phi != c1.phi || c0.sigma == c1.sigma)
    throw InternalConsistencyError("witness pair does not separate sigma with equal Phi");

  out.report.push_back("Phi equal: " + to_string(c0) + " vs " + to_string(c1));
  out.report.push_back("sigma differs: " + std::to_string(c0.sigma->value()) + " vs " +
                       std::to_string(c1.sigma->value()));
  out.report.push_back("not concordant: Phi together with sigma is a complete concordance invariant in odd dimension");
  out.report.push_back(
      "unoriented cobordant: taken from the known cobordism classification of Morse functions, not re-derived");
  if (out.oriented_framing) {
    out.report.push_back(
        "oriented cobordant as well (n = 3 mod 4): cited from the same classification, not re-derived");
  }
  if (n == 1) out.report.push_back("n = 1: Phi is empty; the pair is separated by sigma alone");
  return out;
}

std::string to_string(const ConcordanceClass& c) {
  std::ostringstream os;
  os << "(phi=(";
  for (std::size_t i = 0; i < c.phi.size(); ++i) {
    if (i) os << ',';
    os << c.phi[i];
  }
  os << ')';
  if (c.sigma) os << ", sigma=" << c.sigma->value();
  os << ')';
  return os.str();
}

}  // namespace morse_concordance
