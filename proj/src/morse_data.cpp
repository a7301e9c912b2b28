#include "morse_concordance/morse_data.hpp"

#include <algorithm>
#include <sstream>

#include "morse_concordance/error.hpp"

namespace morse_concordance {

CriticalVector CriticalVector::zeros(int n) {
  return CriticalVector(std::vector<std::int64_t>(static_cast<std::size_t>(n + 1), 0));
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::int64_t alternating_sum(const CriticalVector& v) {
  std::int64_t sum = 0;
  for (int lambda = 0; lambda <= v.dimension(); ++lambda)
    sum += (lambda % 2 == 0) ? v[lambda] : -v[lambda];
  return sum;
}

ValidationReport validate_manifold(const ManifoldDescriptor& m) {
  ValidationReport report;
  if (m.dimension < 1) {
    report.violations.push_back(
        {violation_code::kDimensionNotPositive, "dimension must be at least 1"});
  } else if (m.dimension % 2 == 1 && m.euler_characteristic != 0) {
    report.violations.push_back({violation_code::kOddDimensionEuler,
                                 "a closed odd-dimensional manifold has Euler characteristic 0, got " +
                                     std::to_string(m.euler_characteristic)});
  }
  if (!m.connected)
    report.warnings.push_back({violation_code::kDisconnected, "manifold is not connected"});
  return report;
}

ValidationReport validate_vector(const CriticalVector& v, int n, std::int64_t chi) {
  ValidationReport report;
  if (v.dimension() != n) {
    report.violations.push_back({violation_code::kLengthMismatch,
                                 "expected " + std::to_string(n + 1) + " counts, got " +
                                     std::to_string(v.size())});
    return report;
  }
  for (int lambda = 0; lambda <= n; ++lambda) {
    if (v[lambda] < 0)
      report.violations.push_back({violation_code::kNegativeCount,
                                   "nu_" + std::to_string(lambda) + " is negative"});
  }
  if (v[0] < 1)
    report.violations.push_back({violation_code::kMissingMinimum, "nu_0 >= 1 is required"});
  if (v[n] < 1)
    report.violations.push_back({violation_code::kMissingMaximum, "nu_n >= 1 is required"});
  const std::int64_t sum = alternating_sum(v);
  if (sum != chi) {
    report.violations.push_back({violation_code::kEulerIdentity,
                                 "alternating sum " + std::to_string(sum) +
                                     " differs from Euler characteristic " + std::to_string(chi)});
  }
  return report;
}

ValidationReport validate_record(const MorseFunctionRecord& r) {
  ValidationReport report = validate_manifold(r.manifold);
  if (r.manifold.dimension < 1) return report;
  ValidationReport vec = validate_vector(r.critical_vector, r.manifold.dimension,
                                         r.manifold.euler_characteristic);
  report.violations.insert(report.violations.end(), vec.violations.begin(), vec.violations.end());
  return report;
}

CriticalVector add_cancelling_pair(const CriticalVector& v, int index) {
  const int n = v.dimension();
  if (index < 0 || index > n - 1) {
    throw Error("index_out_of_range", "cancelling pair index " + std::to_string(index) +
                                          " outside [0, " + std::to_string(n - 1) + "]");
  }
  CriticalVector out = v;
  out[index] += 1;
  out[index + 1] += 1;
  return out;
}

std::string to_string(const CriticalVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v.counts()[i];
  }
  os << ')';
  return os.str();
}

}  // namespace morse_concordance
