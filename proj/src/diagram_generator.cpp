#include <map>
#include <random>

#include "morse_concordance/error.hpp"
#include "morse_concordance/fold_diagram.hpp"

namespace morse_concordance {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Inclusive range.
  int uniform(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }
  bool coin() { return (engine_() & 1U) != 0; }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(0, static_cast<int>(items.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

int abs_index(int n, int rho) { return std::max(rho, n - rho); }

int cusp_between(int a, int b) { return a == b ? a - 1 : std::min(a, b); }

class Builder {
 public:
  Builder(int n, Rng& rng, CuspMode mode) : n_(n), k_((n - 1) / 2), rng_(rng), mode_(mode) {}

  std::int64_t turnings(int parity) { return parity + 2 * rng_.uniform(0, 1); }

  DiagramComponent vertical_arc(int lambda) {
    DiagramComponent c;
    c.endpoints = {{Side::bottom, lambda}, {Side::top, lambda}};
    c.segments = {{abs_index(n_, lambda), turnings(0)}};
    return c;
  }

  DiagramComponent end_arc(Side side, int lambda) {
    DiagramComponent c;
    c.endpoints = {{side, lambda}, {side, n_ - lambda}};
    c.segments = {{abs_index(n_, lambda), turnings(1)}};
    return c;
  }

  DiagramComponent plain_circle() {
    DiagramComponent c;
    c.shape = Shape::circle;
    c.segments = {{rng_.uniform((n_ + 1) / 2, n_), turnings(0)}};
    return c;
  }

  // Next oriented index across a cusp allowed by the mode.
  std::vector<int> steps(int rho) const {
    std::vector<int> out;
    for (int next : {n_ - 1 - rho, n_ + 1 - rho}) {
      if (next < 0 || next > n_) continue;
      const int cusp = cusp_between(abs_index(n_, rho), abs_index(n_, next));
      if (mode_ == CuspMode::middle_index && !(n_ % 2 == 1 && cusp == k_)) continue;
      out.push_back(next);
    }
    return out;
  }

  int first_rho() {
    if (mode_ == CuspMode::middle_index) return rng_.coin() ? k_ : k_ + 1;
    return rng_.uniform(0, n_);
  }

  DiagramComponent from_rhos(const std::vector<int>& rhos, std::optional<std::pair<Side, Side>> sides) {
    DiagramComponent c;
    for (int rho : rhos) c.segments.push_back({abs_index(n_, rho), 0});
    const std::size_t cusp_count = sides ? rhos.size() - 1 : rhos.size();
    for (std::size_t j = 0; j < cusp_count; ++j) {
      const int a = c.segments[j].absolute_index;
      const int b = c.segments[(j + 1) % rhos.size()].absolute_index;
      c.cusps.push_back({cusp_between(a, b)});
    }
    if (sides) {
      c.shape = Shape::arc;
      const int lambda0 = sides->first == Side::bottom ? rhos.front() : n_ - rhos.front();
      const int lambda1 = sides->second == Side::bottom ? n_ - rhos.back() : rhos.back();
      c.endpoints = {{sides->first, lambda0}, {sides->second, lambda1}};
    } else {
      c.shape = Shape::circle;
    }
    for (std::size_t j = 0; j < c.segments.size(); ++j)
      c.segments[j].turning_count = turnings(turning_parity(segment_type(c, j)));
    return c;
  }

  DiagramComponent chain_arc() {
    std::vector<int> rhos{first_rho()};
    const int cusps = rng_.uniform(1, 3);
    for (int j = 0; j < cusps; ++j) rhos.push_back(rng_.pick(steps(rhos.back())));
    const Side start = rng_.coin() ? Side::bottom : Side::top;
    const Side finish = rng_.coin() ? Side::bottom : Side::top;
    return from_rhos(rhos, std::pair{start, finish});
  }

  DiagramComponent chain_circle() {
    std::vector<int> rhos{first_rho()};
    if (mode_ == CuspMode::middle_index) {
      const int cusps = rng_.uniform(1, 3);
      for (int j = 1; j < cusps; ++j) rhos.push_back(rhos.front());
      return from_rhos(rhos, std::nullopt);
    }
    // Walk out and retrace: every step is reversible with the same cusp.
    const int out = rng_.uniform(1, 2);
    for (int j = 0; j < out; ++j) rhos.push_back(rng_.pick(steps(rhos.back())));
    for (int j = out - 1; j >= 1; --j) rhos.push_back(rhos[static_cast<std::size_t>(j)]);
    return from_rhos(rhos, std::nullopt);
  }

  // Arc with one cusp of the given index and polarity.
  DiagramComponent birth_arc(int cusp_index, CuspPolarity polarity) {
    struct Option {
      int rho0, rho1;
    };
    std::vector<Option> options;
    for (int rho0 = 0; rho0 <= n_; ++rho0) {
      for (int rho1 : {n_ - 1 - rho0, n_ + 1 - rho0}) {
        if (rho1 < 0 || rho1 > n_) continue;
        const int a0 = abs_index(n_, rho0);
        const int a1 = abs_index(n_, rho1);
        if (a0 == a1 || cusp_between(a0, a1) != cusp_index) continue;
        // The upper branch decides the polarity.
        const bool upper_first = a0 == cusp_index + 1;
        const bool high_forward = upper_first ? rho0 == a0 : rho1 == a1;
        const bool into = upper_first ? high_forward : !high_forward;
        if ((into ? CuspPolarity::in : CuspPolarity::out) == polarity) options.push_back({rho0, rho1});
      }
    }
    if (options.empty()) throw InternalConsistencyError("no birth arc for the requested cusp");
    const Option o = rng_.pick(options);
    const Side start = rng_.coin() ? Side::bottom : Side::top;
    const Side finish = rng_.coin() ? Side::bottom : Side::top;
    return from_rhos({o.rho0, o.rho1}, std::pair{start, finish});
  }

  int lambda_with_parity(int parity) {
    std::vector<int> options;
    for (int lambda = 0; lambda <= n_; ++lambda)
      if (lambda % 2 == parity) options.push_back(lambda);
    return rng_.pick(options);
  }

 private:
  int n_;
  int k_;
  Rng& rng_;
  CuspMode mode_;
};

std::int64_t total_turnings(const ConcordanceDiagram& d) {
  std::int64_t t = 0;
  for (const auto& c : d.components)
    for (const auto& s : c.segments) t += s.turning_count;
  return t;
}

void balance_polarity(ConcordanceDiagram& d, Builder& builder) {
  std::map<int, int> surplus;  // out - in per cusp index
  for (std::size_t ci = 0; ci < d.components.size(); ++ci) {
    for (std::size_t j = 0; j < d.components[ci].cusps.size(); ++j) {
      const int index = d.components[ci].cusps[j].absolute_index;
      switch (cusp_polarity(d, {ci, j})) {
        case CuspPolarity::in: --surplus[index]; break;
        case CuspPolarity::out: ++surplus[index]; break;
        case CuspPolarity::through: break;
      }
    }
  }
  for (const auto& [index, count] : surplus) {
    const CuspPolarity wanted = count > 0 ? CuspPolarity::in : CuspPolarity::out;
    for (int i = 0; i < std::abs(count); ++i) d.components.push_back(builder.birth_arc(index, wanted));
  }
}

}  // namespace

ConcordanceDiagram random_diagram(int n, std::uint64_t seed, int budget, const GeneratorOptions& options) {
  if (n < 2) throw Error("bad_dimension", "random diagrams need n >= 2");
  if (budget < 1) throw Error("budget_too_small", "budget must allow at least one component");
  if (options.cusps == CuspMode::middle_index && n % 2 == 0)
    throw Error("bad_mode", "middle-index cusps exist only in odd dimension");

  Rng rng(seed);
  Builder builder(n, rng, options.cusps);
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    ConcordanceDiagram d;
    d.n = n;
    d.components.push_back(builder.vertical_arc(0));
    d.components.push_back(builder.vertical_arc(n));

    const int draws = rng.uniform(1, budget);
    const int kinds = options.cusps == CuspMode::none ? 3 : 5;
    for (int i = 0; i < draws; ++i) {
      switch (rng.uniform(0, kinds - 1)) {
        case 0: d.components.push_back(builder.vertical_arc(rng.uniform(0, n))); break;
        case 1:
          d.components.push_back(
              builder.end_arc(rng.coin() ? Side::bottom : Side::top, rng.uniform(0, n)));
          break;
        case 2: d.components.push_back(builder.plain_circle()); break;
        case 3: d.components.push_back(builder.chain_arc()); break;
        default: d.components.push_back(builder.chain_circle()); break;
      }
    }
    if (options.balanced) balance_polarity(d, builder);

    auto [bottom, top] = boundary_data(d);
    if (n % 2 == 1) {
      // Vertical arcs move both alternating sums together; odd n needs 0.
      const std::int64_t chi = alternating_sum(bottom);
      for (std::int64_t i = 0; i < std::abs(chi); ++i)
        d.components.push_back(builder.vertical_arc(builder.lambda_with_parity(chi > 0 ? 1 : 0)));
      // An arc with both ends on one side flips the turning parity and keeps
      // the alternating sums in odd dimension.
      if (total_turnings(d) % 2 != 0)
        d.components.push_back(builder.end_arc(rng.coin() ? Side::bottom : Side::top, rng.uniform(0, n)));
    } else {
      std::int64_t diff = alternating_sum(bottom) - alternating_sum(top);
      while (diff != 0) {
        const int sign = diff > 0 ? 1 : -1;
        if (rng.coin()) {
          const int lambda = builder.lambda_with_parity(sign > 0 ? 1 : 0);
          d.components.push_back(builder.end_arc(Side::bottom, lambda));
          diff += 2 * (lambda % 2 == 0 ? 1 : -1);
        } else {
          const int lambda = builder.lambda_with_parity(sign > 0 ? 0 : 1);
          d.components.push_back(builder.end_arc(Side::top, lambda));
          diff -= 2 * (lambda % 2 == 0 ? 1 : -1);
        }
      }
      if (total_turnings(d) % 2 != 0) continue;
    }
    if (options.require_cusp && d.cusp_count() == 0) continue;

    if (DiagramReport r = validate_diagram(d, ValidationLevel::strict); !r.ok()) {
      throw InternalConsistencyError("generator produced an invalid diagram: " + r.violations.front().code +
                                     " (" + r.violations.front().detail + ")");
    }
    return d;
  }
  throw Error("retry_exhausted", "no strictly valid diagram within " + std::to_string(options.max_attempts) +
                                     " attempts");
}

}  // namespace morse_concordance
