#include <doctest.h>

#include "diagram_builders.hpp"
#include "morse_concordance/error.hpp"

using namespace morse_concordance;
using namespace test_diagrams;

namespace {

const Congruence& find(const CongruenceReport& r, const std::string& name, int component = -1) {
  for (const auto& c : r.congruences)
    if (c.name == name && c.component == component) return c;
  FAIL("missing congruence " << name);
  return r.congruences.front();
}

}  // namespace

TEST_CASE("product diagram is valid at both levels") {
  const auto d = product({1, 0, 0, 1});
  CHECK(validate_diagram(d, ValidationLevel::structural).ok());
  CHECK(validate_diagram(d, ValidationLevel::strict).ok());
}

TEST_CASE("lone bottom arc breaks turning parity") {
  ConcordanceDiagram d{3, {arc(bottom(1), bottom(2), {{2, 1}})}};
  CHECK(validate_diagram(d, ValidationLevel::structural).ok());
  const auto strict = validate_diagram(d, ValidationLevel::strict);
  CHECK(strict.has(diagram_code::kEulerParity));
}

TEST_CASE("cusp adjacency") {
  ConcordanceDiagram bad{3, {arc(top(1), top(2), {{2, 1}, {2, 1}}, {2})}};
  CHECK(validate_diagram(bad, ValidationLevel::structural).has(diagram_code::kCuspAdjacency));
  ConcordanceDiagram good{3, {arc(top(1), top(2), {{2, 1}, {2, 1}}, {1})}};
  CHECK(validate_diagram(good, ValidationLevel::structural).ok());
  ConcordanceDiagram high{3, {arc(bottom(0), bottom(1), {{3, 0}, {2, 0}}, {2})}};
  CHECK(validate_diagram(high, ValidationLevel::structural).ok());
}

TEST_CASE("structural rules") {
  CHECK(validate_diagram({0, {}}, ValidationLevel::structural).has(diagram_code::kDimension));
  CHECK(validate_diagram({3, {arc(bottom(0), top(0), {{1, 0}})}}, ValidationLevel::structural)
            .has(diagram_code::kSegmentRange));
  CHECK(validate_diagram({3, {arc(bottom(0), top(4), {{3, 0}})}}, ValidationLevel::structural)
            .has(diagram_code::kAnchorRange));
  CHECK(validate_diagram({3, {arc(bottom(0), top(0), {{3, -2}})}}, ValidationLevel::structural)
            .has(diagram_code::kNegativeTurnings));
  CHECK(validate_diagram({3, {arc(bottom(0), top(3), {{3, 0}})}}, ValidationLevel::structural)
            .has(diagram_code::kEndpointRelation));
  CHECK(validate_diagram({3, {arc(bottom(0), top(0), {{3, 1}})}}, ValidationLevel::structural)
            .has(diagram_code::kTurningParity));
  CHECK(validate_diagram({3, {arc(bottom(0), top(0), {{3, 0}, {3, 0}})}}, ValidationLevel::structural)
            .has(diagram_code::kArity));
  // Same-side anchors must be complementary, opposite-side anchors equal.
  CHECK(validate_diagram({3, {arc(bottom(1), bottom(1), {{2, 1}})}}, ValidationLevel::structural)
            .has(diagram_code::kEndpointRelation));
}

TEST_CASE("orientation across cusps") {
  // Leaving top(1) gives oriented index 2; the cusp keeps it at 2, so the
  // far end must be top(2), not top(1).
  ConcordanceDiagram d{3, {arc(top(1), top(1), {{2, 1}, {2, 1}}, {1})}};
  CHECK(validate_diagram(d, ValidationLevel::structural).has(diagram_code::kOrientation));
}

TEST_CASE("strict level checks boundary vectors") {
  ConcordanceDiagram d{3, {arc(bottom(0), top(0), {{3, 0}})}};
  CHECK(validate_diagram(d, ValidationLevel::strict).has(diagram_code::kBoundaryVector));
}

TEST_CASE("component types") {
  const auto b = arc(bottom(1), bottom(2), {{2, 1}});
  CHECK(component_type(b) == ComponentType::bottom_arc);
  CHECK_FALSE(crossing_index(b));
  CHECK(component_type(arc(top(1), top(2), {{2, 1}})) == ComponentType::top_arc);
  const auto x = arc(bottom(0), top(0), {{3, 0}});
  CHECK(component_type(x) == ComponentType::crossing_arc);
  CHECK(crossing_index(x) == 0);
  CHECK(crossing_index(arc(top(2), bottom(2), {{2, 0}})) == 2);
  CHECK(component_type(circle({{2, 0}})) == ComponentType::circle);
}

TEST_CASE("segment types") {
  CHECK(segment_type(arc(bottom(1), bottom(2), {{2, 1}}), 0) == SegmentType::bottom_bottom);
  CHECK(segment_type(arc(top(1), top(2), {{2, 1}}), 0) == SegmentType::top_top);
  CHECK(segment_type(arc(bottom(0), top(0), {{3, 0}}), 0) == SegmentType::bottom_top);
  CHECK(segment_type(circle({{2, 0}}), 0) == SegmentType::closed);
  const auto chain = arc(bottom(1), top(1), {{2, 0}, {2, 1}, {2, 1}}, {1, 1});
  CHECK(segment_type(chain, 0) == SegmentType::bottom_cusp);
  CHECK(segment_type(chain, 1) == SegmentType::cusp_cusp);
  CHECK(segment_type(chain, 2) == SegmentType::top_cusp);
  CHECK(segment_type(circle({{2, 1}, {2, 1}}, {1, 1}), 0) == SegmentType::cusp_cusp);
}

TEST_CASE("turning parity table") {
  CHECK(turning_parity(SegmentType::bottom_bottom) == 1);
  CHECK(turning_parity(SegmentType::top_top) == 1);
  CHECK(turning_parity(SegmentType::bottom_top) == 0);
  CHECK(turning_parity(SegmentType::closed) == 0);
  CHECK(turning_parity(SegmentType::bottom_cusp) == 0);
  CHECK(turning_parity(SegmentType::cusp_cusp) == 1);
  CHECK(turning_parity(SegmentType::top_cusp) == 1);
}

TEST_CASE("boundary data") {
  const auto p = boundary_data(product({1, 0, 0, 1}));
  CHECK(p.first == CriticalVector{1, 0, 0, 1});
  CHECK(p.second == CriticalVector{1, 0, 0, 1});

  const auto d = with(product({1, 0, 0, 1}), {top_birth_n3()});
  const auto [v0, v1] = boundary_data(d);
  CHECK(v0 == CriticalVector{1, 0, 0, 1});
  CHECK(v1 == CriticalVector{1, 1, 1, 1});

  const auto empty = boundary_data({3, {}});
  CHECK(empty.first == CriticalVector::zeros(3));
  CHECK(empty.second == CriticalVector::zeros(3));
  CHECK_FALSE(validate_diagram({3, {}}, ValidationLevel::strict).ok());
}

TEST_CASE("oriented indices") {
  const auto rho = oriented_indices(3, arc(top(1), top(2), {{2, 1}, {2, 1}}, {1}));
  REQUIRE(rho);
  CHECK(*rho == std::vector<int>{2, 2});
  const auto high = oriented_indices(3, arc(bottom(0), bottom(1), {{3, 0}, {2, 0}}, {2}));
  REQUIRE(high);
  CHECK(*high == std::vector<int>{0, 2});
  CHECK_FALSE(oriented_indices(3, arc(top(1), top(1), {{2, 1}, {2, 1}}, {1})));
}

TEST_CASE("congruences on the product diagram") {
  const auto r = verify_congruences(product({1, 0, 0, 1}));
  CHECK(r.violations() == 0);
  CHECK(find(r, "c").lhs == 0);
  CHECK(find(r, "d1").lhs == 0);
  CHECK(find(r, "d2").rhs == 0);
  CHECK(find(r, "f").lhs == 0);
}

TEST_CASE("congruences on a top birth") {
  const auto r = verify_congruences(with(product({1, 0, 0, 1}), {top_birth_n3()}));
  CHECK(r.violations() == 0);
  const auto& f = find(r, "f");
  CHECK(f.applies);
  CHECK(f.lhs == 1);
  CHECK(f.rhs == 1);
  const auto& d1 = find(r, "d1");
  CHECK(d1.lhs == 1);
  CHECK(d1.rhs == 1);
  CHECK(find(r, "b").lhs == 0);
  CHECK(find(r, "a").lhs == 1);
  CHECK(find(r, "e", 2).holds);
}

TEST_CASE("sigma congruences are not asserted for high cusps") {
  // n = 3, a (0, 1) pair born at the bottom needs a cusp of index 2.
  const auto d = with(product({1, 0, 0, 1}), {arc(bottom(0), bottom(1), {{3, 0}, {2, 0}}, {2})});
  REQUIRE(validate_diagram(d, ValidationLevel::strict).ok());
  const auto r = verify_congruences(d);
  CHECK(r.violations() == 0);
  CHECK_FALSE(find(r, "d2").applies);
  CHECK_FALSE(find(r, "d2").holds);
  CHECK(find(r, "f").applies);
  CHECK(find(r, "f").lhs == 0);
}

TEST_CASE("congruences need a strictly valid diagram") {
  CHECK_THROWS_AS(verify_congruences({3, {arc(bottom(1), bottom(2), {{2, 1}})}}), Error);
}

TEST_CASE("even dimension congruences") {
  const auto r = verify_congruences(product({1, 0, 1}));
  CHECK(r.violations() == 0);
  for (const auto& c : r.congruences) {
    if (c.name == "a" || c.name == "b" || c.name == "d2" || c.name == "f" || c.name == "g") CHECK_FALSE(c.applies);
  }
}

TEST_CASE("random diagrams are strictly valid and deterministic") {
  for (int n : {2, 3, 5}) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const auto d = random_diagram(n, seed, 5);
      CHECK(validate_diagram(d, ValidationLevel::strict).ok());
    }
  }
  CHECK(random_diagram(3, 1, 5) == random_diagram(3, 1, 5));
  CHECK(random_diagram(3, 1, 5, {CuspMode::middle_index}) == random_diagram(3, 1, 5, {CuspMode::middle_index}));
}

TEST_CASE("generator modes") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CHECK(random_diagram(3, seed, 4, {CuspMode::none}).cusp_count() == 0);
    GeneratorOptions mid{CuspMode::middle_index, false, true};
    const auto d = random_diagram(5, seed, 4, mid);
    CHECK(d.cusp_count() > 0);
    for (const auto& c : d.components)
      for (const auto& cusp : c.cusps) CHECK(cusp.absolute_index == 2);
    GeneratorOptions balanced{CuspMode::any, true, false};
    const auto b = boundary_data(random_diagram(4, seed, 4, balanced));
    CHECK(phi(b.first) == phi(b.second));
  }
}

TEST_CASE("generator argument checks") {
  CHECK_THROWS_AS(random_diagram(1, 0, 3), Error);
  CHECK_THROWS_AS(random_diagram(3, 0, 0), Error);
  CHECK_THROWS_AS(random_diagram(4, 0, 3, {CuspMode::middle_index}), Error);
}
