#include <doctest.h>

#include <functional>

#include "diagram_builders.hpp"
#include "morse_concordance/error.hpp"

using namespace morse_concordance;
using namespace test_diagrams;

namespace {

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

ConcordanceDiagram birth_and_death() {
  return with(product({1, 0, 0, 1}), {bottom_death_n3(), top_birth_n3()});
}

}  // namespace

TEST_CASE("a death and a birth cancel") {
  const auto d = birth_and_death();
  REQUIRE(validate_diagram(d, ValidationLevel::strict).ok());
  const auto out = eliminate_matching_pair(d, {2, 0}, {3, 0});
  CHECK(out.cusp_count() == 0);
  CHECK(boundary_data(out) == boundary_data(d));
  CHECK(validate_diagram(out, ValidationLevel::strict).ok());
  for (const auto& c : out.components) CHECK(component_type(c) == ComponentType::crossing_arc);
}

TEST_CASE("a single cusp has no partner") {
  const auto d = with(product({1, 0, 0, 1}), {top_birth_n3()});
  CHECK(code_of([&] { eliminate_matching_pair(d, {2, 0}, {2, 0}); }) == "cusp_not_found");
  CHECK(code_of([&] { eliminate_matching_pair(d, {2, 0}, {2, 1}); }) == "cusp_not_found");
  CHECK(code_of([&] { eliminate_matching_pair(d, {0, 0}, {2, 0}); }) == "cusp_not_found");
}

TEST_CASE("cusps of different index do not match") {
  const auto d = with(product({1, 0, 0, 1}),
                      {top_birth_n3(), bottom_death_n3(), arc(bottom(0), bottom(1), {{3, 0}, {2, 0}}, {2}),
                       arc(top(0), top(1), {{3, 1}, {2, 1}}, {2})});
  REQUIRE(validate_diagram(d, ValidationLevel::strict).ok());
  CHECK(code_of([&] { eliminate_matching_pair(d, {2, 0}, {4, 0}); }) == "index_mismatch");
}

TEST_CASE("high cusps need opposite polarity") {
  // Two (0, 1) deaths at the bottom have the same polarity.
  const auto same = with(product({1, 0, 0, 1}), {arc(bottom(0), bottom(1), {{3, 0}, {2, 0}}, {2}),
                                                  arc(bottom(0), bottom(1), {{3, 0}, {2, 0}}, {2}),
                                                  arc(top(0), top(1), {{3, 1}, {2, 1}}, {2}),
                                                  arc(top(0), top(1), {{3, 1}, {2, 1}}, {2})});
  REQUIRE(validate_diagram(same, ValidationLevel::strict).ok());
  CHECK(cusp_polarity(same, {2, 0}) == cusp_polarity(same, {3, 0}));
  CHECK(cusp_polarity(same, {2, 0}) != cusp_polarity(same, {4, 0}));
  CHECK(code_of([&] { eliminate_matching_pair(same, {2, 0}, {3, 0}); }) == "not_matching");
  const auto out = eliminate_matching_pair(same, {2, 0}, {4, 0});
  CHECK(out.cusp_count() == 2);
  CHECK(boundary_data(out) == boundary_data(same));
}

TEST_CASE("middle index cusps pass the high direction through") {
  const auto d = birth_and_death();
  CHECK(cusp_polarity(d, {2, 0}) == CuspPolarity::through);
}

TEST_CASE("two eliminations clear four cusps") {
  const auto d = with(birth_and_death(), {bottom_death_n3(), top_birth_n3()});
  REQUIRE(d.cusp_count() == 4);
  const auto once = eliminate_matching_pair(d, {2, 0}, {3, 0});
  CHECK(once.cusp_count() == 2);
  std::vector<CuspRef> left;
  for (std::size_t c = 0; c < once.components.size(); ++c)
    for (std::size_t j = 0; j < once.components[c].cusps.size(); ++j) left.push_back({c, j});
  REQUIRE(left.size() == 2);
  const auto twice = eliminate_matching_pair(once, left[0], left[1]);
  CHECK(twice.cusp_count() == 0);
  CHECK(boundary_data(twice) == boundary_data(d));
}

TEST_CASE("eliminate all") {
  const auto even = eliminate_all_cusps(birth_and_death());
  CHECK(even.succeeded());
  CHECK(even.pairs_eliminated == 1);
  CHECK(even.diagram.cusp_count() == 0);
  CHECK(boundary_data(even.diagram) == boundary_data(birth_and_death()));

  const auto odd = eliminate_all_cusps(with(product({1, 0, 0, 1}), {top_birth_n3()}));
  CHECK_FALSE(odd.succeeded());
  REQUIRE(odd.obstruction);
  CHECK(odd.obstruction->kind == "cusp_parity");
  CHECK(odd.obstruction->cusp_index == 1);
  CHECK(odd.obstruction->detail.find("cusp parity 1") == 0);

  const auto free = product({1, 0, 0, 1});
  const auto same = eliminate_all_cusps(free);
  CHECK(same.succeeded());
  CHECK(same.diagram == free);
}

TEST_CASE("a phi difference blocks elimination") {
  // n = 2: a (1, 2) pair born at the top changes phi_2.
  const auto d = with(product({1, 0, 1}), {arc(top(1), top(2), {{1, 1}, {2, 1}}, {1})});
  REQUIRE(validate_diagram(d, ValidationLevel::strict).ok());
  const auto r = eliminate_all_cusps(d);
  CHECK_FALSE(r.succeeded());
  REQUIRE(r.obstruction);
  CHECK(r.obstruction->kind == "phi");
}

TEST_CASE("elimination on random diagrams") {
  for (int n : {2, 3, 4, 5}) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const auto d = random_diagram(n, seed, 5, {CuspMode::any, seed % 2 == 0});
      const auto [v0, v1] = boundary_data(d);
      const auto r = eliminate_all_cusps(d);
      CHECK(r.succeeded() == (concordance_class(v0) == concordance_class(v1)));
      if (r.succeeded()) {
        CHECK(r.diagram.cusp_count() == 0);
        CHECK(boundary_data(r.diagram) == boundary_data(d));
      }
    }
  }
}
