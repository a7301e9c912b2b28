#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "morse_concordance/error.hpp"
#include "morse_concordance/invariants.hpp"
#include "morse_concordance/mesh_ingest.hpp"

using namespace morse_concordance;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(MC_DATA_DIR) + "/" + name);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SimplicialComplex complex_of(std::vector<std::vector<int>> facets, int n, std::size_t vertices) {
  SimplicialComplex k;
  k.n = n;
  k.vertex_count = vertices;
  k.facets = std::move(facets);
  return k;
}

std::string parse_error_of(const std::string& text) {
  try {
    parse_complex(text);
  } catch (const Error& e) {
    CHECK(e.code() == "parse_error");
    return e.what();
  }
  return "";
}

// Boundary of the (n+1)-simplex: a PL n-sphere.
SimplicialComplex simplex_boundary(int n) {
  SimplicialComplex k;
  k.n = n;
  k.vertex_count = static_cast<std::size_t>(n + 2);
  for (int drop = 0; drop < n + 2; ++drop) {
    std::vector<int> f;
    for (int v = 0; v < n + 2; ++v)
      if (v != drop) f.push_back(v);
    k.facets.push_back(f);
  }
  return k;
}

}  // namespace

TEST_CASE("reduced Betti numbers of small complexes") {
  CHECK(reduced_betti_z2({}) == std::vector<std::int64_t>{1});
  CHECK(reduced_betti_z2(complex_of({{0}, {1}}, 0, 2)) == std::vector<std::int64_t>{0, 1});
  CHECK(reduced_betti_z2(complex_of({{0, 1}, {1, 2}, {0, 2}}, 1, 3)) == std::vector<std::int64_t>{0, 0, 1});
  CHECK(reduced_betti_z2(complex_of({{0, 1, 2}}, 2, 3)) == std::vector<std::int64_t>{0, 0, 0, 0});
  CHECK(reduced_betti_z2(complex_of({{0}}, 0, 1)) == std::vector<std::int64_t>{0, 0});
}

TEST_CASE("Betti numbers of the torus") {
  const auto t = parse_complex(slurp("csaszar_torus.scx"));
  CHECK(reduced_betti_z2(t) == std::vector<std::int64_t>{0, 0, 2, 1});
}

TEST_CASE("bundled meshes") {
  const auto tet = parse_complex(slurp("tetrahedron.scx"));
  CHECK(tet.n == 2);
  CHECK(euler_characteristic(tet) == 2);
  CHECK(facets_connected(tet));
  const auto e = critical_vector(tet, parse_field(slurp("tetrahedron.field"), tet.vertex_count));
  CHECK(e.vector == CriticalVector{1, 0, 1});
  CHECK(e.critical_vertices.size() == 2);

  const auto oct = parse_complex(slurp("octahedron.scx"));
  CHECK(euler_characteristic(oct) == 2);
  CHECK(critical_vector(oct, parse_field(slurp("octahedron.field"), 6)).vector == CriticalVector{1, 0, 1});

  const auto torus = parse_complex(slurp("csaszar_torus.scx"));
  CHECK(euler_characteristic(torus) == 0);
  const auto te = critical_vector(torus, parse_field(slurp("csaszar_torus.field"), 7));
  CHECK(alternating_sum(te.vector) == 0);
  CHECK(te.vector[0] >= 1);
  CHECK(te.vector[2] >= 1);
}

TEST_CASE("lower links") {
  const auto tet = parse_complex(slurp("tetrahedron.scx"));
  VertexField f{{0, 1, 2, 3}};
  CHECK(lower_link(tet, 0, f).facets.empty());
  CHECK(lower_link(tet, 3, f).facets == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});
  // Ties break by vertex id.
  VertexField flat{{5, 5, 5, 5}};
  CHECK(lower_link(tet, 0, flat).facets.empty());
  CHECK(lower_link(tet, 1, flat).facets == std::vector<std::vector<int>>{{0}});
  CHECK(critical_vector(tet, flat).vector == CriticalVector{1, 0, 1});
}

TEST_CASE("spheres in several dimensions") {
  for (int n = 1; n <= 5; ++n) {
    const auto k = simplex_boundary(n);
    CHECK(euler_characteristic(k) == (n % 2 == 0 ? 2 : 0));
    VertexField f;
    for (std::size_t v = 0; v < k.vertex_count; ++v) f.values.push_back(static_cast<double>(v));
    auto expected = CriticalVector::zeros(n);
    expected[0] = 1;
    expected[n] = 1;
    CHECK(critical_vector(k, f).vector == expected);
  }
}

TEST_CASE("negating the field mirrors the indices") {
  const auto torus = parse_complex(slurp("csaszar_torus.scx"));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    VertexField f, g;
    for (int v = 0; v < 7; ++v) f.values.push_back(u(rng));
    for (double x : f.values) g.values.push_back(-x);
    const auto a = critical_vector(torus, f).vector;
    const auto b = critical_vector(torus, g).vector;
    for (int lambda = 0; lambda <= 2; ++lambda) CHECK(a[lambda] == b[2 - lambda]);
    const auto pa = phi(a);
    const auto pb = phi(b);
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i] == -pb[i]);
  }
}

TEST_CASE("relabelling vertices does not change the counts") {
  const auto oct = parse_complex(slurp("octahedron.scx"));
  const auto field = parse_field(slurp("octahedron.field"), 6);
  std::vector<int> perm(6);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    SimplicialComplex k = oct;
    for (auto& facet : k.facets) {
      for (int& v : facet) v = perm[static_cast<std::size_t>(v)];
      std::sort(facet.begin(), facet.end());
    }
    VertexField f{std::vector<double>(6)};
    for (std::size_t v = 0; v < 6; ++v) f.values[static_cast<std::size_t>(perm[v])] = field.values[v];
    CHECK(critical_vector(k, f).vector == CriticalVector{1, 0, 1});
  }
}

TEST_CASE("parser rejects malformed input") {
  CHECK(parse_error_of("").find("line 1") != std::string::npos);
  CHECK(parse_error_of("obj 2 3 1\n0 1 2\n").find("header") != std::string::npos);
  CHECK(parse_error_of("scx 2 4 4\n1 2 3\n0 2 3\n0 1 3\n").find("declares") != std::string::npos);
  CHECK(parse_error_of("scx 2 4 4\n1 2 3\n0 2 3\n0 1 3\n0 1 9\n").find("line 5") != std::string::npos);
  CHECK(parse_error_of("scx 2 4 4\n1 2 3\n0 2 3\n0 1 3\n0 1 1\n").find("repeats") != std::string::npos);
  CHECK(parse_error_of("scx 2 4 4\n1 2 3\n0 2 3\n0 1 3\n0 1\n").find("needs 3") != std::string::npos);
  CHECK(parse_error_of("scx 2 4 4\n1 2 3\n0 2 3\n0 1 3\n3 2 1\n").find("duplicate") != std::string::npos);
  CHECK(parse_error_of("scx 2 4 3\n1 2 3\n0 2 3\n0 1 3\n").find("open boundary") != std::string::npos);
  CHECK(parse_error_of("scx 2 5 4\n1 2 3\n0 2 3\n0 1 3\n0 1 2\n").find("vertex 4") != std::string::npos);
  CHECK(parse_error_of("scx 2 4 4\n1 2 x\n0 2 3\n0 1 3\n0 1 2\n").find("line 2") != std::string::npos);
}

TEST_CASE("comments and blank lines are skipped") {
  const auto k = parse_complex("# sphere\n\nscx 1 3 3\n0 1\n# middle\n1 2\n2 0\n");
  CHECK(k.n == 1);
  CHECK(k.facets.size() == 3);
}

TEST_CASE("field parser") {
  CHECK(parse_field("1\n2.5\n-3e-1\n", 3).values == std::vector<double>{1, 2.5, -0.3});
  CHECK_THROWS_AS(parse_field("1\n2\n", 3), Error);
  CHECK_THROWS_AS(parse_field("1\nnan\n3\n", 3), Error);
  CHECK_THROWS_AS(parse_field("1\n2 3\n4\n", 3), Error);
  CHECK_THROWS_AS(parse_field("1\nabc\n4\n", 3), Error);
}

TEST_CASE("disconnected complexes") {
  auto k = parse_complex("scx 1 6 6\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n");
  CHECK_FALSE(facets_connected(k));
  VertexField f{{0, 1, 2, 3, 4, 5}};
  const auto e = critical_vector(k, f);
  CHECK(e.vector == CriticalVector{2, 2});
  CHECK_FALSE(e.connected);
}
