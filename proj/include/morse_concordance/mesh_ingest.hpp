#pragma once

// PL Morse data from a triangulated closed manifold with a vertex scalar
// field. A vertex v contributes beta~_{lambda-1}(lower link of v) critical
// points of index lambda, reduced Betti numbers over Z2. Ties in the field are
// broken by vertex id, so the order on vertices is total.
//
// The extracted vector stands in for the counts of a smooth Morse function
// approximating the PL one; that correspondence is assumed, not checked.
// Z2 coefficients miss torsion in lower links, which can only occur for
// n >= 5.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "morse_concordance/morse_data.hpp"

namespace morse_concordance {

/// Simplicial complex given by its maximal simplices over vertices
/// 0..vertex_count-1. n is the largest facet dimension (-1 when empty).
struct SimplicialComplex {
  int n = -1;
  std::size_t vertex_count = 0;
  std::vector<std::vector<int>> facets;

  friend bool operator==(const SimplicialComplex&, const SimplicialComplex&) = default;
};

struct VertexField {
  std::vector<double> values;
};

/// Parses the `scx` format and checks that the result is a pure closed
/// pseudomanifold. Throws Error("parse_error") with a line number.
SimplicialComplex parse_complex(std::string_view text);

/// One value per line, vertex_count lines. Throws Error("parse_error").
VertexField parse_field(std::string_view text, std::size_t vertex_count);

/// Whether the facets form one piece under sharing a codimension-one face.
bool facets_connected(const SimplicialComplex& k);

/// Alternating count of all faces, each face counted once.
std::int64_t euler_characteristic(const SimplicialComplex& k);

/// Full subcomplex of the link of v spanned by neighbours below v.
SimplicialComplex lower_link(const SimplicialComplex& k, int v, const VertexField& field);

/// (beta~_{-1}, beta~_0, ..., beta~_dim) over Z2. The empty complex gives (1).
std::vector<std::int64_t> reduced_betti_z2(const SimplicialComplex& l);

struct CriticalVertex {
  int vertex = 0;
  /// (Morse index, multiplicity) for every nonzero contribution.
  std::vector<std::pair<int, std::int64_t>> contributions;
};

struct CriticalExtraction {
  CriticalVector vector;
  std::int64_t euler_characteristic = 0;
  std::vector<CriticalVertex> critical_vertices;
  bool connected = true;
};

/// Throws InternalConsistencyError if the alternating sum misses chi(K).
CriticalExtraction critical_vector(const SimplicialComplex& k, const VertexField& field);

}  // namespace morse_concordance
