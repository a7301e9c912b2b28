#include "morse_concordance/mesh_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "morse_concordance/error.hpp"
#include "morse_concordance/parallel.hpp"

namespace morse_concordance {

namespace {

struct Line {
  int number;
  std::string text;
};

// Non-empty, non-comment lines with their 1-based line numbers.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++number;
    std::string line(text.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] != '#') out.push_back({number, line});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error("parse_error", "line " + std::to_string(line) + ": " + what);
}

std::vector<long long> integers(const Line& line) {
  std::vector<long long> out;
  std::istringstream in(line.text);
  std::string token;
  while (in >> token) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) fail(line.number, "expected an integer, got \"" + token + "\"");
    out.push_back(value);
  }
  return out;
}

// All nonempty faces of a simplex, each sorted.
void add_faces(const std::vector<int>& simplex, std::set<std::vector<int>>& faces) {
  const std::size_t size = simplex.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << size); ++mask) {
    std::vector<int> face;
    for (std::size_t i = 0; i < size; ++i)
      if (mask & (std::uint64_t{1} << i)) face.push_back(simplex[i]);
    faces.insert(std::move(face));
  }
}

// Rank over Z2 of a matrix stored as bit rows.
std::int64_t rank_z2(std::vector<std::vector<std::uint64_t>> rows, std::size_t columns) {
  std::int64_t rank = 0;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < columns && pivot_row < rows.size(); ++col) {
    const std::size_t word = col / 64;
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    std::size_t found = pivot_row;
    while (found < rows.size() && !(rows[found][word] & bit)) ++found;
    if (found == rows.size()) continue;
    std::swap(rows[pivot_row], rows[found]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != pivot_row && (rows[r][word] & bit)) {
        for (std::size_t w = 0; w < rows[r].size(); ++w) rows[r][w] ^= rows[pivot_row][w];
      }
    }
    ++pivot_row;
    ++rank;
  }
  return rank;
}

bool below(const VertexField& field, int w, int v) {
  const double fw = field.values[static_cast<std::size_t>(w)];
  const double fv = field.values[static_cast<std::size_t>(v)];
  return fw < fv || (fw == fv && w < v);
}

}  // namespace

SimplicialComplex parse_complex(std::string_view text) {
  const std::vector<Line> lines = content_lines(text);
  if (lines.empty()) throw Error("parse_error", "line 1: missing scx header");
  const Line& head = lines.front();
  std::istringstream header(head.text);
  std::string magic;
  header >> magic;
  if (magic != "scx") fail(head.number, "header must start with \"scx\"");
  const auto numbers = integers({head.number, head.text.substr(head.text.find("scx") + 3)});
  if (numbers.size() != 3) fail(head.number, "header needs: scx <n> <vertex_count> <facet_count>");
  if (numbers[0] < 1) fail(head.number, "dimension must be at least 1");
  if (numbers[1] < 1 || numbers[2] < 1) fail(head.number, "vertex and facet counts must be positive");

  SimplicialComplex k;
  k.n = static_cast<int>(numbers[0]);
  k.vertex_count = static_cast<std::size_t>(numbers[1]);
  const auto facet_count = static_cast<std::size_t>(numbers[2]);
  if (lines.size() - 1 != facet_count) {
    fail(lines.size() - 1 < facet_count ? lines.back().number : lines[facet_count + 1].number,
         "header declares " + std::to_string(facet_count) + " facets, found " + std::to_string(lines.size() - 1));
  }

  std::map<std::vector<int>, int> seen_facets;
  std::vector<bool> used(k.vertex_count, false);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto ids = integers(lines[i]);
    if (ids.size() != static_cast<std::size_t>(k.n + 1)) {
      fail(lines[i].number, "facet needs " + std::to_string(k.n + 1) + " vertices, got " + std::to_string(ids.size()));
    }
    std::vector<int> facet;
    for (long long id : ids) {
      if (id < 0 || static_cast<std::size_t>(id) >= k.vertex_count)
        fail(lines[i].number, "vertex id " + std::to_string(id) + " out of range");
      facet.push_back(static_cast<int>(id));
      used[static_cast<std::size_t>(id)] = true;
    }
    std::vector<int> sorted = facet;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(lines[i].number, "facet repeats a vertex");
    if (!seen_facets.emplace(sorted, lines[i].number).second) fail(lines[i].number, "duplicate facet");
    k.facets.push_back(std::move(sorted));
  }
  for (std::size_t v = 0; v < used.size(); ++v) {
    if (!used[v]) fail(head.number, "vertex " + std::to_string(v) + " belongs to no facet");
  }

  // Closed pseudomanifold: every ridge lies in exactly two facets.
  std::map<std::vector<int>, std::vector<int>> ridges;
  for (std::size_t f = 0; f < k.facets.size(); ++f) {
    for (std::size_t drop = 0; drop < k.facets[f].size(); ++drop) {
      std::vector<int> ridge = k.facets[f];
      ridge.erase(ridge.begin() + static_cast<std::ptrdiff_t>(drop));
      ridges[ridge].push_back(static_cast<int>(f));
    }
  }
  for (const auto& [ridge, owners] : ridges) {
    if (owners.size() == 2) continue;
    std::string name;
    for (int v : ridge) name += (name.empty() ? "" : " ") + std::to_string(v);
    fail(lines[static_cast<std::size_t>(owners.front()) + 1].number,
         (owners.size() == 1 ? "open boundary face {" : "face in more than two facets {") + name + "}");
  }
  return k;
}

VertexField parse_field(std::string_view text, std::size_t vertex_count) {
  const std::vector<Line> lines = content_lines(text);
  VertexField field;
  for (const Line& line : lines) {
    std::istringstream in(line.text);
    std::string token, extra;
    in >> token;
    if (in >> extra) fail(line.number, "expected one value per line");
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || !std::isfinite(value))
      fail(line.number, "expected a finite decimal value, got \"" + token + "\"");
    field.values.push_back(value);
  }
  if (field.values.size() != vertex_count) {
    fail(lines.empty() ? 1 : lines.back().number,
         "field has " + std::to_string(field.values.size()) + " values for " + std::to_string(vertex_count) + " vertices");
  }
  return field;
}

bool facets_connected(const SimplicialComplex& k) {
  if (k.facets.empty()) return true;
  std::vector<std::size_t> parent(k.facets.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::vector<int>, std::size_t> first_owner;
  for (std::size_t f = 0; f < k.facets.size(); ++f) {
    for (std::size_t drop = 0; drop < k.facets[f].size(); ++drop) {
      std::vector<int> ridge = k.facets[f];
      ridge.erase(ridge.begin() + static_cast<std::ptrdiff_t>(drop));
      auto [it, inserted] = first_owner.emplace(ridge, f);
      if (!inserted) parent[find(f)] = find(it->second);
    }
  }
  const std::size_t root = find(0);
  for (std::size_t f = 1; f < k.facets.size(); ++f)
    if (find(f) != root) return false;
  return true;
}

std::int64_t euler_characteristic(const SimplicialComplex& k) {
  std::set<std::vector<int>> faces;
  for (const auto& facet : k.facets) add_faces(facet, faces);
  std::int64_t chi = 0;
  for (const auto& face : faces) chi += (face.size() % 2 == 1) ? 1 : -1;
  return chi;
}

SimplicialComplex lower_link(const SimplicialComplex& k, int v, const VertexField& field) {
  std::set<std::vector<int>> generators;
  for (const auto& facet : k.facets) {
    if (std::find(facet.begin(), facet.end(), v) == facet.end()) continue;
    std::vector<int> lower;
    for (int w : facet)
      if (w != v && below(field, w, v)) lower.push_back(w);
    if (!lower.empty()) generators.insert(std::move(lower));
  }
  SimplicialComplex link;
  link.vertex_count = k.vertex_count;
  for (const auto& g : generators) {
    const bool maximal = std::none_of(generators.begin(), generators.end(), [&](const std::vector<int>& other) {
      return other.size() > g.size() && std::includes(other.begin(), other.end(), g.begin(), g.end());
    });
    if (!maximal) continue;
    link.n = std::max(link.n, static_cast<int>(g.size()) - 1);
    link.facets.push_back(g);
  }
  return link;
}

std::vector<std::int64_t> reduced_betti_z2(const SimplicialComplex& l) {
  std::set<std::vector<int>> all;
  for (const auto& facet : l.facets) add_faces(facet, all);
  int dim = -1;
  for (const auto& face : all) dim = std::max(dim, static_cast<int>(face.size()) - 1);

  // by_dim[d + 1] holds the d-faces; the empty face is the single (-1)-face.
  std::vector<std::vector<std::vector<int>>> by_dim(static_cast<std::size_t>(dim + 2));
  by_dim[0].push_back({});
  for (const auto& face : all) by_dim[face.size()].push_back(face);

  // rank[d + 1] = rank of the boundary map from d-faces to (d-1)-faces.
  std::vector<std::int64_t> rank(static_cast<std::size_t>(dim + 3), 0);
  for (int d = 0; d <= dim; ++d) {
    const auto& faces = by_dim[static_cast<std::size_t>(d + 1)];
    const auto& targets = by_dim[static_cast<std::size_t>(d)];
    std::map<std::vector<int>, std::size_t> column;
    for (std::size_t i = 0; i < targets.size(); ++i) column.emplace(targets[i], i);
    const std::size_t words = (targets.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows(faces.size(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t r = 0; r < faces.size(); ++r) {
      for (std::size_t drop = 0; drop < faces[r].size(); ++drop) {
        std::vector<int> boundary = faces[r];
        boundary.erase(boundary.begin() + static_cast<std::ptrdiff_t>(drop));
        const std::size_t c = column.at(boundary);
        rows[r][c / 64] ^= std::uint64_t{1} << (c % 64);
      }
    }
    rank[static_cast<std::size_t>(d + 1)] = rank_z2(std::move(rows), targets.size());
  }

  std::vector<std::int64_t> betti;
  for (int d = -1; d <= dim; ++d) {
    const auto size = static_cast<std::int64_t>(by_dim[static_cast<std::size_t>(d + 1)].size());
    betti.push_back(size - rank[static_cast<std::size_t>(d + 1)] - rank[static_cast<std::size_t>(d + 2)]);
  }
  return betti;
}

CriticalExtraction critical_vector(const SimplicialComplex& k, const VertexField& field) {
  if (field.values.size() != k.vertex_count)
    throw Error("field_size", "field has " + std::to_string(field.values.size()) + " values for " +
                                  std::to_string(k.vertex_count) + " vertices");
  std::vector<std::vector<std::int64_t>> betti(k.vertex_count);
  parallel_for(k.vertex_count, [&](std::size_t v) {
    betti[v] = reduced_betti_z2(lower_link(k, static_cast<int>(v), field));
  });

  CriticalExtraction out;
  out.vector = CriticalVector::zeros(k.n);
  for (std::size_t v = 0; v < k.vertex_count; ++v) {
    CriticalVertex entry{static_cast<int>(v), {}};
    // betti[v][lambda] is beta~_{lambda - 1}.
    for (std::size_t lambda = 0; lambda < betti[v].size(); ++lambda) {
      if (betti[v][lambda] == 0) continue;
      if (static_cast<int>(lambda) > k.n)
        throw InternalConsistencyError("lower link homology above dimension n - 1 at vertex " + std::to_string(v));
      out.vector[static_cast<int>(lambda)] += betti[v][lambda];
      entry.contributions.push_back({static_cast<int>(lambda), betti[v][lambda]});
    }
    if (!entry.contributions.empty()) out.critical_vertices.push_back(std::move(entry));
  }
  out.euler_characteristic = euler_characteristic(k);
  out.connected = facets_connected(k);
  if (alternating_sum(out.vector) != out.euler_characteristic) {
    throw InternalConsistencyError("critical counts " + to_string(out.vector) + " have alternating sum " +
                                   std::to_string(alternating_sum(out.vector)) + ", Euler characteristic is " +
                                   std::to_string(out.euler_characteristic));
  }
  return out;
}

}  // namespace morse_concordance
