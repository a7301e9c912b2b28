#include "morse_concordance/fold_diagram.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>

#include "morse_concordance/error.hpp"

namespace morse_concordance {

namespace {

int abs_index(int n, int rho) { return std::max(rho, n - rho); }

int min_segment_index(int n) { return (n + 1) / 2; }
int min_cusp_index(int n) { return n / 2; }

// Oriented indices reachable across a cusp onto a segment of absolute index
// next_abs.
std::vector<int> cross_cusp(int n, int rho, int next_abs) {
  std::vector<int> out;
  for (int candidate : {n - 1 - rho, n + 1 - rho}) {
    if (candidate >= 0 && candidate <= n && abs_index(n, candidate) == next_abs)
      out.push_back(candidate);
  }
  return out;
}

std::vector<int> rho_choices(int n, int abs) {
  if (2 * abs == n) return {abs};
  return {abs, n - abs};
}

int start_rho(int n, const BoundaryAnchor& a) {
  return a.side == Side::bottom ? a.morse_index : n - a.morse_index;
}

int end_morse_index(int n, Side side, int rho) { return side == Side::bottom ? n - rho : rho; }

// Forward reachability over the chain of segments, then backtracking. The
// chain is segments[0..L-1] joined by cusps[0..L-2] (plus cusps[L-1] back to
// segments[0] when closing a circle).
std::optional<std::vector<int>> assign_chain(int n, const DiagramComponent& c, int rho0,
                                             const std::function<bool(int)>& accept_last) {
  const std::size_t count = c.segments.size();
  std::vector<std::vector<int>> reach(count);
  reach[0] = {rho0};
  for (std::size_t j = 0; j + 1 < count; ++j) {
    for (int rho : reach[j]) {
      for (int next : cross_cusp(n, rho, c.segments[j + 1].absolute_index)) {
        if (std::find(reach[j + 1].begin(), reach[j + 1].end(), next) == reach[j + 1].end())
          reach[j + 1].push_back(next);
      }
    }
    if (reach[j + 1].empty()) return std::nullopt;
  }
  std::vector<int> rho(count);
  bool found = false;
  for (int last : reach[count - 1]) {
    if (accept_last(last)) {
      rho[count - 1] = last;
      found = true;
      break;
    }
  }
  if (!found) return std::nullopt;
  for (std::size_t j = count - 1; j > 0; --j) {
    bool linked = false;
    for (int prev : reach[j - 1]) {
      auto next = cross_cusp(n, prev, c.segments[j].absolute_index);
      if (std::find(next.begin(), next.end(), rho[j]) != next.end()) {
        rho[j - 1] = prev;
        linked = true;
        break;
      }
    }
    if (!linked) return std::nullopt;
  }
  return rho;
}

bool arity_ok(const DiagramComponent& c) {
  if (c.segments.empty()) return false;
  if (c.shape == Shape::arc)
    return c.endpoints.size() == 2 && c.cusps.size() + 1 == c.segments.size();
  if (!c.endpoints.empty()) return false;
  return c.cusps.size() == c.segments.size() || (c.cusps.empty() && c.segments.size() == 1);
}

std::pair<int, int> cusp_neighbours(const DiagramComponent& c, std::size_t cusp) {
  const std::size_t next = (cusp + 1) % c.segments.size();
  return {c.segments[cusp].absolute_index, c.segments[next].absolute_index};
}

bool adjacency_ok(int n, int cusp_index, int a, int b) {
  if (2 * cusp_index > n - 1) return std::min(a, b) == cusp_index && std::max(a, b) == cusp_index + 1;
  return a == cusp_index + 1 && b == cusp_index + 1;
}

}  // namespace

std::size_t ConcordanceDiagram::cusp_count() const {
  std::size_t total = 0;
  for (const auto& c : components) total += c.cusps.size();
  return total;
}

bool DiagramReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const DiagramViolation& v) { return v.code == code; });
}

ComponentType component_type(const DiagramComponent& c) {
  if (c.shape == Shape::circle) return ComponentType::circle;
  const Side a = c.endpoints.at(0).side;
  const Side b = c.endpoints.at(1).side;
  if (a != b) return ComponentType::crossing_arc;
  return a == Side::bottom ? ComponentType::bottom_arc : ComponentType::top_arc;
}

std::optional<int> crossing_index(const DiagramComponent& c) {
  if (component_type(c) != ComponentType::crossing_arc) return std::nullopt;
  return c.endpoints[0].side == Side::bottom ? c.endpoints[0].morse_index : c.endpoints[1].morse_index;
}

SegmentType segment_type(const DiagramComponent& c, std::size_t segment) {
  if (c.shape == Shape::circle) return c.cusps.empty() ? SegmentType::closed : SegmentType::cusp_cusp;
  const std::size_t last = c.segments.size() - 1;
  const std::optional<Side> left =
      segment == 0 ? std::optional<Side>(c.endpoints[0].side) : std::nullopt;
  const std::optional<Side> right =
      segment == last ? std::optional<Side>(c.endpoints[1].side) : std::nullopt;
  if (left && right) {
    if (*left != *right) return SegmentType::bottom_top;
    return *left == Side::bottom ? SegmentType::bottom_bottom : SegmentType::top_top;
  }
  if (!left && !right) return SegmentType::cusp_cusp;
  const Side side = left ? *left : *right;
  return side == Side::bottom ? SegmentType::bottom_cusp : SegmentType::top_cusp;
}

int turning_parity(SegmentType type) {
  switch (type) {
    case SegmentType::bottom_bottom:
    case SegmentType::top_top:
    case SegmentType::cusp_cusp:
    case SegmentType::top_cusp:
      return 1;
    case SegmentType::bottom_top:
    case SegmentType::closed:
    case SegmentType::bottom_cusp:
      return 0;
  }
  return 0;
}

std::pair<CriticalVector, CriticalVector> boundary_data(const ConcordanceDiagram& d) {
  CriticalVector bottom = CriticalVector::zeros(d.n);
  CriticalVector top = CriticalVector::zeros(d.n);
  for (const auto& c : d.components) {
    for (const auto& a : c.endpoints) {
      if (a.morse_index < 0 || a.morse_index > d.n) continue;
      (a.side == Side::bottom ? bottom : top)[a.morse_index] += 1;
    }
  }
  return {bottom, top};
}

std::optional<std::vector<int>> oriented_indices(int n, const DiagramComponent& c) {
  if (!arity_ok(c)) return std::nullopt;
  if (c.shape == Shape::arc) {
    const int rho0 = start_rho(n, c.endpoints[0]);
    if (rho0 < 0 || rho0 > n || abs_index(n, rho0) != c.segments[0].absolute_index) return std::nullopt;
    const BoundaryAnchor end = c.endpoints[1];
    return assign_chain(n, c, rho0, [&](int last) {
      return end_morse_index(n, end.side, last) == end.morse_index;
    });
  }
  if (c.cusps.empty()) return std::vector<int>{c.segments[0].absolute_index};
  for (int rho0 : rho_choices(n, c.segments[0].absolute_index)) {
    auto rho = assign_chain(n, c, rho0, [&](int last) {
      auto back = cross_cusp(n, last, c.segments[0].absolute_index);
      return std::find(back.begin(), back.end(), rho0) != back.end();
    });
    if (rho) return rho;
  }
  return std::nullopt;
}

DiagramReport validate_diagram(const ConcordanceDiagram& d, ValidationLevel level) {
  DiagramReport report;
  const int n = d.n;
  auto add = [&](const char* code, int comp, int pos, std::string detail) {
    report.violations.push_back({code, comp, pos, std::move(detail)});
  };
  if (n < 1) {
    add(diagram_code::kDimension, -1, -1, "dimension must be at least 1");
    return report;
  }

  for (std::size_t ci = 0; ci < d.components.size(); ++ci) {
    const auto& c = d.components[ci];
    const int comp = static_cast<int>(ci);
    if (!arity_ok(c)) {
      add(diagram_code::kArity, comp, -1,
          c.shape == Shape::arc ? "arc needs two endpoints and one cusp fewer than segments"
                                : "circle needs as many cusps as segments and no endpoints");
      continue;
    }
    bool ranges_ok = true;
    for (std::size_t j = 0; j < c.segments.size(); ++j) {
      const auto& s = c.segments[j];
      if (s.absolute_index < min_segment_index(n) || s.absolute_index > n) {
        ranges_ok = false;
        add(diagram_code::kSegmentRange, comp, static_cast<int>(j),
            "fold absolute index " + std::to_string(s.absolute_index) + " outside [" +
                std::to_string(min_segment_index(n)) + ", " + std::to_string(n) + "]");
      }
      if (s.turning_count < 0) {
        ranges_ok = false;
        add(diagram_code::kNegativeTurnings, comp, static_cast<int>(j), "negative turning count");
      }
    }
    for (std::size_t j = 0; j < c.cusps.size(); ++j) {
      const int i = c.cusps[j].absolute_index;
      if (i < min_cusp_index(n) || i > n - 1) {
        ranges_ok = false;
        add(diagram_code::kCuspRange, comp, static_cast<int>(j),
            "cusp absolute index " + std::to_string(i) + " outside [" +
                std::to_string(min_cusp_index(n)) + ", " + std::to_string(n - 1) + "]");
      }
    }
    for (std::size_t j = 0; j < c.endpoints.size(); ++j) {
      const int lambda = c.endpoints[j].morse_index;
      if (lambda < 0 || lambda > n) {
        ranges_ok = false;
        add(diagram_code::kAnchorRange, comp, static_cast<int>(j),
            "Morse index " + std::to_string(lambda) + " outside [0, " + std::to_string(n) + "]");
      }
    }
    if (!ranges_ok) continue;

    bool local_ok = true;
    for (std::size_t j = 0; j < c.cusps.size(); ++j) {
      const auto [a, b] = cusp_neighbours(c, j);
      const int i = c.cusps[j].absolute_index;
      if (!adjacency_ok(n, i, a, b)) {
        local_ok = false;
        const std::string expected = 2 * i > n - 1
                                         ? "{" + std::to_string(i) + "," + std::to_string(i + 1) + "}"
                                         : "{" + std::to_string(i + 1) + "," + std::to_string(i + 1) + "}";
        add(diagram_code::kCuspAdjacency, comp, static_cast<int>(j),
            "cusp of absolute index " + std::to_string(i) + " between folds {" + std::to_string(a) +
                "," + std::to_string(b) + "}, expected " + expected);
      }
    }
    if (c.shape == Shape::arc) {
      const std::array<const FoldSegment*, 2> adjacent{&c.segments.front(), &c.segments.back()};
      for (std::size_t e = 0; e < 2; ++e) {
        const int lambda = c.endpoints[e].morse_index;
        if (adjacent[e]->absolute_index != abs_index(n, lambda)) {
          local_ok = false;
          add(diagram_code::kArcEndpoint, comp, static_cast<int>(e),
              "anchor of Morse index " + std::to_string(lambda) + " needs fold absolute index " +
                  std::to_string(abs_index(n, lambda)) + ", got " +
                  std::to_string(adjacent[e]->absolute_index));
        }
      }
    }
    if (local_ok) {
      if (c.shape == Shape::arc && c.cusps.empty()) {
        const auto& p = c.endpoints[0];
        const auto& q = c.endpoints[1];
        const bool same_side = p.side == q.side;
        const bool related = same_side ? (p.morse_index + q.morse_index == n)
                                       : (p.morse_index == q.morse_index);
        if (!related) {
          add(diagram_code::kEndpointRelation, comp, -1,
              same_side ? "cusp-free arc with both ends on one side needs indices lambda and n - lambda"
                        : "cusp-free arc crossing the cylinder needs equal indices at both ends");
        }
      } else if (!c.cusps.empty() && !oriented_indices(n, c)) {
        add(diagram_code::kOrientation, comp, -1,
            "no consistent oriented fold index along the component");
      }
    }

    for (std::size_t j = 0; j < c.segments.size(); ++j) {
      const SegmentType type = segment_type(c, j);
      if (c.segments[j].turning_count % 2 != turning_parity(type)) {
        add(diagram_code::kTurningParity, comp, static_cast<int>(j),
            "segment type (" + std::to_string(static_cast<int>(type)) + ")' needs " +
                (turning_parity(type) ? "an odd" : "an even") + " turning count");
      }
    }
  }

  if (level == ValidationLevel::structural) return report;

  std::int64_t turnings = 0;
  for (const auto& c : d.components)
    for (const auto& s : c.segments) turnings += s.turning_count;
  if (turnings % 2 != 0)
    add(diagram_code::kEulerParity, -1, -1,
        "total turning count " + std::to_string(turnings) + " is odd");

  const auto [bottom, top] = boundary_data(d);
  const std::int64_t chi = (n % 2 == 1) ? 0 : alternating_sum(bottom);
  for (const auto& [name, v] : {std::pair{"bottom", &bottom}, std::pair{"top", &top}}) {
    for (const auto& viol : validate_vector(*v, n, chi).violations) {
      add(diagram_code::kBoundaryVector, -1, -1,
          std::string(name) + " " + to_string(*v) + ": " + viol.code + " (" + viol.detail + ")");
    }
  }
  return report;
}

std::size_t CongruenceReport::violations() const {
  return static_cast<std::size_t>(std::count_if(
      congruences.begin(), congruences.end(), [](const Congruence& c) { return c.applies && !c.holds; }));
}

CongruenceReport verify_congruences(const ConcordanceDiagram& d) {
  if (DiagramReport r = validate_diagram(d, ValidationLevel::strict); !r.ok())
    throw Error("invalid_diagram", "congruences need a strictly valid diagram: " + r.violations.front().code +
                                       " (" + r.violations.front().detail + ")");
  const int n = d.n;
  CongruenceReport report;
  report.n = n;
  std::tie(report.bottom, report.top) = boundary_data(d);

  const bool odd = n % 2 == 1;
  const int k = (n - 1) / 2;
  std::int64_t type1 = 0, type2 = 0, crossing_low = 0, turnings = 0, cusps = 0, middle_cusps = 0;
  for (const auto& c : d.components) {
    const ComponentType t = component_type(c);
    type1 += t == ComponentType::bottom_arc;
    type2 += t == ComponentType::top_arc;
    if (auto i = crossing_index(c); i && *i <= k) ++crossing_low;
    for (const auto& s : c.segments) turnings += s.turning_count;
    for (const auto& cusp : c.cusps) {
      ++cusps;
      if (odd && cusp.absolute_index == k) ++middle_cusps;
    }
  }
  const bool middle_only = odd && middle_cusps == cusps;
  auto mod2 = [](std::int64_t v) { return ((v % 2) + 2) % 2; };
  auto push = [&](std::string name, std::string statement, std::int64_t lhs, std::int64_t rhs, bool applies,
                  int component = -1) {
    report.congruences.push_back(
        {std::move(name), std::move(statement), mod2(lhs), mod2(rhs), applies, mod2(lhs) == mod2(rhs), component});
  };

  const std::int64_t s0 = odd ? sigma(report.bottom).value() : 0;
  const std::int64_t s1 = odd ? sigma(report.top).value() : 0;
  push("a", "sigma(f0) = #type1 + #{type3 : i(c) <= k}", s0, type1 + crossing_low, middle_only);
  push("b", "sigma(f1) = #type2 + #{type3 : i(c) <= k}", s1, type2 + crossing_low, middle_only);
  push("c", "total turnings = 0", turnings, 0, true);
  push("d1", "total cusps = #type1 + #type2", cusps, type1 + type2, true);
  push("d2", "#type1 + #type2 = sigma(f0) + sigma(f1)", type1 + type2, s0 + s1, middle_only);
  for (std::size_t ci = 0; ci < d.components.size(); ++ci) {
    const auto& c = d.components[ci];
    std::int64_t t = 0;
    for (const auto& s : c.segments) t += s.turning_count;
    const ComponentType type = component_type(c);
    const bool end_arc = type == ComponentType::bottom_arc || type == ComponentType::top_arc;
    const auto l = static_cast<std::int64_t>(c.cusps.size());
    push("e", end_arc ? "turnings on c = l(c) + 1" : "turnings on c = l(c)", t, end_arc ? l + 1 : l, true,
         static_cast<int>(ci));
  }
  push("f", "#cusps of index k = sigma(f0) + sigma(f1)", middle_cusps, s0 + s1, odd);
  push("g", "sigma(f0) = sigma(f1) without cusps", s0, s1, odd && cusps == 0);
  return report;
}

// ---------------------------------------------------------------------------
// Elimination works on a port graph: anchors and cusps are nodes, segments
// are edges. Cusp port 0 is the side of segments[j], port 1 the side of
// segments[j+1].

namespace {

struct End {
  int node = -1;  // -1 for a closed loop without cusps
  int port = 0;
};

struct Edge {
  int abs = 0;
  std::int64_t turnings = 0;
  std::array<End, 2> ends;
  // Oriented index when traversed from ends[0] to ends[1].
  int rho = 0;
  bool respliced = false;
};

struct Node {
  bool is_cusp = false;
  BoundaryAnchor anchor;
  int cusp_index = 0;
  // (edge, end) per port; anchors use port 0 only.
  std::array<std::pair<int, int>, 2> ports{std::pair{-1, 0}, std::pair{-1, 0}};
};

struct PortGraph {
  int n = 0;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  // Node id of cusps[j] in component ci.
  std::vector<std::vector<int>> cusp_nodes;
};

void attach(PortGraph& g, int edge, int end, int node, int port) {
  g.edges[static_cast<std::size_t>(edge)].ends[static_cast<std::size_t>(end)] = {node, port};
  if (node >= 0) g.nodes[static_cast<std::size_t>(node)].ports[static_cast<std::size_t>(port)] = {edge, end};
}

PortGraph build_graph(const ConcordanceDiagram& d) {
  PortGraph g;
  g.n = d.n;
  for (const auto& c : d.components) {
    const auto rho = oriented_indices(d.n, c);
    if (!rho) throw Error("invalid_diagram", "component without consistent oriented index");
    std::vector<int> cusp_ids;
    for (const auto& cusp : c.cusps) {
      Node node;
      node.is_cusp = true;
      node.cusp_index = cusp.absolute_index;
      cusp_ids.push_back(static_cast<int>(g.nodes.size()));
      g.nodes.push_back(node);
    }
    std::vector<int> edge_ids;
    for (std::size_t j = 0; j < c.segments.size(); ++j) {
      Edge e;
      e.abs = c.segments[j].absolute_index;
      e.turnings = c.segments[j].turning_count;
      e.rho = (*rho)[j];
      edge_ids.push_back(static_cast<int>(g.edges.size()));
      g.edges.push_back(e);
    }
    const std::size_t count = c.segments.size();
    if (c.shape == Shape::arc) {
      std::array<int, 2> anchor_ids{};
      for (std::size_t e = 0; e < 2; ++e) {
        Node node;
        node.anchor = c.endpoints[e];
        anchor_ids[e] = static_cast<int>(g.nodes.size());
        g.nodes.push_back(node);
      }
      for (std::size_t j = 0; j < count; ++j) {
        attach(g, edge_ids[j], 0, j == 0 ? anchor_ids[0] : cusp_ids[j - 1], j == 0 ? 0 : 1);
        attach(g, edge_ids[j], 1, j + 1 == count ? anchor_ids[1] : cusp_ids[j], 0);
      }
    } else if (!c.cusps.empty()) {
      for (std::size_t j = 0; j < count; ++j) {
        attach(g, edge_ids[j], 0, cusp_ids[(j + count - 1) % count], 1);
        attach(g, edge_ids[j], 1, cusp_ids[j], 0);
      }
    }
    g.cusp_nodes.push_back(std::move(cusp_ids));
  }
  return g;
}

// +1 when the high direction of the edge runs from ends[0] to ends[1], -1 for
// the reverse, 0 when the edge has absolute index n/2.
int high_direction(int n, const Edge& e) {
  if (2 * e.abs == n) return 0;
  return e.rho == e.abs ? 1 : -1;
}

// Whether the high direction of the edge at this end points into the node.
bool points_into(int n, const Edge& e, int end) {
  const int dir = high_direction(n, e);
  return (dir == 1 && end == 1) || (dir == -1 && end == 0);
}

struct CuspShape {
  CuspPolarity polarity = CuspPolarity::through;
  // Port carrying the upper (index + 1) branch, or for index-k cusps the port
  // whose branch points into the cusp.
  int primary_port = 0;
};

CuspShape cusp_shape(const PortGraph& g, int node_id) {
  const Node& node = g.nodes[static_cast<std::size_t>(node_id)];
  const int n = g.n;
  CuspShape shape;
  if (2 * node.cusp_index == n - 1) {
    const auto [edge, end] = node.ports[0];
    shape.polarity = CuspPolarity::through;
    shape.primary_port = points_into(n, g.edges[static_cast<std::size_t>(edge)], end) ? 0 : 1;
    return shape;
  }
  for (int port = 0; port < 2; ++port) {
    const auto [edge, end] = node.ports[static_cast<std::size_t>(port)];
    const Edge& e = g.edges[static_cast<std::size_t>(edge)];
    if (e.abs == node.cusp_index + 1) {
      shape.primary_port = port;
      shape.polarity = points_into(n, e, end) ? CuspPolarity::in : CuspPolarity::out;
      return shape;
    }
  }
  throw InternalConsistencyError("cusp without an upper fold branch");
}

ConcordanceDiagram to_diagram(const PortGraph& g) {
  ConcordanceDiagram d;
  d.n = g.n;
  std::vector<bool> edge_used(g.edges.size(), false);
  std::vector<std::vector<int>> segment_edges;

  auto walk = [&](DiagramComponent& comp, std::vector<int>& seg_edges, int edge, int from_end) {
    // Follow edges from the given end until an anchor or back to the start.
    const int first_edge = edge;
    const int first_end = from_end;
    while (true) {
      const Edge& e = g.edges[static_cast<std::size_t>(edge)];
      edge_used[static_cast<std::size_t>(edge)] = true;
      comp.segments.push_back({e.abs, e.turnings});
      seg_edges.push_back(edge);
      const End far = e.ends[static_cast<std::size_t>(1 - from_end)];
      const Node& node = g.nodes[static_cast<std::size_t>(far.node)];
      if (!node.is_cusp) {
        comp.endpoints.push_back(node.anchor);
        return;
      }
      comp.cusps.push_back({node.cusp_index});
      const auto [next_edge, next_end] = node.ports[static_cast<std::size_t>(1 - far.port)];
      if (next_edge == first_edge && next_end == first_end) return;
      edge = next_edge;
      from_end = next_end;
    }
  };

  for (const Node& node : g.nodes) {
    if (node.is_cusp) continue;
    const auto [edge, end] = node.ports[0];
    if (edge_used[static_cast<std::size_t>(edge)]) continue;
    DiagramComponent comp;
    comp.shape = Shape::arc;
    comp.endpoints.push_back(node.anchor);
    std::vector<int> seg_edges;
    walk(comp, seg_edges, edge, end);
    d.components.push_back(std::move(comp));
    segment_edges.push_back(std::move(seg_edges));
  }
  for (std::size_t id = 0; id < g.edges.size(); ++id) {
    if (edge_used[id]) continue;
    const Edge& e = g.edges[id];
    DiagramComponent comp;
    comp.shape = Shape::circle;
    std::vector<int> seg_edges;
    if (e.ends[0].node < 0) {
      edge_used[id] = true;
      comp.segments.push_back({e.abs, e.turnings});
      seg_edges.push_back(static_cast<int>(id));
    } else {
      walk(comp, seg_edges, static_cast<int>(id), 0);
    }
    d.components.push_back(std::move(comp));
    segment_edges.push_back(std::move(seg_edges));
  }

  for (std::size_t ci = 0; ci < d.components.size(); ++ci) {
    auto& comp = d.components[ci];
    for (std::size_t j = 0; j < comp.segments.size(); ++j) {
      if (g.edges[static_cast<std::size_t>(segment_edges[ci][j])].respliced)
        comp.segments[j].turning_count = minimal_turnings(segment_type(comp, j));
    }
  }
  return d;
}

const std::vector<int>& cusp_node_ids(const PortGraph& g, CuspRef ref) {
  if (ref.component >= g.cusp_nodes.size() || ref.cusp >= g.cusp_nodes[ref.component].size())
    throw Error("cusp_not_found", "no cusp " + std::to_string(ref.cusp) + " in component " +
                                      std::to_string(ref.component));
  return g.cusp_nodes[ref.component];
}

// Splices the graph after removing cusp nodes x and y with the given port
// pairing: port px[i] of x is glued to port py[i] of y.
PortGraph splice(const PortGraph& g, int x, int y, std::array<int, 2> px, std::array<int, 2> py) {
  using Handle = std::pair<int, int>;
  std::map<Handle, Handle> glue;
  for (std::size_t i = 0; i < 2; ++i) {
    const Handle hx = g.nodes[static_cast<std::size_t>(x)].ports[static_cast<std::size_t>(px[i])];
    const Handle hy = g.nodes[static_cast<std::size_t>(y)].ports[static_cast<std::size_t>(py[i])];
    glue[hx] = hy;
    glue[hy] = hx;
  }
  auto removed = [&](int node) { return node == x || node == y; };

  PortGraph out;
  out.n = g.n;
  // Node ids shift down past the removed cusps.
  std::vector<int> remap(g.nodes.size(), -1);
  for (std::size_t id = 0; id < g.nodes.size(); ++id) {
    if (removed(static_cast<int>(id))) continue;
    remap[id] = static_cast<int>(out.nodes.size());
    Node node = g.nodes[id];
    node.ports = {std::pair{-1, 0}, std::pair{-1, 0}};
    out.nodes.push_back(node);
  }

  std::vector<bool> done(g.edges.size(), false);
  auto emit = [&](const std::vector<std::pair<int, int>>& chain, End start, End finish, bool glued) {
    // chain: (edge, entry end). The merged edge runs from start to finish.
    const auto [first_edge, first_entry] = chain.front();
    const Edge& head = g.edges[static_cast<std::size_t>(first_edge)];
    Edge merged;
    merged.abs = head.abs;
    merged.turnings = head.turnings;
    merged.rho = first_entry == 0 ? head.rho : g.n - head.rho;
    merged.respliced = glued || head.respliced;
    for (const auto& [edge, entry] : chain) {
      const Edge& e = g.edges[static_cast<std::size_t>(edge)];
      if (e.abs != merged.abs) throw InternalConsistencyError("splice joined folds of different index");
      const int rho = entry == 0 ? e.rho : g.n - e.rho;
      const int high_here = 2 * e.abs == g.n ? 0 : (rho == e.abs ? 1 : -1);
      const int high_head = 2 * merged.abs == g.n ? 0 : (merged.rho == merged.abs ? 1 : -1);
      if (high_here != high_head) throw InternalConsistencyError("splice reversed a fold orientation");
    }
    const int id = static_cast<int>(out.edges.size());
    out.edges.push_back(merged);
    auto place = [&](int end, End at) {
      if (at.node < 0) {
        out.edges.back().ends[static_cast<std::size_t>(end)] = {-1, 0};
        return;
      }
      attach(out, id, end, remap[static_cast<std::size_t>(at.node)], at.port);
    };
    place(0, start);
    place(1, finish);
  };

  // Chains that start at a surviving node.
  for (std::size_t id = 0; id < g.edges.size(); ++id) {
    if (done[id]) continue;
    const Edge& e = g.edges[id];
    if (e.ends[0].node < 0) {
      done[id] = true;
      emit({{static_cast<int>(id), 0}}, {-1, 0}, {-1, 0}, false);
      continue;
    }
    int start_end = -1;
    for (int end = 0; end < 2; ++end) {
      if (!removed(e.ends[static_cast<std::size_t>(end)].node)) {
        start_end = end;
        break;
      }
    }
    if (start_end < 0) continue;
    std::vector<std::pair<int, int>> chain;
    int edge = static_cast<int>(id);
    int entry = start_end;
    bool glued = false;
    while (true) {
      done[static_cast<std::size_t>(edge)] = true;
      chain.push_back({edge, entry});
      const End far = g.edges[static_cast<std::size_t>(edge)].ends[static_cast<std::size_t>(1 - entry)];
      if (!removed(far.node)) {
        emit(chain, g.edges[id].ends[static_cast<std::size_t>(start_end)], far, glued);
        break;
      }
      const auto [next_edge, next_end] = glue.at({edge, 1 - entry});
      glued = true;
      edge = next_edge;
      entry = next_end;
    }
  }
  // Whatever is left closes up into cusp-free circles.
  for (std::size_t id = 0; id < g.edges.size(); ++id) {
    if (done[id]) continue;
    std::vector<std::pair<int, int>> chain;
    int edge = static_cast<int>(id);
    int entry = 0;
    while (true) {
      done[static_cast<std::size_t>(edge)] = true;
      chain.push_back({edge, entry});
      const auto [next_edge, next_end] = glue.at({edge, 1 - entry});
      if (next_edge == static_cast<int>(id) && next_end == 0) break;
      edge = next_edge;
      entry = next_end;
    }
    emit(chain, {-1, 0}, {-1, 0}, true);
  }
  return out;
}

void require_strict(const ConcordanceDiagram& d) {
  if (DiagramReport r = validate_diagram(d, ValidationLevel::strict); !r.ok())
    throw Error("invalid_diagram", "diagram is not strictly valid: " + r.violations.front().code + " (" +
                                       r.violations.front().detail + ")");
}

}  // namespace

CuspPolarity cusp_polarity(const ConcordanceDiagram& d, CuspRef ref) {
  const PortGraph g = build_graph(d);
  return cusp_shape(g, cusp_node_ids(g, ref)[ref.cusp]).polarity;
}

ConcordanceDiagram eliminate_matching_pair(const ConcordanceDiagram& d, CuspRef a, CuspRef b) {
  require_strict(d);
  const PortGraph g = build_graph(d);
  const int x = cusp_node_ids(g, a)[a.cusp];
  const int y = cusp_node_ids(g, b)[b.cusp];
  if (x == y) throw Error("cusp_not_found", "a cusp cannot be paired with itself");
  const Node& nx = g.nodes[static_cast<std::size_t>(x)];
  const Node& ny = g.nodes[static_cast<std::size_t>(y)];
  if (nx.cusp_index != ny.cusp_index) {
    throw Error("index_mismatch", "cusps have absolute indices " + std::to_string(nx.cusp_index) + " and " +
                                      std::to_string(ny.cusp_index));
  }
  const CuspShape sx = cusp_shape(g, x);
  const CuspShape sy = cusp_shape(g, y);
  std::array<int, 2> px{}, py{};
  if (sx.polarity == CuspPolarity::through) {
    // The branch running into x continues out of y and vice versa.
    px = {sx.primary_port, 1 - sx.primary_port};
    py = {1 - sy.primary_port, sy.primary_port};
  } else {
    if (sx.polarity == sy.polarity) {
      throw Error("not_matching", "cusps of absolute index " + std::to_string(nx.cusp_index) +
                                      " have the same polarity; splicing would reverse a fold orientation");
    }
    px = {sx.primary_port, 1 - sx.primary_port};
    py = {sy.primary_port, 1 - sy.primary_port};
  }

  const ConcordanceDiagram out = to_diagram(splice(g, x, y, px, py));
  if (DiagramReport r = validate_diagram(out, ValidationLevel::strict); !r.ok()) {
    throw InternalConsistencyError("elimination produced an invalid diagram: " + r.violations.front().code +
                                   " (" + r.violations.front().detail + ")");
  }
  if (boundary_data(out) != boundary_data(d))
    throw InternalConsistencyError("elimination changed the boundary data");
  if (out.cusp_count() + 2 != d.cusp_count())
    throw InternalConsistencyError("elimination did not remove exactly two cusps");
  return out;
}

EliminationResult eliminate_all_cusps(const ConcordanceDiagram& d) {
  require_strict(d);
  EliminationResult result;
  result.diagram = d;
  const int n = d.n;
  while (result.diagram.cusp_count() > 0) {
    const PortGraph g = build_graph(result.diagram);
    int top = -1;
    for (const Node& node : g.nodes)
      if (node.is_cusp) top = std::max(top, node.cusp_index);

    std::vector<CuspRef> through, in, out;
    for (std::size_t ci = 0; ci < g.cusp_nodes.size(); ++ci) {
      for (std::size_t j = 0; j < g.cusp_nodes[ci].size(); ++j) {
        const int id = g.cusp_nodes[ci][j];
        if (g.nodes[static_cast<std::size_t>(id)].cusp_index != top) continue;
        switch (cusp_shape(g, id).polarity) {
          case CuspPolarity::through: through.push_back({ci, j}); break;
          case CuspPolarity::in: in.push_back({ci, j}); break;
          case CuspPolarity::out: out.push_back({ci, j}); break;
        }
      }
    }

    CuspRef first, second;
    if (!through.empty()) {
      if (through.size() % 2 == 1) {
        const auto [bottom, top_vec] = boundary_data(result.diagram);
        const int s0 = sigma(bottom).value();
        const int s1 = sigma(top_vec).value();
        result.obstruction = EliminationObstruction{
            "cusp_parity", top,
            "cusp parity 1 = sigma(f0)+sigma(f1) = " + std::to_string(s0) + "+" + std::to_string(s1) +
                ": an odd number of cusps of absolute index " + std::to_string(top) + " remains"};
        return result;
      }
      first = through[0];
      second = through[1];
    } else {
      if (in.size() != out.size()) {
        const auto [bottom, top_vec] = boundary_data(result.diagram);
        const auto phi0 = phi(bottom);
        const auto phi1 = phi(top_vec);
        std::string diff;
        for (std::size_t i = 0; i < phi0.size(); ++i) {
          if (phi0[i] == phi1[i]) continue;
          if (!diff.empty()) diff += ", ";
          diff += "phi_" + std::to_string(phi_first_index(n) + static_cast<int>(i)) + ": " +
                  std::to_string(phi0[i]) + " vs " + std::to_string(phi1[i]);
        }
        result.obstruction = EliminationObstruction{
            "phi", top,
            std::to_string(in.size()) + " in and " + std::to_string(out.size()) +
                " out cusps of absolute index " + std::to_string(top) +
                " cannot be paired; Phi(f0) != Phi(f1)" + (diff.empty() ? "" : " (" + diff + ")")};
        return result;
      }
      first = in[0];
      second = out[0];
    }
    result.diagram = eliminate_matching_pair(result.diagram, first, second);
    ++result.pairs_eliminated;
  }
  return result;
}

}  // namespace morse_concordance
