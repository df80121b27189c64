// Copyright 2026 The dcg-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "dcgforge/opcore.hpp"
#include "dcgforge/pulses.hpp"

#include <optional>

namespace dcg {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |Tr(A†B)| / dim == 1, i.e. B = e^{iα} A for unitary A, B.
inline bool equal_up_to_phase(const DenseOperator& a, const DenseOperator& b, double tol = 1e-10) {
  const double overlap = std::abs((a.matrix().adjoint() * b.matrix()).trace()) /
                         static_cast<double>(a.dim());
  return std::abs(overlap - 1.0) <= tol;
}

/// Projective representation of a decoupling group on the system register.
/// `drives[k]` lists the simultaneous control terms that realize generator k
/// as one π pulse.
struct DDGroupRep {
  std::vector<std::string> labels;
  std::vector<DenseOperator> unitaries;
  std::vector<int> generators;
  std::vector<std::vector<Generator>> drives;
  std::vector<std::vector<int>> table;  // table[a][b] = index of g_a·g_b
  int identity = 0;

  int size() const { return static_cast<int>(labels.size()); }
  int multiply(int a, int b) const { return table.at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b)); }
  int n_system() const { return unitaries.empty() ? 0 : unitaries.front().n_system(); }

  /// Builds the multiplication table by phase-insensitive matching and checks
  /// closure and that the generators generate.
  static DDGroupRep build(std::vector<std::string> labels, std::vector<DenseOperator> unitaries,
                          std::vector<int> generators, std::vector<std::vector<Generator>> drives) {
    DDGroupRep g;
    g.labels = std::move(labels);
    g.unitaries = std::move(unitaries);
    g.generators = std::move(generators);
    g.drives = std::move(drives);
    const int d = g.size();
    g.identity = -1;
    for (int i = 0; i < d; ++i) {
      if (equal_up_to_phase(DenseOperator::identity(g.unitaries[i].layout()), g.unitaries[i])) {
        g.identity = i;
      }
    }
    if (g.identity < 0) throw GraphError("group has no identity element");
    g.table.assign(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(d), -1));
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        const DenseOperator prod = g.unitaries[a] * g.unitaries[b];
        for (int c = 0; c < d; ++c) {
          if (equal_up_to_phase(g.unitaries[c], prod)) {
            g.table[a][b] = c;
            break;
          }
        }
        if (g.table[a][b] < 0) throw GraphError("representation is not closed");
      }
    }
    std::vector<bool> reached(static_cast<std::size_t>(d), false);
    std::vector<int> frontier{g.identity};
    reached[g.identity] = true;
    while (!frontier.empty()) {
      const int v = frontier.back();
      frontier.pop_back();
      for (int h : g.generators) {
        const int w = g.multiply(v, h);
        if (!reached[w]) {
          reached[w] = true;
          frontier.push_back(w);
        }
      }
    }
    if (std::find(reached.begin(), reached.end(), false) != reached.end()) {
      throw GraphError("generators do not generate the group");
    }
    return g;
  }
};

/// ℤ₂×ℤ₂ as the collective Paulis {I, X, Y, Z}^(⊗n), generated by X^(all)
/// then Y^(all).
inline DDGroupRep dd_group_z2z2(int n_system) {
  if (n_system < 1) throw std::invalid_argument("dd_group_z2z2: need at least one system qubit");
  const QubitLayout l{n_system, 0};
  std::vector<std::string> labels{"I", "X", "Y", "Z"};
  std::vector<DenseOperator> us;
  for (Pauli p : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
    us.push_back(embed_pauli_string(PauliString(std::vector<Pauli>(static_cast<std::size_t>(n_system), p)), l));
  }
  std::vector<Generator> xs, ys;
  for (int q = 0; q < n_system; ++q) {
    xs.push_back(Generator::x(q));
    ys.push_back(Generator::y(q));
  }
  return DDGroupRep::build(std::move(labels), std::move(us), {1, 2}, {xs, ys});
}

/// ‖(Σ_g U_g† E U_g) mod B‖: zero iff E is decoupled by the group.
inline double decoupling_residual(const DDGroupRep& rep, const DenseOperator& e) {
  DenseOperator acc = DenseOperator::zero(e.layout());
  for (const auto& u : rep.unitaries) {
    const DenseOperator uj = embed_system(u, e.layout());
    acc = acc + uj.adjoint() * e * uj;
  }
  const DenseOperator proj = mod_bath(acc);
  return spectral_norm(0.5 * (proj + proj.adjoint()));
}

enum class EdgeKind : std::uint8_t { Generator, IdentityArm, GateArm };

struct CayleyEdge {
  int from = 0;
  int to = 0;
  EdgeKind kind = EdgeKind::Generator;
  int generator = -1;  // position in DDGroupRep::generators for Generator edges

  friend bool operator==(const CayleyEdge&, const CayleyEdge&) = default;
};

/// Directed labeled multigraph. Vertices 0..D−1 are group elements; a
/// modified graph adds one extra vertex for the target gate.
struct CayleyGraph {
  std::vector<std::string> vertices;
  std::vector<CayleyEdge> edges;
  int identity = 0;
  std::optional<int> target;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }

  int out_degree(int v) const {
    return static_cast<int>(std::count_if(edges.begin(), edges.end(), [v](const CayleyEdge& e) { return e.from == v; }));
  }
  int in_degree(int v) const {
    return static_cast<int>(std::count_if(edges.begin(), edges.end(), [v](const CayleyEdge& e) { return e.to == v; }));
  }

  std::string edge_label(const CayleyEdge& e, const DDGroupRep& rep) const {
    switch (e.kind) {
      case EdgeKind::Generator: return rep.labels.at(static_cast<std::size_t>(rep.generators.at(static_cast<std::size_t>(e.generator))));
      case EdgeKind::IdentityArm: return "M_I";
      case EdgeKind::GateArm: return "M_U";
    }
    return "?";
  }
};

/// Edge (g, g·h, h) for every element g and generator h, ordered by element
/// then generator.
inline CayleyGraph cayley_graph(const DDGroupRep& rep) {
  CayleyGraph g;
  g.vertices = rep.labels;
  g.identity = rep.identity;
  for (int v = 0; v < rep.size(); ++v) {
    for (int k = 0; k < static_cast<int>(rep.generators.size()); ++k) {
      g.edges.push_back({v, rep.multiply(v, rep.generators[static_cast<std::size_t>(k)]), EdgeKind::Generator, k});
    }
  }
  return g;
}

/// Adds an M_I self-loop on every non-identity element and an M_U edge from
/// the identity to a new target vertex.
inline CayleyGraph modify_graph_for_gate(const CayleyGraph& graph, std::string target_label = "U") {
  if (graph.target) throw GraphError("graph is already modified");
  CayleyGraph g = graph;
  for (int v = 0; v < graph.vertex_count(); ++v) {
    if (v != graph.identity) g.edges.push_back({v, v, EdgeKind::IdentityArm, -1});
  }
  g.vertices.push_back(std::move(target_label));
  g.target = g.vertex_count() - 1;
  g.edges.push_back({graph.identity, *g.target, EdgeKind::GateArm, -1});
  return g;
}

struct EulerWalk {
  std::vector<int> edges;  // indices into CayleyGraph::edges
  int start = 0;
  int end = 0;

  std::size_t size() const { return edges.size(); }
};

/// Every edge used exactly once, consecutive edges head-to-tail.
inline bool is_valid_walk(const CayleyGraph& g, const EulerWalk& w) {
  if (static_cast<int>(w.edges.size()) != g.edge_count()) return false;
  std::vector<int> seen(static_cast<std::size_t>(g.edge_count()), 0);
  int at = w.start;
  for (int e : w.edges) {
    if (e < 0 || e >= g.edge_count() || seen[static_cast<std::size_t>(e)]++ != 0) return false;
    if (g.edges[static_cast<std::size_t>(e)].from != at) return false;
    at = g.edges[static_cast<std::size_t>(e)].to;
  }
  return at == w.end;
}

namespace detail {

// Hierholzer, stack form. Out-edges are consumed in the order they appear in
// the edge list, which fixes the walk for a given graph.
inline EulerWalk hierholzer(const CayleyGraph& g, int start) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(g.vertex_count()));
  for (int e = 0; e < g.edge_count(); ++e) out[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].from)].push_back(e);
  std::vector<std::size_t> next(out.size(), 0);
  std::vector<std::pair<int, int>> stack{{start, -1}};  // (vertex, edge used to reach it)
  std::vector<int> reversed;
  while (!stack.empty()) {
    const int v = stack.back().first;
    auto& cursor = next[static_cast<std::size_t>(v)];
    if (cursor < out[static_cast<std::size_t>(v)].size()) {
      const int e = out[static_cast<std::size_t>(v)][cursor++];
      stack.emplace_back(g.edges[static_cast<std::size_t>(e)].to, e);
    } else {
      if (stack.back().second >= 0) reversed.push_back(stack.back().second);
      stack.pop_back();
    }
  }
  EulerWalk w;
  w.edges.assign(reversed.rbegin(), reversed.rend());
  w.start = start;
  w.end = w.edges.empty() ? start : g.edges[static_cast<std::size_t>(w.edges.back())].to;
  if (static_cast<int>(w.edges.size()) != g.edge_count()) {
    throw GraphError("graph is not connected: walk covers " + std::to_string(w.edges.size()) +
                     " of " + std::to_string(g.edge_count()) + " edges");
  }
  return w;
}

}  // namespace detail

/// Closed walk from `start` through every edge once. Requires in = out at
/// every vertex.
inline EulerWalk eulerian_cycle(const CayleyGraph& g, int start) {
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (g.in_degree(v) != g.out_degree(v)) {
      throw GraphError("vertex " + g.vertices[static_cast<std::size_t>(v)] + " is unbalanced; no Eulerian cycle");
    }
  }
  return detail::hierholzer(g, start);
}

/// Open walk identity → target through every edge once. M_U is the only edge
/// into the target, so it is necessarily the last edge and leaves the
/// identity.
inline EulerWalk eulerian_path(const CayleyGraph& g) {
  if (!g.target) throw GraphError("eulerian_path needs a modified graph with a target vertex");
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int surplus = g.out_degree(v) - g.in_degree(v);
    const int want = v == g.identity ? 1 : (v == *g.target ? -1 : 0);
    if (surplus != want) {
      throw GraphError("vertex " + g.vertices[static_cast<std::size_t>(v)] + " violates the Eulerian-path degree condition");
    }
  }
  EulerWalk w = detail::hierholzer(g, g.identity);
  if (w.end != *g.target) throw GraphError("Eulerian path does not end at the target");
  return w;
}

}  // namespace dcg
