#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dbcount {

using VertexId = int;
using EdgeId = int;

// A hyperedge: sorted set of vertices plus the input labels (e.g. clause
// indices) that produced it. Duplicate vertex sets in the input merge into a
// single edge carrying all their labels.
struct Edge {
  EdgeId id = -1;
  std::vector<VertexId> vars;  // sorted, distinct, non-empty
  std::vector<int> labels;
};

struct ComponentView {
  int index = 0;
  std::vector<VertexId> vertices;  // sorted
  std::vector<EdgeId> edges;       // sorted
};

// Immutable hypergraph. Vertices are whatever ids appear in edges (dense
// 0..n-1 when built by a parser); the vertex universe is always the union of
// the edges, so deleting an edge drops vertices that occurred nowhere else.
class Hypergraph {
 public:
  Hypergraph() = default;

  // Builds a hypergraph from raw vertex sets. Sets are sorted and
  // deduplicated; equal sets merge (labels concatenated). Edge ids are
  // assigned 0..m-1 in first-occurrence order. Throws std::invalid_argument
  // on an empty edge.
  explicit Hypergraph(const std::vector<std::vector<VertexId>>& sets,
                      const std::vector<int>& labels = {});

  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(EdgeId id) const;
  const Edge& edge(EdgeId id) const;  // throws std::out_of_range on unknown id

  std::vector<VertexId> vertices() const;  // sorted union of edges
  std::size_t vertex_count() const;

  // H \ e and iterated deletion; result ids stay stable. Throws
  // std::out_of_range on an unknown id.
  Hypergraph remove_edge(EdgeId e) const;
  Hypergraph remove_edges(const std::vector<EdgeId>& ids) const;

  std::vector<EdgeId> edge_ids() const;

 private:
  std::vector<Edge> edges_;

  friend Hypergraph subhypergraph(const Hypergraph&, const std::vector<EdgeId>&);
};

// Restriction of h to the given edge ids (ids stay stable).
Hypergraph subhypergraph(const Hypergraph& h, const std::vector<EdgeId>& keep);

std::vector<ComponentView> connected_components(const Hypergraph& h);

// Rooted tree over the edges of a hypergraph: one node per edge, identified
// by EdgeId. The root's parent is itself.
struct Decomposition {
  EdgeId root = -1;
  std::vector<std::pair<EdgeId, EdgeId>> parent;  // (node, parent), sorted by node

  std::vector<EdgeId> nodes() const;
  EdgeId parent_of(EdgeId e) const;                // throws on unknown node
  std::vector<EdgeId> children_of(EdgeId e) const; // ascending

  // Path-shaped tree: order.front() is the root, each edge's parent is its
  // predecessor.
  static Decomposition path(const std::vector<EdgeId>& order);
};

// True iff d is a tree over exactly h's edges and, for every vertex v, the
// nodes whose edges contain v induce a connected subtree. Throws
// std::invalid_argument when d's node set differs from h's edge set or the
// parent links do not form a rooted tree.
bool is_join_tree(const Hypergraph& h, const Decomposition& d);

// True iff additionally every pair of nodes where neither is an ancestor of
// the other has disjoint edges. Throws std::invalid_argument unless d passes
// is_join_tree.
bool is_disjoint_branches(const Hypergraph& h, const Decomposition& d);

// True iff the order is a join path: for e <_order f <_order g, every vertex
// of e ∩ g also lies in f. Throws std::invalid_argument when order is not a
// permutation of h's edge ids.
bool check_join_path_order(const Hypergraph& h, const std::vector<EdgeId>& order);

// Witness (e_1, x_1, ..., e_n, x_n), n >= 3: distinct edges, distinct
// vertices, x_i in e_i and e_{i+1} and no other cycle edge (i < n), x_n in
// e_n and e_1.
struct GammaCycle {
  std::vector<EdgeId> edges;
  std::vector<VertexId> vertices;
};

// Exhaustive search, desk scale only: throws std::invalid_argument when
// |E| > 10.
std::optional<GammaCycle> find_gamma_cycle(const Hypergraph& h);

}  // namespace dbcount
