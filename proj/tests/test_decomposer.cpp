#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "dbcount/decomposer.hpp"
#include "dbcount/generator.hpp"
#include "dbcount/hypergraph.hpp"

using namespace dbcount;

namespace {

Hypergraph random_hypergraph(std::mt19937_64& rng, int max_edges, int verts) {
  int m = 1 + static_cast<int>(rng() % max_edges);
  std::vector<std::vector<VertexId>> sets;
  for (int i = 0; i < m; ++i) {
    std::vector<VertexId> s;
    for (VertexId v = 0; v < verts; ++v)
      if (rng() % 3 == 0) s.push_back(v);
    if (s.empty()) s.push_back(static_cast<VertexId>(rng() % verts));
    sets.push_back(s);
  }
  return Hypergraph(sets);
}

std::string edges_to_string(const Hypergraph& h) {
  std::ostringstream os;
  os << "{";
  for (const Edge& e : h.edges()) {
    os << (e.id == h.edges().front().id ? "{" : " {");
    for (std::size_t i = 0; i < e.vars.size(); ++i) os << (i ? "," : "") << e.vars[i];
    os << "}";
  }
  os << "}";
  return os.str();
}

// Every accepted decomposition must satisfy the definition; rejected ones
// carry no tree.
void require_sound(const Hypergraph& h, EdgeId root, const DbOutcome& r) {
  if (!r.ok()) return;
  CAPTURE(edges_to_string(h));
  CAPTURE(root);
  REQUIRE(r.tree->root == root);
  REQUIRE(is_join_tree(h, *r.tree));
  REQUIRE(is_disjoint_branches(h, *r.tree));
}

std::vector<VertexId> trace(const Hypergraph& h, EdgeId e, const std::vector<VertexId>& vs) {
  std::vector<VertexId> out;
  const auto& vars = h.edge(e).vars;
  std::set_intersection(vars.begin(), vars.end(), vs.begin(), vs.end(), std::back_inserter(out));
  return out;
}

}  // namespace

TEST_CASE("compute_separator: spec'd shapes") {
  constexpr VertexId x = 0, y = 1, z = 2;
  {
    Hypergraph h({{x}, {x, y}, {y, z}});
    SeparatorOutcome r = compute_separator(h, {0, 1});
    REQUIRE(r.ok());
    CHECK(validate_separator(h, {0, 1}, *r.separator));

    SeparatorOutcome single = compute_separator(h, {2});
    REQUIRE(single.ok());
    CHECK(single.separator->order == std::vector<EdgeId>{2});
  }
  {
    Hypergraph triangle({{0, 1}, {1, 2}, {0, 2}});
    SeparatorOutcome r = compute_separator(triangle, triangle.edge_ids());
    REQUIRE_FALSE(r.ok());
    CHECK(r.reason == RejectReason::no_join_path);
  }
  {
    // the component edge {x,y} sees {x} and {y}: incomparable traces
    Hypergraph h({{x}, {y}, {x, y}});
    SeparatorOutcome r = compute_separator(h, {0, 1});
    REQUIRE_FALSE(r.ok());
    CHECK(r.reason == RejectReason::trace_not_chain);
  }
  {
    // one branch component wants a1 before a2, the other the reverse
    Hypergraph h({{0, 1, 3, 4}, {0, 1, 2, 3}, {1, 2, 5}, {3, 4, 6}});
    SeparatorOutcome r = compute_separator(h, {0, 1});
    REQUIRE_FALSE(r.ok());
    CHECK(r.reason == RejectReason::empty_restriction);
  }
  CHECK_THROWS_AS(compute_separator(Hypergraph({{0, 1}}), {}), std::invalid_argument);
}

TEST_CASE("validate_separator: spec'd shapes") {
  constexpr VertexId x = 0, y = 1, z = 2;
  Hypergraph h({{x}, {x, y}, {x, y, z}});
  CHECK(validate_separator(h, {0, 1}, Separator{{0, 1}}));
  // reversed against the component that needs growth
  CHECK_FALSE(validate_separator(h, {0, 1}, Separator{{1, 0}}));
  // not a permutation
  CHECK_FALSE(validate_separator(h, {0, 1}, Separator{{0, 0}}));
  CHECK_FALSE(validate_separator(h, {0, 1}, Separator{{0}}));
  // singleton
  CHECK(validate_separator(h, {2}, Separator{{2}}));
}

TEST_CASE("compute_separator agrees with the permutation-filter oracle") {
  std::mt19937_64 rng(40087);
  int accepted = 0, rejected = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Hypergraph h = random_hypergraph(rng, 6, 6);
    std::vector<EdgeId> ids = h.edge_ids();
    std::vector<EdgeId> a;
    for (EdgeId e : ids)
      if (rng() % 2) a.push_back(e);
    if (a.empty() || a.size() > 5) continue;

    // oracle: some permutation of a passes the definition check
    std::vector<EdgeId> perm = a;
    bool some_valid = false;
    do {
      if (validate_separator(h, a, Separator{perm})) some_valid = true;
    } while (!some_valid && std::next_permutation(perm.begin(), perm.end()));

    SeparatorOutcome r = compute_separator(h, a);
    CAPTURE(edges_to_string(h));
    CAPTURE(trial);
    REQUIRE(r.ok() == some_valid);
    if (r.ok()) {
      REQUIRE(validate_separator(h, a, *r.separator));
      ++accepted;
    } else {
      ++rejected;
    }
  }
  CHECK(accepted > 60);
  CHECK(rejected > 15);
}

TEST_CASE("compute_db: spec'd shapes") {
  constexpr VertexId a = 0, b = 1, c = 2, d = 3;
  {
    Hypergraph chain({{a, b}, {b, c}, {c, d}});
    DbOutcome r = compute_db(chain, 0);
    require_sound(chain, 0, r);
    REQUIRE(r.ok());
    using Pairs = std::vector<std::pair<EdgeId, EdgeId>>;
    CHECK(r.tree->parent == Pairs{{0, 0}, {1, 0}, {2, 1}});
  }
  {
    Hypergraph triangle({{a, b}, {b, c}, {a, c}});
    for (EdgeId e : triangle.edge_ids()) CHECK_FALSE(compute_db(triangle, e).ok());
  }
  {
    Hypergraph hn = make_hn(3);
    for (EdgeId e : hn.edge_ids()) {
      DbOutcome r = compute_db(hn, e);
      require_sound(hn, e, r);
      REQUIRE(r.ok());
    }
  }
  CHECK_THROWS_AS(compute_db(Hypergraph(std::vector<std::vector<VertexId>>{{0}}), 5),
                  std::out_of_range);
}

TEST_CASE("compute_db on disconnected input hangs the other components under the root") {
  Hypergraph h({{0, 1}, {1, 2}, {7, 8}, {8, 9}});
  DbOutcome r = compute_db(h, 1);
  require_sound(h, 1, r);
  REQUIRE(r.ok());
  CHECK(r.tree->nodes().size() == 4);
}

TEST_CASE("compute_db matches the exhaustive tree search at desk scale") {
  // every edge-set family with up to 3 of the 15 nonempty subsets of 4 vertices
  std::vector<std::vector<VertexId>> subset;
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<VertexId> s;
    for (VertexId v = 0; v < 4; ++v)
      if (mask & (1 << v)) s.push_back(v);
    subset.push_back(std::move(s));
  }
  int checked = 0;
  auto agree_everywhere = [&](const Hypergraph& h) {
    for (EdgeId e : h.edge_ids()) {
      DbOutcome got = compute_db(h, e);
      require_sound(h, e, got);
      bool expect = exhaustive_db_search(h, e).has_value();
      if (got.ok() != expect) {
        CAPTURE(edges_to_string(h));
        CAPTURE(e);
        REQUIRE(got.ok() == expect);
      }
      ++checked;
    }
  };
  using Sets = std::vector<std::vector<VertexId>>;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    agree_everywhere(Hypergraph(Sets{subset[i]}));
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      agree_everywhere(Hypergraph(Sets{subset[i], subset[j]}));
      for (std::size_t k = j + 1; k < subset.size(); ++k)
        agree_everywhere(Hypergraph(Sets{subset[i], subset[j], subset[k]}));
    }
  }
  CHECK(checked > 1500);

  // randomized, a size up: 6 edges over 8 vertices
  std::mt19937_64 rng(90125);
  for (int trial = 0; trial < 150; ++trial) {
    Hypergraph h = random_hypergraph(rng, 6, 8);
    agree_everywhere(h);
  }
}

TEST_CASE("gamma-cycle freeness equals rootability everywhere at desk scale") {
  std::mt19937_64 rng(55301);
  int acyclic = 0, cyclic = 0;
  for (int trial = 0; trial < 250; ++trial) {
    Hypergraph h = random_hypergraph(rng, 6, 7);
    bool no_cycle = !find_gamma_cycle(h).has_value();
    bool all_roots = true;
    for (EdgeId e : h.edge_ids())
      if (!compute_db(h, e).ok()) {
        all_roots = false;
        break;
      }
    if (no_cycle != all_roots) {
      CAPTURE(edges_to_string(h));
      CAPTURE(trial);
      REQUIRE(no_cycle == all_roots);
    }
    (no_cycle ? acyclic : cyclic) += 1;
  }
  CHECK(acyclic > 40);
  CHECK(cyclic > 40);
}

TEST_CASE("all valid separators of one cover set are equally strong") {
  std::mt19937_64 rng(17350);
  int families = 0, multi = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Hypergraph h = random_hypergraph(rng, 5, 6);
    if (h.edge_count() < 2) continue;
    std::vector<EdgeId> ids = h.edge_ids();
    EdgeId root = ids[rng() % ids.size()];
    auto comps = connected_components(h.remove_edge(root));
    if (comps.empty()) continue;
    const ComponentView& c = comps[0];

    std::vector<VertexId> tr = trace(h, root, c.vertices);
    std::vector<EdgeId> cover;
    for (EdgeId f : c.edges) {
      const auto& vs = h.edge(f).vars;
      if (std::includes(vs.begin(), vs.end(), tr.begin(), tr.end())) cover.push_back(f);
    }
    if (cover.empty()) continue;
    Hypergraph hi = subhypergraph(h, c.edges);

    // enumerate every validated separator, and judge each by whether all of
    // its pinned branch roots are exhaustively decomposable
    std::vector<EdgeId> perm = cover;
    std::sort(perm.begin(), perm.end());
    std::optional<bool> strongness;
    int valid_count = 0;
    do {
      Separator p{perm};
      if (!validate_separator(hi, cover, p)) continue;
      ++valid_count;
      bool strong = true;
      for (const ComponentView& cc : connected_components(hi.remove_edges(cover))) {
        int last = -1;
        for (std::size_t j = 0; j < perm.size(); ++j)
          if (!trace(h, perm[j], cc.vertices).empty()) last = static_cast<int>(j);
        REQUIRE(last >= 0);
        std::vector<std::vector<VertexId>> sets;
        for (EdgeId f : cc.edges) sets.push_back(h.edge(f).vars);
        sets.push_back(h.edge(perm[last]).vars);
        Hypergraph branch(sets);
        if (!exhaustive_db_search(branch, static_cast<EdgeId>(sets.size()) - 1).has_value())
          strong = false;
      }
      if (strongness.has_value() && *strongness != strong) {
        CAPTURE(edges_to_string(h));
        CAPTURE(root);
        CAPTURE(trial);
        REQUIRE(*strongness == strong);
      }
      strongness = strong;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (valid_count > 0) ++families;
    if (valid_count > 1) ++multi;
  }
  CHECK(families > 100);
  CHECK(multi > 30);
}

TEST_CASE("find_decomposition: spec'd shapes") {
  {
    Hypergraph two_chains({{0, 1}, {1, 2}, {7, 8}, {8, 9}});
    DecompositionSearch r = find_decomposition(two_chains);
    REQUIRE(r.ok());
    REQUIRE(r.trees.size() == 2);
    Hypergraph first = subhypergraph(two_chains, {0, 1});
    Hypergraph second = subhypergraph(two_chains, {2, 3});
    CHECK(is_join_tree(first, r.trees[0]));
    CHECK(is_disjoint_branches(first, r.trees[0]));
    CHECK(is_join_tree(second, r.trees[1]));
    CHECK(is_disjoint_branches(second, r.trees[1]));
  }
  {
    Hypergraph single({{4, 5}});
    DecompositionSearch r = find_decomposition(single);
    REQUIRE(r.ok());
    REQUIRE(r.trees.size() == 1);
    CHECK(r.trees[0].nodes() == std::vector<EdgeId>{0});
  }
  {
    // no root works: the covering triangle
    Hypergraph bad({{0, 1, 2}, {0, 1}, {1, 2}, {0, 2}});
    for (EdgeId e : bad.edge_ids()) CHECK_FALSE(compute_db(bad, e).ok());
    DecompositionSearch r = find_decomposition(bad);
    REQUIRE_FALSE(r.ok());
    CHECK(*r.failed_component == 0);
  }
  {
    // failure reported against the component that actually fails
    Hypergraph mixed({{9}, {0, 1}, {1, 2}, {0, 2}});
    DecompositionSearch r = find_decomposition(mixed);
    REQUIRE_FALSE(r.ok());
    CHECK(*r.failed_component == 1);
  }
}

TEST_CASE("exhaustive_db_search: spec'd shapes and guard") {
  Hypergraph triangle({{0, 1}, {1, 2}, {0, 2}});
  CHECK_FALSE(exhaustive_db_search(triangle).has_value());

  Hypergraph chain({{0, 1}, {1, 2}, {2, 3}});
  for (EdgeId e : chain.edge_ids()) {
    auto d = exhaustive_db_search(chain, e);
    REQUIRE(d.has_value());
    CHECK(d->root == e);
    CHECK(is_join_tree(chain, *d));
    CHECK(is_disjoint_branches(chain, *d));
  }

  Hypergraph covered({{0, 1, 2}, {0, 1}, {1, 2}, {0, 2}});
  CHECK_FALSE(exhaustive_db_search(covered).has_value());

  Hypergraph wide({{0}, {1}, {2}, {3}, {4}, {5}, {6}});
  CHECK_THROWS_AS(exhaustive_db_search(wide), std::invalid_argument);
  CHECK_THROWS_AS(exhaustive_db_search(chain, EdgeId{42}), std::out_of_range);
}

TEST_CASE("glue_decompositions makes one valid tree from component trees") {
  // Two components: a 2-edge chain on {0,1,2} and a single edge on {5,6}.
  Hypergraph h(std::vector<std::vector<VertexId>>{{0, 1}, {1, 2}, {5, 6}});
  DecompositionSearch found = find_decomposition(h);
  REQUIRE(found.ok());
  REQUIRE(found.trees.size() == 2);

  Decomposition glued = glue_decompositions(found.trees);
  CHECK(is_join_tree(h, glued));
  CHECK(is_disjoint_branches(h, glued));
  CHECK(glued.parent.size() == 3);

  CHECK_THROWS_AS(glue_decompositions({}), std::invalid_argument);

  Decomposition solo = glue_decompositions({found.trees[0]});
  CHECK(solo.root == found.trees[0].root);
  CHECK(solo.parent == found.trees[0].parent);
}
