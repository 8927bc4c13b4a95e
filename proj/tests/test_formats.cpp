#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "dbcount/counter.hpp"
#include "dbcount/decomposer.hpp"
#include "dbcount/formats.hpp"
#include "dbcount/generator.hpp"
#include "dbcount/hypergraph.hpp"

using namespace dbcount;

namespace {

int error_line(const std::string& text, ParsedInput (*parse)(const std::string&)) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line;
  }
  return -1;  // parsed cleanly
}

}  // namespace

TEST_CASE("parse_dimacs: spec'd shapes") {
  SUBCASE("two clauses parse with their source lines") {
    ParsedInput in = parse_dimacs("p cnf 3 2\n1 2 0\n2 3 0\n");
    CHECK(in.kind == ParsedInput::Kind::cnf);
    CHECK(in.variable_count == 3);
    REQUIRE(in.records.size() == 2);
    CHECK(in.records[0].clause == std::vector<int>{1, 2});
    CHECK(in.records[0].line == 2);
    CHECK(in.records[1].clause == std::vector<int>{2, 3});
    CHECK(in.records[1].line == 3);
    CHECK(in.report.empty());
  }
  SUBCASE("an empty clause flows through to an unsatisfiable instance") {
    ParsedInput in = parse_dimacs("p cnf 1 1\n0\n");
    REQUIRE(in.records.size() == 1);
    CHECK(in.records[0].clause.empty());
    CHECK(to_instance(in).unsatisfiable());
    CHECK(count_models(to_instance(in)) == 0);
  }
  SUBCASE("comments, CRLF, and clauses spanning lines are accepted") {
    ParsedInput in = parse_dimacs("c preamble\r\np cnf 4 2\r\nc note\r\n1\r\n-2 0\r\n3 0\n");
    REQUIRE(in.records.size() == 2);
    CHECK(in.records[0].clause == std::vector<int>{1, -2});
    CHECK(in.records[0].line == 4);
    CHECK(in.records[1].clause == std::vector<int>{3});
  }
  SUBCASE("duplicate and complementary literals are kept but reported") {
    ParsedInput in = parse_dimacs("p cnf 2 2\n1 1 0\n1 -1 0\n");
    REQUIRE(in.records.size() == 2);
    CHECK(in.records[0].clause == std::vector<int>{1, 1});
    CHECK(in.records[1].clause == std::vector<int>{1, -1});
    REQUIRE(in.report.size() == 2);
    CHECK(in.report[0].find("duplicate literal 1") != std::string::npos);
    CHECK(in.report[1].find("tautological") != std::string::npos);
  }
  SUBCASE("each failure carries its source line") {
    CHECK(error_line("c only comments\n", parse_dimacs) == 0);          // missing header
    CHECK(error_line("q cnf 1 1\n1 0\n", parse_dimacs) == 1);           // malformed header
    CHECK(error_line("p cnf two 1\n1 0\n", parse_dimacs) == 1);         // non-numeric header
    CHECK(error_line("p cnf 2 1\n3 0\n", parse_dimacs) == 2);           // index out of range
    CHECK(error_line("p cnf 2 1\n-3 0\n", parse_dimacs) == 2);          // negative out of range
    CHECK(error_line("p cnf 2 2\n1 0\n", parse_dimacs) == 0);           // clause count mismatch
    CHECK(error_line("p cnf 2 1\n1 0\n2 0\n", parse_dimacs) == 3);      // trailing garbage
    CHECK(error_line("p cnf 2 1\n1 x 0\n", parse_dimacs) == 2);         // junk token
    CHECK(error_line("p cnf 2 1\n1 2\n", parse_dimacs) == 2);           // unterminated clause
    CHECK(error_line("p cnf 2 1\n99999999999999999999 0\n", parse_dimacs) == 2);
  }
}

TEST_CASE("parse_cspneg: spec'd shapes") {
  SUBCASE("a constraint with one forbidden tuple") {
    ParsedInput in = parse_cspneg("p cspneg 2 1\ns 2 1 2 1\n0 0\n");
    CHECK(in.kind == ParsedInput::Kind::cspneg);
    CHECK(in.variable_count == 2);
    REQUIRE(in.records.size() == 1);
    CHECK(in.records[0].scope == std::vector<VertexId>{0, 1});
    CHECK(in.records[0].forbidden == std::vector<Tuple>{{0, 0}});
  }
  SUBCASE("a tuple-free constraint forbids nothing") {
    ParsedInput in = parse_cspneg("p cspneg 2 1\ns 2 1 2 0\n");
    REQUIRE(in.records.size() == 1);
    CHECK(in.records[0].forbidden.empty());
    CHECK(count_models(to_instance(in)) == 4);
  }
  SUBCASE("comments between records and CRLF are accepted") {
    ParsedInput in =
        parse_cspneg("p cspneg 3 2\r\nc pair\r\ns 2 1 2 1\r\n0 0\r\nc single\r\ns 1 3 1\r\n1\r\n");
    REQUIRE(in.records.size() == 2);
    CHECK(in.records[1].scope == std::vector<VertexId>{2});
    CHECK(in.records[1].forbidden == std::vector<Tuple>{{1}});
  }
  SUBCASE("each failure carries its source line") {
    CHECK(error_line("p cspneg 2 1\ns 2 1 2 1\n0 2\n", parse_cspneg) == 3);   // non-binary value
    CHECK(error_line("p cspneg 2 1\ns 3 1 2 1\n0 0\n", parse_cspneg) == 2);   // arity mismatch
    CHECK(error_line("p cspneg 2 1\ns 2 1 2 1\n0\n", parse_cspneg) == 3);     // tuple arity
    CHECK(error_line("p cspneg 2 1\ns 2 1 2 2\n0 0\n", parse_cspneg) == 0);   // tuple count
    CHECK(error_line("p cspneg 2 1\ns 2 1 3 1\n0 0\n", parse_cspneg) == 2);   // var out of range
    CHECK(error_line("p cspneg 2 1\ns 2 1 1 1\n0 0\n", parse_cspneg) == 2);   // duplicate var
    CHECK(error_line("p cspneg 2 1\ns 0 0\n", parse_cspneg) == 2);            // zero arity
    CHECK(error_line("p cspneg 2 1\nt 2 1 2 1\n0 0\n", parse_cspneg) == 2);   // wrong tag
    CHECK(error_line("p cspneg 2 1\ns 2 1 2 1\n0 0\nleft over\n", parse_cspneg) == 4);
    CHECK(error_line("p cspneg 2 2\ns 2 1 2 1\n0 0\n", parse_cspneg) == 0);   // missing record
  }
}

TEST_CASE("to_instance: parsed inputs count like hand-built ones") {
  CspNegInstance from_cnf = to_instance(parse_dimacs("p cnf 3 2\n1 2 0\n2 3 0\n"));
  CHECK(count_models(from_cnf) == 5);

  CspNegInstance from_cspneg =
      to_instance(parse_cspneg("p cspneg 3 2\ns 2 1 2 1\n0 0\ns 2 2 3 1\n0 0\n"));
  CHECK(count_models(from_cspneg) == 5);

  // Declared-but-unused variables scale the count instead of joining the
  // hypergraph.
  CspNegInstance padded = to_instance(parse_dimacs("p cnf 5 2\n1 2 0\n2 3 0\n"));
  CHECK(padded.free_variable_count() == 2);
  CHECK(count_models(padded) == 20);
}

TEST_CASE("decomposition documents round-trip") {
  SUBCASE("a chain decomposition survives write-read-write byte for byte") {
    Hypergraph h(std::vector<std::vector<VertexId>>{{0, 1}, {1, 2}, {2, 3}});
    Decomposition d = Decomposition::path({0, 1, 2});
    std::string text = write_decomposition(d, h);
    DecompositionDocument doc = read_decomposition_document(text);
    CHECK(doc.tree.root == d.root);
    CHECK(doc.tree.parent == d.parent);
    REQUIRE(doc.node_vars.size() == 3);
    CHECK(doc.node_vars[1] == std::vector<VertexId>{1, 2});
    CHECK(write_decomposition(doc.tree, Hypergraph(doc.node_vars)) == text);
  }
  SUBCASE("a branching decomposition round-trips") {
    Hypergraph h = make_hn(3);
    DbOutcome out = compute_db(h, 0);
    REQUIRE(out.ok());
    Decomposition back = read_decomposition(write_decomposition(*out.tree, h));
    CHECK(back.root == out.tree->root);
    CHECK(back.parent == out.tree->parent);
  }
  SUBCASE("writing rejects a tree whose branches overlap") {
    Hypergraph star(std::vector<std::vector<VertexId>>{{0}, {0, 1}, {0, 2}});
    Decomposition d;
    d.root = 1;
    d.parent = {{0, 1}, {1, 1}, {2, 1}};
    REQUIRE(is_join_tree(star, d));
    CHECK_THROWS_AS(write_decomposition(d, star), std::invalid_argument);
  }
}

TEST_CASE("read_decomposition rejects broken documents") {
  auto reject = [](const std::string& text, const char* needle) {
    try {
      read_decomposition_document(text);
      FAIL("accepted: " << text);
    } catch (const ParseError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                    "wanted '" << std::string(needle) << "' in '" << std::string(e.what())
                               << "'");
    }
  };

  reject("{nope", "invalid JSON");
  reject("[1,2]", "expected an object");
  reject(R"({"root":0,"nodes":[]})", "at least one node");
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[0],"children":[]},
            {"id":0,"vars":[1],"children":[]}])" "}", "distinct");
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[0],"children":[]},
            {"id":5,"vars":[1],"children":[]}])" "}", "distinct");
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[],"children":[]}]})", "empty vertex set");
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[0],"children":[7]}]})", "unknown child");
  reject(R"({"root":2,"nodes":[{"id":0,"vars":[0],"children":[1]},
            {"id":1,"vars":[1],"children":[]},
            {"id":2,"vars":[2],"children":[1]}])" "}", "two parents");
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[0],"children":[1]},
            {"id":1,"vars":[1],"children":[0]}])" "}", "cannot be another node's child");
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[0],"children":[]},
            {"id":1,"vars":[1],"children":[]}])" "}", "neither the root nor a child");
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[0],"children":[]},
            {"id":1,"vars":[1],"children":[2]},
            {"id":2,"vars":[2],"children":[1]}])" "}", "cycle");
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[3,4],"children":[1]},
            {"id":1,"vars":[4,3],"children":[]}])" "}", "same vertex set");
  // vertex 1 occurs at both ends of the path but not in the middle
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[0,1],"children":[1]},
            {"id":1,"vars":[2,3],"children":[2]},
            {"id":2,"vars":[1,2],"children":[]}])" "}", "join tree");
  // siblings sharing a vertex
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[0,1],"children":[1,2]},
            {"id":1,"vars":[1,2],"children":[]},
            {"id":2,"vars":[1,3],"children":[]}])" "}", "branches share");
  reject(R"({"root":0,"nodes":[{"id":0,"vars":[0,true],"children":[]}]})", "non-integer");
}

TEST_CASE("parsers survive arbitrary bytes with located diagnostics") {
  std::mt19937_64 rng(777);
  const std::string alphabet = "pcs 0123456789-\n\r\t{}[]\":,enuq";
  const std::string valid_cnf = "p cnf 3 2\n1 2 0\n2 3 0\n";
  const std::string valid_csp = "p cspneg 2 1\ns 2 1 2 1\n0 0\n";
  const std::string valid_json =
      R"({"root":0,"nodes":[{"id":0,"vars":[0,1],"children":[1]},)"
      R"({"id":1,"vars":[1,2],"children":[]}]})";

  auto scramble = [&](const std::string& base) {
    std::string s = base;
    int edits = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < edits && !s.empty(); ++i) {
      std::size_t pos = rng() % s.size();
      switch (rng() % 3) {
        case 0: s[pos] = alphabet[rng() % alphabet.size()]; break;
        case 1: s.erase(pos, 1); break;
        default: s.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
      }
    }
    return s;
  };

  int survived = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::string input;
    if (trial % 2 == 0) {
      std::size_t len = rng() % 120;
      for (std::size_t i = 0; i < len; ++i) input.push_back(alphabet[rng() % alphabet.size()]);
      if (trial % 20 == 0) input.push_back('\0');
    } else {
      const std::string& base =
          trial % 3 == 0 ? valid_cnf : (trial % 3 == 1 ? valid_csp : valid_json);
      input = scramble(base);
    }
    try {
      parse_dimacs(input);
    } catch (const ParseError& e) {
      CHECK(e.line >= 0);
    }
    try {
      parse_cspneg(input);
    } catch (const ParseError& e) {
      CHECK(e.line >= 0);
    }
    try {
      read_decomposition_document(input);
    } catch (const ParseError& e) {
      CHECK(e.line >= 0);
    }
    ++survived;
  }
  CHECK(survived == 2000);
}

TEST_CASE("instance writers round-trip through the parsers") {
  // cspneg keeps relations whole: structural identity after a round trip
  GeneratedInstance gen = gen_db_instance({.seed = 31, .edge_count = 6, .max_edge_size = 3,
                                           .branching = 2, .tuples_min = 1, .tuples_max = 3});
  const CspNegInstance& original = gen.instance;
  CspNegInstance reread = to_instance(parse_cspneg(write_cspneg(original)));
  REQUIRE(reread.variable_count() == original.variable_count());
  REQUIRE(reread.constraints().size() == original.constraints().size());
  for (std::size_t i = 0; i < original.constraints().size(); ++i) {
    CHECK(reread.constraints()[i].scope == original.constraints()[i].scope);
    CHECK(reread.constraints()[i].forbidden == original.constraints()[i].forbidden);
  }

  // the CNF writer shreds relations into one clause per tuple; the counts
  // still agree because parsing merges equal scopes back together
  CspNegInstance via_cnf = to_instance(parse_dimacs(write_dimacs(original)));
  CHECK(via_cnf.variable_count() == original.variable_count());
  CHECK(count_models(via_cnf) == count_models(original));

  // a constraint with nothing forbidden survives as a tautological clause
  CspNegInstance taut(3, {Constraint{{0, 1}, {}}});
  CspNegInstance taut_back = to_instance(parse_dimacs(write_dimacs(taut)));
  REQUIRE(taut_back.constraints().size() == 1);
  CHECK(taut_back.constraints()[0].scope == std::vector<VertexId>{0, 1});
  CHECK(taut_back.constraints()[0].forbidden.empty());
  CHECK(count_models(taut_back) == 8);

  // unsatisfiable: representable in CNF, rejected by the cspneg writer
  CspNegInstance unsat(2, {}, true);
  CspNegInstance unsat_back = to_instance(parse_dimacs(write_dimacs(unsat)));
  CHECK(unsat_back.unsatisfiable());
  CHECK(count_models(unsat_back) == 0);
  CHECK_THROWS_AS(write_cspneg(unsat), std::invalid_argument);
}

TEST_CASE("parse_auto dispatches on the header") {
  ParsedInput cnf = parse_auto("p cnf 2 1\n1 2 0\n");
  CHECK(cnf.kind == ParsedInput::Kind::cnf);
  ParsedInput csp = parse_auto("c negative\np cspneg 2 1\ns 1 2 1\n1\n");
  CHECK(csp.kind == ParsedInput::Kind::cspneg);

  CHECK(error_line("p dnf 2 1\n1 2 0\n", parse_auto) == 0);
  CHECK(error_line("hello\n", parse_auto) == 0);
  CHECK(error_line("", parse_auto) == 0);
}

TEST_CASE("match_decomposition binds documents to a hypergraph's edge ids") {
  Hypergraph h(std::vector<std::vector<VertexId>>{{0, 1}, {1, 2}, {2, 3}});
  Decomposition chain{0, {{0, 0}, {1, 0}, {2, 1}}};
  DecompositionDocument doc = read_decomposition_document(write_decomposition(chain, h));

  std::string why;
  std::optional<Decomposition> back = match_decomposition(doc, h, &why);
  REQUIRE(back.has_value());
  CHECK(back->root == chain.root);
  CHECK(back->parent == chain.parent);

  // Node ids in the document are arbitrary labels; vertex sets are what
  // bind, even written in a scrambled order.
  DecompositionDocument relabeled;
  relabeled.node_vars = {{3, 2}, {1, 0}, {2, 1}};
  relabeled.tree = Decomposition{1, {{0, 2}, {1, 1}, {2, 1}}};
  back = match_decomposition(relabeled, h, &why);
  REQUIRE(back.has_value());
  CHECK(back->root == 0);
  CHECK(back->parent == chain.parent);

  DecompositionDocument foreign = doc;
  foreign.node_vars[1] = {7, 8};
  CHECK_FALSE(match_decomposition(foreign, h, &why).has_value());
  CHECK(why.find("matches no edge") != std::string::npos);

  DecompositionDocument doubled = doc;
  doubled.node_vars[1] = {1, 0};  // now two nodes both name edge {0,1}
  CHECK_FALSE(match_decomposition(doubled, h, &why).has_value());
  CHECK(why.find("same edge") != std::string::npos);

  DecompositionDocument short_doc = doc;
  short_doc.node_vars.pop_back();
  short_doc.tree.parent.pop_back();
  CHECK_FALSE(match_decomposition(short_doc, h, &why).has_value());
  CHECK(why.find("3 edges") != std::string::npos);
}
