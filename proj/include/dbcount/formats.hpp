#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dbcount/hypergraph.hpp"
#include "dbcount/relation.hpp"

namespace dbcount {

// Diagnostic with a 1-based source line; line 0 means the document as a
// whole (e.g. a truncated file or a schema violation without a position).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line_no, const std::string& message)
      : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + message
                                       : message),
        line(line_no) {}

  int line;
};

// A parsed text instance, kept close to the source: one record per clause or
// constraint with the line it started on, plus notes about normalizations
// the parser observed (duplicate literals, tautological clauses).
struct ParsedInput {
  enum class Kind { cnf, cspneg };

  struct Record {
    int line = 0;                 // first source line of the record
    std::vector<int> clause;      // cnf: non-zero signed literals, as written
    std::vector<VertexId> scope;  // cspneg: 0-based variables
    std::vector<Tuple> forbidden; // cspneg: tuples over scope
  };

  Kind kind = Kind::cnf;
  int variable_count = 0;
  std::vector<Record> records;
  std::vector<std::string> report;
};

// DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header, then
// exactly <clauses> clauses as signed literals terminated by 0, free to span
// lines. Accepts LF or CRLF. Throws ParseError (missing or malformed
// header, literal out of range, clause count mismatch, trailing garbage).
ParsedInput parse_dimacs(const std::string& text);

// Negative-representation CSP text: a `p cspneg <vars> <constraints>`
// header, then per constraint a line `s <arity> <var...> <tuples>` (1-based
// variables) followed by <tuples> lines of <arity> space-separated 0/1
// values, the forbidden tuples. `c` comment lines are allowed between
// records. Throws ParseError (arity mismatch, non-binary value, tuple count
// mismatch, variable out of range, trailing garbage).
ParsedInput parse_cspneg(const std::string& text);

// Builds the instance: clauses go through cnf_to_cspneg (deduplication,
// tautology and empty-clause handling), constraint records are taken as
// written; declared-but-unused variables become the free-variable count.
CspNegInstance to_instance(const ParsedInput& in);

// Dispatches on the header kind: `p cnf` goes to parse_dimacs, `p cspneg`
// to parse_cspneg. Throws ParseError when neither header appears.
ParsedInput parse_auto(const std::string& text);

// Inverse of the parsers, for instances the formats can carry. The CNF
// writer emits one clause per forbidden tuple (value 0 = positive literal)
// and renders a constraint with no forbidden tuples as a tautological
// clause over its scope, so parsing the output reproduces the instance; an
// unsatisfiable instance gains one empty clause. The cspneg writer keeps
// relations whole and throws std::invalid_argument on the unsatisfiable
// flag, which that format cannot carry.
std::string write_dimacs(const CspNegInstance& inst);
std::string write_cspneg(const CspNegInstance& inst);

// One JSON document {"root": id, "nodes": [{"id", "vars", "children"}...]}
// on a single line: node ids are h's edge ids, vars each node's vertex set,
// children sorted ascending. Validates d against h first and throws
// std::invalid_argument when it is not a disjoint branches decomposition.
std::string write_decomposition(const Decomposition& d, const Hypergraph& h);

// A decomposition document plus the vertex sets it declares per node, for
// callers that must cross-check the tree against an instance of their own.
struct DecompositionDocument {
  Decomposition tree;
  std::vector<std::vector<VertexId>> node_vars;  // indexed by node id
};

// Shape-only read: dense distinct ids 0..m-1, nonempty vertex sets, one
// parent per non-root node, every node reachable from the root. Does NOT
// check the join-tree or disjoint-branches predicates — callers that want
// to report a verdict on those run them against their own hypergraph.
DecompositionDocument read_decomposition_schema(const std::string& text);

// Full read: the schema checks above, then vertex-set distinctness and the
// is_join_tree / is_disjoint_branches predicates over the hypergraph the
// vars declare. Throws ParseError on any violation.
DecompositionDocument read_decomposition_document(const std::string& text);

inline Decomposition read_decomposition(const std::string& text) {
  return read_decomposition_document(text).tree;
}

// Maps a document's nodes onto h's edges by vertex set and returns the
// tree rewritten over edge ids, or nothing when the mapping is not a
// bijection (storing the reason in `why` when it is non-null). This is how
// an externally supplied decomposition is bound to a parsed instance.
std::optional<Decomposition> match_decomposition(const DecompositionDocument& doc,
                                                 const Hypergraph& h,
                                                 std::string* why = nullptr);

}  // namespace dbcount
