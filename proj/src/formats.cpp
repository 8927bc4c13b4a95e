#include "dbcount/formats.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace dbcount {

namespace {

using nlohmann::json;

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      if (!current.empty() && current.back() == '\r') current.pop_back();
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty() && current.back() == '\r') current.pop_back();
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

bool blank_or_comment(const std::string& line) {
  for (char ch : line) {
    if (ch == ' ' || ch == '\t') continue;
    return ch == 'c';
  }
  return true;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(std::move(tok));
  return out;
}

// Whole-token integer; rejects junk and overflow with a located error.
long parse_long(const std::string& tok, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  errno = 0;
  long value = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw ParseError(line, "expected an integer, got '" + tok + "'");
  if (errno == ERANGE || value > std::numeric_limits<int>::max() ||
      value < std::numeric_limits<int>::min())
    throw ParseError(line, "integer '" + tok + "' out of range");
  return value;
}

// Finds the `p <kind> <n> <m>` header, skipping comments and blank lines;
// returns the next line index to read from.
std::size_t parse_header(const std::vector<std::string>& lines, const std::string& kind,
                         int& n, long& m) {
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (blank_or_comment(lines[li])) continue;
    std::vector<std::string> toks = tokens_of(lines[li]);
    int line = static_cast<int>(li) + 1;
    if (toks.size() != 4 || toks[0] != "p" || toks[1] != kind)
      throw ParseError(line, "expected 'p " + kind + " <vars> <count>' header");
    long vars = parse_long(toks[2], line);
    long count = parse_long(toks[3], line);
    if (vars < 0 || count < 0) throw ParseError(line, "header counts must be non-negative");
    n = static_cast<int>(vars);
    m = count;
    return li + 1;
  }
  throw ParseError(0, "missing 'p " + kind + "' header");
}

int line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t upto = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
}

}  // namespace

ParsedInput parse_dimacs(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  ParsedInput out;
  out.kind = ParsedInput::Kind::cnf;
  long m = 0;
  std::size_t li = parse_header(lines, "cnf", out.variable_count, m);

  std::vector<int> current;
  int clause_line = 0;
  for (; li < lines.size(); ++li) {
    if (blank_or_comment(lines[li])) continue;
    int line = static_cast<int>(li) + 1;
    for (const std::string& tok : tokens_of(lines[li])) {
      if (static_cast<long>(out.records.size()) == m)
        throw ParseError(line, "trailing garbage after the last clause");
      long lit = parse_long(tok, line);
      if (lit == 0) {
        ParsedInput::Record rec;
        rec.line = clause_line ? clause_line : line;
        rec.clause = std::move(current);
        current.clear();
        clause_line = 0;

        std::set<int> seen;
        std::set<int> noted;
        bool tautological = false;
        for (int l : rec.clause) {
          if (!seen.insert(l).second && noted.insert(l).second)
            out.report.push_back("line " + std::to_string(rec.line) + ": duplicate literal " +
                                 std::to_string(l) + " deduplicated");
          if (seen.count(-l)) tautological = true;
        }
        if (tautological)
          out.report.push_back("line " + std::to_string(rec.line) +
                               ": tautological clause kept");
        out.records.push_back(std::move(rec));
        continue;
      }
      if (lit > out.variable_count || lit < -out.variable_count)
        throw ParseError(line, "literal " + tok + " out of range, expected magnitude 1.." +
                                   std::to_string(out.variable_count));
      if (current.empty()) clause_line = line;
      current.push_back(static_cast<int>(lit));
    }
  }
  if (!current.empty())
    throw ParseError(clause_line, "unterminated clause at end of input");
  if (static_cast<long>(out.records.size()) != m)
    throw ParseError(0, "clause count mismatch: header declares " + std::to_string(m) +
                            ", found " + std::to_string(out.records.size()));
  return out;
}

ParsedInput parse_cspneg(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  ParsedInput out;
  out.kind = ParsedInput::Kind::cspneg;
  long m = 0;
  std::size_t li = parse_header(lines, "cspneg", out.variable_count, m);

  auto next_content = [&](const char* what) -> int {
    while (li < lines.size() && blank_or_comment(lines[li])) ++li;
    if (li == lines.size()) throw ParseError(0, std::string("unexpected end of input: ") + what);
    return static_cast<int>(li) + 1;
  };

  for (long rec_no = 0; rec_no < m; ++rec_no) {
    int line = next_content("expected a constraint");
    std::vector<std::string> toks = tokens_of(lines[li]);
    ++li;
    if (toks.empty() || toks[0] != "s")
      throw ParseError(line, "expected 's <arity> <vars...> <tuples>'");
    if (toks.size() < 2) throw ParseError(line, "missing arity");
    long arity = parse_long(toks[1], line);
    if (arity < 1) throw ParseError(line, "arity must be at least 1");
    if (static_cast<long>(toks.size()) != arity + 3)
      throw ParseError(line, "arity mismatch: expected " + std::to_string(arity) +
                                 " variables and a tuple count");

    ParsedInput::Record rec;
    rec.line = line;
    std::set<VertexId> seen;
    for (long i = 0; i < arity; ++i) {
      long v = parse_long(toks[2 + i], line);
      if (v < 1 || v > out.variable_count)
        throw ParseError(line, "variable " + std::to_string(v) + " out of range 1.." +
                                   std::to_string(out.variable_count));
      if (!seen.insert(static_cast<VertexId>(v - 1)).second)
        throw ParseError(line, "duplicate variable " + std::to_string(v) + " in scope");
      rec.scope.push_back(static_cast<VertexId>(v - 1));
    }
    long tuples = parse_long(toks.back(), line);
    if (tuples < 0) throw ParseError(line, "tuple count must be non-negative");

    for (long t = 0; t < tuples; ++t) {
      int tline = next_content("tuple count mismatch, constraint declares more tuples");
      std::vector<std::string> vals = tokens_of(lines[li]);
      ++li;
      if (static_cast<long>(vals.size()) != arity)
        throw ParseError(tline, "tuple arity mismatch: expected " + std::to_string(arity) +
                                    " values, found " + std::to_string(vals.size()));
      Tuple tup;
      for (const std::string& v : vals) {
        if (v != "0" && v != "1") throw ParseError(tline, "non-binary value '" + v + "'");
        tup.push_back(static_cast<std::uint8_t>(v == "1" ? 1 : 0));
      }
      rec.forbidden.push_back(std::move(tup));
    }
    out.records.push_back(std::move(rec));
  }

  while (li < lines.size() && blank_or_comment(lines[li])) ++li;
  if (li < lines.size())
    throw ParseError(static_cast<int>(li) + 1, "trailing garbage after the last constraint");
  return out;
}

ParsedInput parse_auto(const std::string& text) {
  for (const std::string& line : split_lines(text)) {
    if (blank_or_comment(line)) continue;
    std::vector<std::string> toks = tokens_of(line);
    if (toks.size() >= 2 && toks[0] == "p") {
      if (toks[1] == "cnf") return parse_dimacs(text);
      if (toks[1] == "cspneg") return parse_cspneg(text);
    }
    break;
  }
  throw ParseError(0, "unrecognized input: expected a 'p cnf' or 'p cspneg' header");
}

std::string write_dimacs(const CspNegInstance& inst) {
  std::size_t clause_count = inst.unsatisfiable() ? 1 : 0;
  for (const Constraint& c : inst.constraints())
    clause_count += c.forbidden.empty() ? 1 : c.forbidden.size();

  std::ostringstream os;
  os << "p cnf " << inst.variable_count() << " " << clause_count << "\n";
  for (const Constraint& c : inst.constraints()) {
    if (c.forbidden.empty()) {  // tautological: some literal both ways
      os << (c.scope[0] + 1) << " " << -(c.scope[0] + 1);
      for (std::size_t i = 1; i < c.scope.size(); ++i) os << " " << (c.scope[i] + 1);
      os << " 0\n";
      continue;
    }
    for (const Tuple& t : c.forbidden) {
      for (std::size_t i = 0; i < c.scope.size(); ++i)
        os << (i ? " " : "") << (t[i] ? -(c.scope[i] + 1) : (c.scope[i] + 1));
      os << " 0\n";
    }
  }
  if (inst.unsatisfiable()) os << "0\n";
  return os.str();
}

std::string write_cspneg(const CspNegInstance& inst) {
  if (inst.unsatisfiable())
    throw std::invalid_argument("the negative-constraint format cannot carry an empty clause");

  std::ostringstream os;
  os << "p cspneg " << inst.variable_count() << " " << inst.constraints().size() << "\n";
  for (const Constraint& c : inst.constraints()) {
    os << "s " << c.scope.size();
    for (VertexId v : c.scope) os << " " << (v + 1);
    os << " " << c.forbidden.size() << "\n";
    for (const Tuple& t : c.forbidden) {
      for (std::size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << int(t[i]);
      os << "\n";
    }
  }
  return os.str();
}

CspNegInstance to_instance(const ParsedInput& in) {
  if (in.kind == ParsedInput::Kind::cnf) {
    std::vector<std::vector<int>> clauses;
    clauses.reserve(in.records.size());
    for (const ParsedInput::Record& r : in.records) clauses.push_back(r.clause);
    return cnf_to_cspneg(clauses, in.variable_count);
  }
  std::vector<Constraint> constraints;
  constraints.reserve(in.records.size());
  for (const ParsedInput::Record& r : in.records)
    constraints.push_back(Constraint{r.scope, r.forbidden});
  return CspNegInstance(in.variable_count, std::move(constraints));
}

std::string write_decomposition(const Decomposition& d, const Hypergraph& h) {
  if (!is_join_tree(h, d) || !is_disjoint_branches(h, d))
    throw std::invalid_argument("not a disjoint branches decomposition of the hypergraph");
  json nodes = json::array();
  for (EdgeId e : d.nodes()) {
    json node;
    node["id"] = e;
    node["vars"] = h.edge(e).vars;
    node["children"] = d.children_of(e);
    nodes.push_back(std::move(node));
  }
  json doc;
  doc["root"] = d.root;
  doc["nodes"] = std::move(nodes);
  return doc.dump() + "\n";
}

namespace {

int int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ParseError(0, std::string("expected integer field '") + key + "'");
  long long v = j[key].get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ParseError(0, std::string("field '") + key + "' out of range");
  return static_cast<int>(v);
}

std::vector<int> int_array_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw ParseError(0, std::string("expected array field '") + key + "'");
  std::vector<int> out;
  for (const json& el : j[key]) {
    if (!el.is_number_integer())
      throw ParseError(0, std::string("array '") + key + "' holds a non-integer");
    long long v = el.get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
      throw ParseError(0, std::string("array '") + key + "' element out of range");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace

DecompositionDocument read_decomposition_schema(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line_of_byte(text, e.byte), std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
    throw ParseError(0, "expected an object with 'root' and 'nodes'");
  EdgeId root = int_field(doc, "root");
  const json& nodes = doc["nodes"];
  if (nodes.empty()) throw ParseError(0, "decomposition must have at least one node");
  const std::size_t count = nodes.size();

  DecompositionDocument out;
  out.node_vars.assign(count, {});
  std::vector<EdgeId> parent(count, -1);
  std::set<EdgeId> ids;
  for (const json& node : nodes) {
    if (!node.is_object()) throw ParseError(0, "node entries must be objects");
    EdgeId id = int_field(node, "id");
    if (id < 0 || static_cast<std::size_t>(id) >= count || !ids.insert(id).second)
      throw ParseError(0, "node ids must be distinct and cover 0.." +
                              std::to_string(count - 1));
    std::vector<int> vars = int_array_field(node, "vars");
    if (vars.empty())
      throw ParseError(0, "node " + std::to_string(id) + " has an empty vertex set");
    out.node_vars[id].assign(vars.begin(), vars.end());
    for (int child : int_array_field(node, "children")) {
      if (child < 0 || static_cast<std::size_t>(child) >= count)
        throw ParseError(0, "node " + std::to_string(id) + " lists unknown child " +
                                std::to_string(child));
      if (parent[child] != -1)
        throw ParseError(0, "node " + std::to_string(child) + " has two parents");
      parent[child] = id;
    }
  }
  if (root < 0 || static_cast<std::size_t>(root) >= count)
    throw ParseError(0, "root is not a listed node");
  if (parent[root] != -1) throw ParseError(0, "the root cannot be another node's child");
  for (std::size_t i = 0; i < count; ++i)
    if (parent[i] == -1 && static_cast<EdgeId>(i) != root)
      throw ParseError(0, "node " + std::to_string(i) + " is neither the root nor a child");

  std::vector<std::vector<EdgeId>> kids(count);
  for (std::size_t i = 0; i < count; ++i)
    if (parent[i] != -1) kids[parent[i]].push_back(static_cast<EdgeId>(i));
  std::vector<bool> reached(count, false);
  reached[root] = true;
  std::vector<EdgeId> queue{root};
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (EdgeId k : kids[queue[q]]) {
      reached[k] = true;
      queue.push_back(k);
    }
  for (std::size_t i = 0; i < count; ++i)
    if (!reached[i])
      throw ParseError(0, "node " + std::to_string(i) +
                              " is unreachable from the root (parent links form a cycle)");

  out.tree.root = root;
  for (std::size_t i = 0; i < count; ++i)
    out.tree.parent.emplace_back(static_cast<EdgeId>(i),
                                 static_cast<EdgeId>(i) == root ? root : parent[i]);
  return out;
}

DecompositionDocument read_decomposition_document(const std::string& text) {
  DecompositionDocument out = read_decomposition_schema(text);
  const std::size_t count = out.node_vars.size();

  Hypergraph h(out.node_vars);
  if (h.edge_count() != count)
    throw ParseError(0, "two nodes declare the same vertex set");
  try {
    if (!is_join_tree(h, out.tree))
      throw ParseError(0, "decomposition is not a join tree of its vertex sets");
    if (!is_disjoint_branches(h, out.tree))
      throw ParseError(0, "decomposition branches share vertices");
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  return out;
}

std::optional<Decomposition> match_decomposition(const DecompositionDocument& doc,
                                                 const Hypergraph& h, std::string* why) {
  auto fail = [&](std::string reason) {
    if (why) *why = std::move(reason);
    return std::nullopt;
  };
  if (doc.node_vars.size() != static_cast<std::size_t>(h.edge_count()))
    return fail("the document has " + std::to_string(doc.node_vars.size()) +
                " nodes but the hypergraph has " + std::to_string(h.edge_count()) + " edges");

  std::map<std::vector<VertexId>, EdgeId> edge_of;
  for (const Edge& e : h.edges()) edge_of[e.vars] = e.id;

  std::vector<EdgeId> mapped(doc.node_vars.size(), -1);
  std::vector<bool> used(doc.node_vars.size(), false);
  for (std::size_t i = 0; i < doc.node_vars.size(); ++i) {
    std::vector<VertexId> key = doc.node_vars[i];
    std::sort(key.begin(), key.end());
    auto it = edge_of.find(key);
    if (it == edge_of.end())
      return fail("node " + std::to_string(i) + "'s vertex set matches no edge");
    if (used[it->second]) return fail("two nodes map to the same edge");
    used[it->second] = true;
    mapped[i] = it->second;
  }

  std::vector<std::pair<EdgeId, EdgeId>> links;
  links.reserve(doc.node_vars.size());
  for (const auto& [node, par] : doc.tree.parent) links.emplace_back(mapped[node], mapped[par]);
  std::sort(links.begin(), links.end());
  return Decomposition{mapped[doc.tree.root], std::move(links)};
}

}  // namespace dbcount
