#include "dbcount/pqtree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>

namespace dbcount {

int PQFTree::add(PQFNode n) {
  nodes.push_back(std::move(n));
  return static_cast<int>(nodes.size()) - 1;
}

PQFTree PQFTree::single_leaf(EdgeId e) {
  PQFTree t;
  PQFNode n;
  n.kind = NodeKind::leaf;
  n.leaf = e;
  t.root = t.add(std::move(n));
  return t;
}

std::vector<EdgeId> PQFTree::leaves_under(int id) const {
  std::vector<EdgeId> out;
  std::function<void(int)> walk = [&](int cur) {
    const PQFNode& n = nodes[cur];
    if (n.kind == NodeKind::leaf) {
      out.push_back(n.leaf);
      return;
    }
    for (int c : n.children) walk(c);
  };
  walk(id);
  return out;
}

std::vector<EdgeId> PQFTree::frontier() const {
  if (root < 0) return {};
  return leaves_under(root);
}

std::vector<EdgeId> PQFTree::leaf_set() const {
  std::vector<EdgeId> out = frontier();
  std::sort(out.begin(), out.end());
  return out;
}

bool PQFTree::has_f_nodes() const {
  if (root < 0) return false;
  std::function<bool(int)> walk = [&](int cur) {
    const PQFNode& n = nodes[cur];
    if (n.kind == NodeKind::F) return true;
    for (int c : n.children)
      if (walk(c)) return true;
    return false;
  };
  return walk(root);
}

bool PQFTree::valid() const {
  if (root < 0) return false;
  bool ok = true;
  std::function<void(int)> walk = [&](int cur) {
    const PQFNode& n = nodes[cur];
    switch (n.kind) {
      case NodeKind::leaf:
        if (!n.children.empty()) ok = false;
        break;
      case NodeKind::P:
        if (n.children.size() < 2) ok = false;
        break;
      case NodeKind::Q:
        if (n.children.size() < 3) ok = false;
        break;
      case NodeKind::F:
        if (n.children.size() < 2) ok = false;
        for (int c : n.children)
          if (nodes[c].kind == NodeKind::F) ok = false;  // normal form
        break;
    }
    for (int c : n.children) walk(c);
  };
  walk(root);
  if (!ok) return false;
  std::vector<EdgeId> ls = frontier();
  std::sort(ls.begin(), ls.end());
  return std::adjacent_find(ls.begin(), ls.end()) == ls.end();
}

PQFSubtreeRef full_ref(const PQFTree& t, int node) {
  PQFSubtreeRef r;
  r.node = node;
  r.lo = 0;
  r.hi = static_cast<int>(t.at(node).children.size()) - 1;
  if (t.at(node).kind == NodeKind::leaf) r.hi = 0;
  return r;
}

PQFTree normalized(const PQFTree& t) {
  PQFTree out;
  if (t.root < 0) return out;

  // smallest descendant leaf id, for the canonical P-child order
  std::function<EdgeId(const PQFTree&, int)> min_leaf = [&](const PQFTree& tr, int id) {
    const PQFNode& n = tr.at(id);
    if (n.kind == NodeKind::leaf) return n.leaf;
    EdgeId best = -1;
    for (int c : n.children) {
      EdgeId m = min_leaf(tr, c);
      if (best < 0 || m < best) best = m;
    }
    return best;
  };

  std::function<int(int)> rebuild = [&](int cur) -> int {
    const PQFNode& n = t.at(cur);
    if (n.kind == NodeKind::leaf) {
      PQFNode leaf;
      leaf.kind = NodeKind::leaf;
      leaf.leaf = n.leaf;
      return out.add(std::move(leaf));
    }
    std::vector<int> kids;
    for (int c : n.children) kids.push_back(rebuild(c));
    if (kids.size() == 1) return kids[0];  // splice single-child nodes

    PQFNode fresh;
    fresh.kind = n.kind;
    if (fresh.kind == NodeKind::Q && kids.size() == 2) fresh.kind = NodeKind::P;
    if (fresh.kind == NodeKind::F) {
      // normal form: inline F-children of F-nodes (frontier-identical)
      std::vector<int> flat;
      for (int c : kids) {
        if (out.at(c).kind == NodeKind::F) {
          for (int cc : out.at(c).children) flat.push_back(cc);
        } else {
          flat.push_back(c);
        }
      }
      fresh.children = std::move(flat);
    } else {
      fresh.children = std::move(kids);
    }
    if (fresh.kind == NodeKind::P) {
      std::sort(fresh.children.begin(), fresh.children.end(),
                [&](int x, int y) { return min_leaf(out, x) < min_leaf(out, y); });
    }
    return out.add(std::move(fresh));
  };

  out.root = rebuild(t.root);
  return out;
}

namespace {

constexpr std::size_t kFrontierGuard = 20000;

std::size_t frontier_count(const PQFTree& t, int id) {
  const PQFNode& n = t.at(id);
  if (n.kind == NodeKind::leaf) return 1;
  std::size_t total = 1;
  auto mul = [&](std::size_t f) {
    if (total > kFrontierGuard + 1 || f > kFrontierGuard + 1) total = kFrontierGuard + 1;
    else total = std::min<std::size_t>(total * f, kFrontierGuard + 1);
  };
  for (int c : n.children) mul(frontier_count(t, c));
  if (n.kind == NodeKind::Q) mul(2);
  if (n.kind == NodeKind::P) {
    for (std::size_t k = 2; k <= n.children.size(); ++k) mul(k);
  }
  return total;
}

using FrontierSet = std::set<std::vector<EdgeId>>;

std::vector<EdgeId> concat(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
  std::vector<EdgeId> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// frontiers of children [lo..hi] concatenated in that order
FrontierSet cat_range(const std::vector<int>& kids, int lo, int hi,
                      const std::function<FrontierSet(int)>& sub) {
  FrontierSet acc{{}};
  for (int i = lo; i <= hi; ++i) {
    FrontierSet next;
    for (const auto& pre : acc)
      for (const auto& f : sub(kids[i])) next.insert(concat(pre, f));
    acc = std::move(next);
  }
  return acc;
}

FrontierSet node_frontiers(const PQFTree& t, int id) {
  const PQFNode& n = t.at(id);
  std::function<FrontierSet(int)> sub = [&](int c) { return node_frontiers(t, c); };
  switch (n.kind) {
    case NodeKind::leaf:
      return {{n.leaf}};
    case NodeKind::F:
      return cat_range(n.children, 0, static_cast<int>(n.children.size()) - 1, sub);
    case NodeKind::Q: {
      FrontierSet fwd = cat_range(n.children, 0, static_cast<int>(n.children.size()) - 1, sub);
      std::vector<int> rev(n.children.rbegin(), n.children.rend());
      FrontierSet bwd = cat_range(rev, 0, static_cast<int>(rev.size()) - 1, sub);
      fwd.insert(bwd.begin(), bwd.end());
      return fwd;
    }
    case NodeKind::P: {
      std::vector<int> kids = n.children;
      std::sort(kids.begin(), kids.end());
      FrontierSet all;
      do {
        FrontierSet one = cat_range(kids, 0, static_cast<int>(kids.size()) - 1, sub);
        all.insert(one.begin(), one.end());
      } while (std::next_permutation(kids.begin(), kids.end()));
      return all;
    }
  }
  return {};
}

}  // namespace

std::set<std::vector<EdgeId>> enumerate_frontiers(const PQFTree& t) {
  if (t.root < 0) return {};
  if (frontier_count(t, t.root) > kFrontierGuard)
    throw std::invalid_argument("enumerate_frontiers: size guard exceeded");
  return node_frontiers(t, t.root);
}

std::set<std::vector<EdgeId>> enumerate_frontiers(const PQFTree& t, const PQFSubtreeRef& s) {
  const PQFNode& n = t.at(s.node);
  if (n.kind == NodeKind::leaf) return {{n.leaf}};
  const bool full = s.lo == 0 && s.hi == static_cast<int>(n.children.size()) - 1;
  if (n.kind == NodeKind::P || full) {
    PQFTree view = t;
    view.root = s.node;
    if (frontier_count(view, s.node) > kFrontierGuard)
      throw std::invalid_argument("enumerate_frontiers: size guard exceeded");
    return node_frontiers(view, s.node);
  }
  std::function<FrontierSet(int)> sub = [&](int c) { return node_frontiers(t, c); };
  FrontierSet fwd = cat_range(n.children, s.lo, s.hi, sub);
  if (n.kind == NodeKind::Q) {
    std::vector<int> rev(n.children.begin() + s.lo, n.children.begin() + s.hi + 1);
    std::reverse(rev.begin(), rev.end());
    FrontierSet bwd = cat_range(rev, 0, static_cast<int>(rev.size()) - 1, sub);
    fwd.insert(bwd.begin(), bwd.end());
  }
  if (fwd.size() > kFrontierGuard)
    throw std::invalid_argument("enumerate_frontiers: size guard exceeded");
  return fwd;
}

std::string to_debug_string(const PQFTree& t) {
  if (t.root < 0) return "()";
  std::function<std::string(int)> walk = [&](int id) {
    const PQFNode& n = t.at(id);
    if (n.kind == NodeKind::leaf) return std::to_string(n.leaf);
    std::string s = "(";
    s += n.kind == NodeKind::P ? 'P' : n.kind == NodeKind::Q ? 'Q' : 'F';
    for (int c : n.children) {
      s += ' ';
      s += walk(c);
    }
    s += ')';
    return s;
  };
  return walk(t.root);
}

PQFTree parse_debug_tree(const std::string& s) {
  PQFTree t;
  std::size_t pos = 0;
  auto skip_ws = [&] { while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos; };
  std::function<int()> parse = [&]() -> int {
    skip_ws();
    if (pos >= s.size()) throw std::invalid_argument("parse_debug_tree: truncated input");
    if (s[pos] == '(') {
      ++pos;
      skip_ws();
      if (pos >= s.size()) throw std::invalid_argument("parse_debug_tree: truncated input");
      PQFNode n;
      switch (s[pos]) {
        case 'P': n.kind = NodeKind::P; break;
        case 'Q': n.kind = NodeKind::Q; break;
        case 'F': n.kind = NodeKind::F; break;
        default: throw std::invalid_argument("parse_debug_tree: expected P/Q/F");
      }
      ++pos;
      std::vector<int> kids;
      while (true) {
        skip_ws();
        if (pos >= s.size()) throw std::invalid_argument("parse_debug_tree: missing ')'");
        if (s[pos] == ')') { ++pos; break; }
        kids.push_back(parse());
      }
      n.children = std::move(kids);
      return t.add(std::move(n));
    }
    if (!std::isdigit(static_cast<unsigned char>(s[pos])))
      throw std::invalid_argument("parse_debug_tree: expected leaf id");
    EdgeId v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      v = v * 10 + (s[pos++] - '0');
    PQFNode leaf;
    leaf.kind = NodeKind::leaf;
    leaf.leaf = v;
    return t.add(std::move(leaf));
  };
  t.root = parse();
  skip_ws();
  if (pos != s.size()) throw std::invalid_argument("parse_debug_tree: trailing input");
  return t;
}

}  // namespace dbcount
