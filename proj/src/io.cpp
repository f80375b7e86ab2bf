#include "reconet/io.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "reconet/errors.hpp"

namespace reconet {

namespace {

// ---------------------------------------------------------------- Newick reader

struct Pos {
  std::size_t line = 1, col = 1;
};

struct PNode {
  std::vector<PNode> children;
  bool parens = false;
  std::string label;
  std::optional<std::string> tag;      // text after '#'
  std::optional<std::string> comment;  // last bracket comment
  Pos pos;
};

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  PNode document() {
    skip_ws();
    auto root = subtree();
    skip_ws();
    expect(';');
    skip_ws();
    if (i_ < s_.size()) fail("unexpected text after ';'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_.line, pos_.col); }

  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  bool eof() const { return i_ >= s_.size(); }

  void advance() {
    if (s_[i_] == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
    ++i_;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void expect(char c) {
    if (eof()) fail(std::string("expected '") + c + "' but input ended");
    if (peek() != c) fail(std::string("expected '") + c + "' but found '" + peek() + "'");
    advance();
  }

  static bool bare(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '[' &&
           c != ']' && c != ',' && c != ';' && c != ':' && c != '\'' && c != '#' && c != '\0';
  }

  std::string quoted() {
    advance();
    std::string out;
    while (true) {
      if (eof()) fail("unterminated quoted label");
      char c = peek();
      advance();
      if (c == '\'') {
        if (peek() == '\'') {
          out += '\'';
          advance();
          continue;
        }
        return out;
      }
      out += c;
    }
  }

  std::string bare_run() {
    std::string out;
    while (!eof() && bare(peek())) {
      out += peek();
      advance();
    }
    return out;
  }

  void annotations(PNode& n) {
    while (true) {
      skip_ws();
      if (peek() == '[') {
        advance();
        std::string c;
        while (!eof() && peek() != ']') {
          c += peek();
          advance();
        }
        if (eof()) fail("unterminated comment");
        advance();
        n.comment = c;
      } else if (peek() == ':') {
        advance();
        skip_ws();
        auto len = bare_run();
        if (len.empty()) fail("expected a branch length after ':'");
      } else {
        return;
      }
    }
  }

  PNode subtree() {
    PNode n;
    if (peek() == '(') {
      n.parens = true;
      advance();
      while (true) {
        skip_ws();
        n.children.push_back(subtree());
        skip_ws();
        if (peek() == ',') {
          advance();
          continue;
        }
        if (peek() == ')') {
          advance();
          break;
        }
        if (eof()) fail("input ended inside a subtree");
        fail(std::string("expected ',' or ')' but found '") + peek() + "'");
      }
    }
    skip_ws();
    auto label_pos = pos_;
    if (peek() == '\'') n.label = quoted();
    else n.label = bare_run();
    if (peek() == '#') {
      advance();
      auto tag = bare_run();
      if (tag.empty()) fail("empty hybrid tag");
      n.tag = tag;
    }
    n.pos = label_pos;
    annotations(n);
    if (!n.parens && n.label.empty() && !n.tag) fail("empty leaf label");
    return n;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  Pos pos_;
};

[[noreturn]] void fail_at(const PNode& n, const std::string& msg) {
  throw ParseError(msg, n.pos.line, n.pos.col);
}

// ---------------------------------------------------------------- Newick writer

bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || std::string_view("()[],;:'#").find(c) != std::string_view::npos)
      return true;
  return false;
}

std::string quote(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string fresh_name(const std::string& prefix, std::size_t& counter,
                       const std::map<std::string, VertexId>& taken) {
  std::string n;
  do n = prefix + std::to_string(++counter);
  while (taken.count(n));
  return n;
}

// Names that appear in the document, so generated names never collide with them.
void collect_labels(const PNode& n, std::set<std::string>& out) {
  if (!n.label.empty()) {
    out.insert(n.label);
    auto at = n.label.rfind('@');
    if (at != std::string::npos) out.insert(n.label.substr(0, at));
  }
  if (n.comment) out.insert(*n.comment);
  for (const auto& c : n.children) collect_labels(c, out);
}

}  // namespace

// ---------------------------------------------------------------- gene trees

SigmaTable parse_sigma(std::string_view text) {
  SigmaTable out;
  std::size_t line = 0;
  std::istringstream in{std::string(text)};
  std::string row;
  while (std::getline(in, row)) {
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty() || row[0] == '#') continue;
    auto tab = row.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == row.size())
      throw ParseError("expected gene<TAB>species", line, 1);
    auto gene = row.substr(0, tab), sp = row.substr(tab + 1);
    if (!out.emplace(gene, sp).second) throw ParseError("gene '" + gene + "' listed twice", line, 1);
  }
  return out;
}

GeneTree parse_gene_tree(std::string_view text, const SigmaTable* sigma) {
  auto doc = Reader(text).document();
  const PNode* top = &doc;
  if (doc.parens && doc.children.size() == 1 && doc.label.empty() && !doc.comment) top = &doc.children[0];

  DigraphBuilder b;
  Names names;
  std::vector<std::optional<Event>> events;
  std::vector<std::string> species;
  std::map<std::string, VertexId> taken;
  std::set<std::string> labels;
  collect_labels(*top, labels);
  for (const auto& l : labels) taken[l] = VertexId{};
  std::size_t counter = 0;
  std::set<std::string> used;

  std::function<VertexId(const PNode&)> walk = [&](const PNode& n) -> VertexId {
    if (n.tag) fail_at(n, "hybrid tags are not allowed in gene trees");
    auto v = b.add_vertex();
    names.emplace_back();
    events.emplace_back();
    species.emplace_back();
    std::string name;
    if (n.children.empty()) {
      auto at = n.label.rfind('@');
      if (at != std::string::npos) {
        name = n.label.substr(0, at);
        species[v.value] = n.label.substr(at + 1);
        if (name.empty() || species[v.value].empty()) fail_at(n, "expected gene@species");
      } else {
        name = n.label;
        auto it = sigma ? sigma->find(name) : SigmaTable::const_iterator{};
        if (!sigma || it == sigma->end()) fail_at(n, "no species for gene '" + name + "'");
        species[v.value] = it->second;
      }
    } else {
      std::string ev = n.label;
      std::transform(ev.begin(), ev.end(), ev.begin(), [](unsigned char c) { return std::toupper(c); });
      if (ev == "S") events[v.value] = Event::speciation;
      else if (ev == "D") events[v.value] = Event::duplication;
      else fail_at(n, "inner vertex needs label S or D, found '" + n.label + "'");
      name = n.comment && !n.comment->empty() ? *n.comment : fresh_name("n", counter, taken);
    }
    if (!used.insert(name).second) fail_at(n, "duplicate vertex name '" + name + "'");
    taken[name] = v;
    names[v.value] = name;
    for (const auto& c : n.children) b.add_arc(v, walk(c));
    return v;
  };
  auto root = walk(*top);
  b.set_root(root);
  return GeneTree::validate(b.build(), std::move(names), std::move(events), std::move(species));
}

std::string write_gene_tree(const GeneTree& t) {
  std::string out;
  std::function<void(VertexId)> walk = [&](VertexId v) {
    if (t.is_leaf(v)) {
      out += quote(t.name(v) + "@" + t.sigma(v));
      return;
    }
    out += '(';
    bool first = true;
    for (auto c : t.children(v)) {
      if (!first) out += ',';
      first = false;
      walk(c);
    }
    out += ')';
    out += to_string(*t.event(v));
    out += '[' + t.name(v) + ']';
  };
  walk(t.root());
  return out + ";\n";
}

// ---------------------------------------------------------------- networks and MUL-trees

namespace {

struct Built {
  DigraphBuilder b;
  Names names;
  std::vector<std::string> species;  // per id, leaves only (MUL-trees)
};

// Shared by networks and MUL-trees. Leaves of MUL-trees may be `name@species`.
Built build_rooted(const PNode& doc, bool allow_hybrids, bool mul, std::vector<std::string>* warnings) {
  Built r;
  std::map<std::string, VertexId> taken;
  std::set<std::string> labels;
  collect_labels(doc, labels);
  for (const auto& l : labels) taken[l] = VertexId{};
  std::size_t counter = 0;
  std::set<std::string> used;
  struct Hybrid {
    VertexId v;
    const PNode* first;
    const PNode* defining = nullptr;
    std::size_t refs = 0;
    std::string name;
  };
  std::map<std::string, Hybrid> hybrids;
  std::map<std::string, std::size_t> species_count;
  std::size_t hybrid_counter = 0;
  const bool planted = doc.parens && doc.children.size() == 1 && !doc.tag;

  auto new_vertex = [&]() {
    auto v = r.b.add_vertex();
    r.names.resize(v.value + 1);
    r.species.resize(v.value + 1);
    return v;
  };
  auto claim = [&](const PNode& n, VertexId v, const std::string& name) {
    if (!used.insert(name).second) fail_at(n, "duplicate vertex name '" + name + "'");
    taken[name] = v;
    r.names[v.value] = name;
  };

  std::function<VertexId(const PNode&)> walk = [&](const PNode& n) -> VertexId {
    if (n.tag) {
      if (!allow_hybrids) fail_at(n, "hybrid tags are not allowed here");
      auto it = hybrids.find(*n.tag);
      if (it == hybrids.end()) it = hybrids.emplace(*n.tag, Hybrid{new_vertex(), &n, nullptr, 0, {}}).first;
      auto& h = it->second;
      ++h.refs;
      if (!n.label.empty()) {
        if (h.name.empty()) {
          h.name = n.label;
          claim(n, h.v, n.label);
        } else if (h.name != n.label) {
          fail_at(n, "hybrid #" + *n.tag + " is named both '" + h.name + "' and '" + n.label + "'");
        }
      }
      if (n.parens) {
        if (h.defining) fail_at(n, "hybrid #" + *n.tag + " has children in two places");
        h.defining = &n;
        for (const auto& c : n.children) r.b.add_arc(h.v, walk(c));
      }
      return h.v;
    }
    auto v = new_vertex();
    if (n.children.empty()) {
      std::string name = n.label, sp = n.label;
      if (mul) {
        auto at = n.label.rfind('@');
        if (at != std::string::npos) {
          name = n.label.substr(0, at);
          sp = n.label.substr(at + 1);
          if (name.empty() || sp.empty()) fail_at(n, "expected name@species");
        } else if (species_count[sp]++ > 0 || used.count(name)) {
          name = unique_name(sp, taken);
        }
      }
      claim(n, v, name);
      r.species[v.value] = sp;
    } else {
      std::string name = n.label;
      if (name.empty()) name = planted && &n == &doc ? unique_name("root", taken) : fresh_name("i", counter, taken);
      claim(n, v, name);
      for (const auto& c : n.children) r.b.add_arc(v, walk(c));
    }
    return v;
  };

  VertexId root;
  if (planted) {
    root = walk(doc);
  } else {
    root = new_vertex();
    auto top = walk(doc);
    r.b.add_arc(root, top);
    claim(doc, root, unique_name("root", taken));
    if (warnings) warnings->push_back("top level has no single-child root; a root arc was added");
  }
  r.b.set_root(root);
  for (auto& [tag, h] : hybrids) {
    if (!h.defining) fail_at(*h.first, "hybrid tag #" + tag + " is never given children");
    if (h.refs < 2) fail_at(*h.first, "hybrid tag #" + tag + " is referenced only once");
    if (h.name.empty()) claim(*h.first, h.v, fresh_name("h", hybrid_counter, taken));
  }
  return r;
}

// A vertex needs a hybrid tag when it has more than one parent.
std::string write_rooted(const Labeled& x, const std::function<std::string(VertexId)>& leaf_label) {
  const auto& g = x.graph();
  std::map<VertexId, std::size_t> tag;
  std::set<VertexId> written;
  std::string out;
  std::function<void(VertexId)> walk = [&](VertexId v) {
    bool hybrid = g.indegree(v) > 1;
    std::string suffix;
    if (hybrid) {
      auto it = tag.find(v);
      if (it == tag.end()) it = tag.emplace(v, tag.size() + 1).first;
      suffix = "#H" + std::to_string(it->second);
      if (!written.insert(v).second) {
        out += quote(x.name(v)) + suffix;
        return;
      }
    }
    if (g.outdegree(v) == 0) {
      out += leaf_label(v) + suffix;
      return;
    }
    out += '(';
    bool first = true;
    for (auto c : g.children(v)) {
      if (!first) out += ',';
      first = false;
      walk(c);
    }
    out += ')' + quote(x.name(v)) + suffix;
  };
  walk(x.root());
  return out + ";\n";
}

}  // namespace

Network parse_network(std::string_view text, std::vector<std::string>* warnings) {
  auto doc = Reader(text).document();
  auto r = build_rooted(doc, true, false, warnings);
  return Network::validate(r.b.build(), std::move(r.names));
}

std::string write_network(const Network& n) {
  return write_rooted(n, [&](VertexId v) { return quote(n.name(v)); });
}

MULTree parse_mul(std::string_view text, bool pseudo, std::vector<std::string>* warnings) {
  auto doc = Reader(text).document();
  auto r = build_rooted(doc, false, true, warnings);
  return MULTree::validate(r.b.build(), std::move(r.names), std::move(r.species), pseudo);
}

std::string write_mul(const MULTree& m) {
  return write_rooted(m, [&](VertexId v) {
    return m.name(v) == m.species_of(v) ? quote(m.name(v)) : quote(m.name(v) + "@" + m.species_of(v));
  });
}

bool same_network(const Network& a, const Network& b) {
  const auto& ga = a.graph();
  const auto& gb = b.graph();
  if (ga.vertex_count() != gb.vertex_count() || ga.arc_count() != gb.arc_count()) return false;
  if (a.name(a.root()) != b.name(b.root())) return false;
  for (auto v : ga.vertices()) {
    auto w = b.find(a.name(v));
    if (!w) return false;
    std::vector<std::string> ca, cb;
    for (auto c : ga.children(v)) ca.push_back(a.name(c));
    for (auto c : gb.children(*w)) cb.push_back(b.name(c));
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return false;
  }
  return true;
}

bool same_mul(const MULTree& a, const MULTree& b) {
  const auto& ga = a.graph();
  const auto& gb = b.graph();
  if (a.pseudo() != b.pseudo() || ga.vertex_count() != gb.vertex_count()) return false;
  if (a.name(a.root()) != b.name(b.root())) return false;
  for (auto v : ga.vertices()) {
    auto w = b.find(a.name(v));
    if (!w || a.is_leaf(v) != b.is_leaf(*w)) return false;
    if (a.is_leaf(v) && a.species_of(v) != b.species_of(*w)) return false;
    std::vector<std::string> ca, cb;
    for (auto c : ga.children(v)) ca.push_back(a.name(c));
    for (auto c : gb.children(*w)) cb.push_back(b.name(c));
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return false;
  }
  return true;
}

// ---------------------------------------------------------------- triples

TripleSet parse_triples(std::string_view text) {
  TripleSet out;
  std::istringstream in{std::string(text)};
  std::string row;
  std::size_t line = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, row)) {
    ++line;
    auto hash = row.find('#');
    if (hash != std::string::npos) row = row.substr(0, hash);
    row = trim(row);
    if (row.empty()) continue;
    if (row.rfind("@labels", 0) == 0) {
      std::istringstream ls(row.substr(7));
      std::string l;
      while (ls >> l) out.labels.insert(l);
      continue;
    }
    auto bar = row.find('|');
    if (bar == std::string::npos || row.find('|', bar + 1) != std::string::npos)
      throw ParseError("expected a triple like a,b|c", line, 1);
    auto left = trim(row.substr(0, bar));
    auto c = trim(row.substr(bar + 1));
    std::string a, b;
    auto comma = left.find(',');
    if (comma != std::string::npos) {
      a = trim(left.substr(0, comma));
      b = trim(left.substr(comma + 1));
    } else if (left.size() == 2) {
      a = left.substr(0, 1);
      b = left.substr(1, 1);
    } else {
      throw ParseError("cannot split '" + left + "' into two labels; use a,b|c", line, 1);
    }
    if (a.empty() || b.empty() || c.empty()) throw ParseError("empty label in triple", line, 1);
    try {
      out.insert(make_triple(a, b, c));
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), line, 1);
    }
  }
  return out;
}

std::string write_triples(const TripleSet& r) {
  std::string out;
  std::set<std::string> mentioned;
  for (const auto& t : r.triples) mentioned.insert({t.a, t.b, t.c});
  std::string extra;
  for (const auto& l : r.labels)
    if (!mentioned.count(l)) extra += " " + l;
  if (!extra.empty()) out += "@labels" + extra + "\n";
  for (const auto& t : r.triples) out += to_string(t) + "\n";
  return out;
}

// ---------------------------------------------------------------- maps

std::string write_map(const GeneTree& t, const Labeled& target, const ReconMap& mu) {
  std::string out;
  for (auto v : t.preorder()) {
    if (!mu.has(v)) continue;
    const auto& e = mu.at(v);
    out += t.name(v) + "\t" + (is_vertex(e) ? "vertex" : "arc") + "\t" + element_label(target, e) + "\n";
  }
  return out;
}

ReconMap parse_map(std::string_view text, const GeneTree& t, const Labeled& target, TargetKind kind) {
  ReconMap mu;
  mu.kind = kind;
  const auto& g = target.graph();
  std::istringstream in{std::string(text)};
  std::string row;
  std::size_t line = 0;
  while (std::getline(in, row)) {
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty() || row[0] == '#') continue;
    auto t1 = row.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : row.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw ParseError("expected three tab-separated fields", line, 1);
    auto gene = row.substr(0, t1);
    auto kind_s = row.substr(t1 + 1, t2 - t1 - 1);
    auto id = row.substr(t2 + 1);
    auto v = t.find(gene);
    if (!v) throw ParseError("unknown gene vertex '" + gene + "'", line, 1);
    if (mu.has(*v)) throw ParseError("gene vertex '" + gene + "' mapped twice", line, 1);
    std::size_t col = t2 + 2;
    if (kind_s == "vertex") {
      auto w = target.find(id);
      if (!w) throw ParseError("unknown target vertex '" + id + "'", line, col);
      mu.set(*v, *w);
    } else if (kind_s == "arc") {
      auto hash = id.rfind('#');
      std::optional<ArcId> arc;
      if (hash != std::string::npos) {
        std::uint32_t index = 0;
        try {
          std::size_t used = 0;
          index = static_cast<std::uint32_t>(std::stoul(id.substr(hash + 1), &used));
          if (used != id.size() - hash - 1) throw std::invalid_argument("index");
        } catch (const std::exception&) {
          throw ParseError("bad arc index in '" + id + "'", line, col);
        }
        auto ends = id.substr(0, hash);
        for (auto gt = ends.find('>'); gt != std::string::npos && !arc; gt = ends.find('>', gt + 1)) {
          auto a = target.find(ends.substr(0, gt));
          auto b = target.find(ends.substr(gt + 1));
          if (a && b && g.contains(ArcId{*a, *b, index})) arc = ArcId{*a, *b, index};
        }
      }
      if (!arc) throw ParseError("unknown target arc '" + id + "'", line, col);
      mu.set(*v, *arc);
    } else {
      throw ParseError("second field must be 'vertex' or 'arc'", line, t1 + 2);
    }
  }
  return mu;
}

// ---------------------------------------------------------------- DOT

namespace {

std::string dq(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string dot_graph(const Labeled& x, const std::function<std::string(VertexId)>& vlabel,
                      const DotAnnotation& ann) {
  const auto& g = x.graph();
  std::map<Element, std::vector<std::string>> pre;
  if (ann.tree && ann.map)
    for (auto v : ann.tree->preorder())
      if (ann.map->has(v)) pre[ann.map->at(v)].push_back(ann.tree->name(v));
  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& e : xs) s += (s.empty() ? "" : ",") + e;
    return "{" + s + "}";
  };
  std::string out = "digraph G {\n";
  for (auto v : g.vertices()) {
    auto label = vlabel(v);
    auto it = pre.find(Element{v});
    if (it != pre.end()) label += "\n" + join(it->second);
    out += "  v" + std::to_string(v.value) + " [label=" + dq(label) +
           (x.is_leaf(v) ? ", shape=box" : "") + "];\n";
  }
  for (const auto& a : g.arcs()) {
    out += "  v" + std::to_string(a.tail.value) + " -> v" + std::to_string(a.head.value);
    auto it = pre.find(Element{a});
    if (it != pre.end()) out += " [label=" + dq(join(it->second)) + "]";
    out += ";\n";
  }
  return out + "}\n";
}

}  // namespace

std::string export_dot(const GeneTree& t) {
  return dot_graph(
      t,
      [&](VertexId v) {
        return t.is_leaf(v) ? t.name(v) + "@" + t.sigma(v) : t.name(v) + " " + to_string(*t.event(v));
      },
      {});
}

std::string export_dot(const Network& n, const DotAnnotation& ann) {
  return dot_graph(n, [&](VertexId v) { return n.name(v); }, ann);
}

std::string export_dot(const MULTree& m, const DotAnnotation& ann) {
  return dot_graph(
      m, [&](VertexId v) { return m.is_leaf(v) ? m.name(v) + "@" + m.species_of(v) : m.name(v); }, ann);
}

}  // namespace reconet
