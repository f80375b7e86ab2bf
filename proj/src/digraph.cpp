#include "reconet/digraph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "reconet/errors.hpp"
#include "reconet/report.hpp"

namespace reconet {

namespace {

std::size_t count_before(std::span<const VertexId> list, VertexId x, std::size_t pos) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < pos; ++i)
    if (list[i] == x) ++k;
  return k;
}

// Position of the k-th occurrence of x in list, or list.size().
std::size_t kth_position(const std::vector<VertexId>& list, VertexId x, std::size_t k) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i] != x) continue;
    if (k == 0) return i;
    --k;
  }
  return list.size();
}

}  // namespace

std::string Report::to_string() const {
  if (violations.empty()) return "ok";
  std::ostringstream os;
  bool first = true;
  for (const auto& v : violations) {
    if (!first) os << '\n';
    first = false;
    os << v.axiom << ": " << v.message;
    if (!v.witnesses.empty()) {
      os << " [";
      for (std::size_t i = 0; i < v.witnesses.size(); ++i) os << (i ? ", " : "") << v.witnesses[i];
      os << ']';
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- Digraph

void Digraph::check(VertexId v) const {
  if (!contains(v)) throw IdentifierError("unknown vertex " + reconet::to_string(v));
}

bool Digraph::contains(const ArcId& a) const {
  return contains(a.tail) && contains(a.head) && a.index < multiplicity(a.tail, a.head);
}

bool Digraph::contains(const Element& e) const {
  return is_vertex(e) ? contains(as_vertex(e)) : contains(as_arc(e));
}

std::vector<VertexId> Digraph::vertices() const {
  std::vector<VertexId> out;
  out.reserve(vertex_count_);
  for (std::uint32_t i = 0; i < alive_.size(); ++i)
    if (alive_[i]) out.push_back(VertexId{i});
  return out;
}

std::vector<ArcId> Digraph::arcs() const {
  std::vector<ArcId> out;
  out.reserve(arc_count_);
  for (auto v : vertices()) {
    auto oa = out_arcs(v);
    out.insert(out.end(), oa.begin(), oa.end());
  }
  return out;
}

std::span<const VertexId> Digraph::children(VertexId v) const {
  check(v);
  return out_[v.value];
}

std::span<const VertexId> Digraph::parents(VertexId v) const {
  check(v);
  return in_[v.value];
}

std::vector<ArcId> Digraph::out_arcs(VertexId v) const {
  auto ch = children(v);
  std::vector<ArcId> out;
  out.reserve(ch.size());
  for (std::size_t i = 0; i < ch.size(); ++i)
    out.push_back(ArcId{v, ch[i], static_cast<std::uint32_t>(count_before(ch, ch[i], i))});
  return out;
}

std::vector<ArcId> Digraph::in_arcs(VertexId v) const {
  auto pa = parents(v);
  std::vector<ArcId> out;
  out.reserve(pa.size());
  for (std::size_t i = 0; i < pa.size(); ++i)
    out.push_back(ArcId{pa[i], v, static_cast<std::uint32_t>(count_before(pa, pa[i], i))});
  return out;
}

std::size_t Digraph::multiplicity(VertexId tail, VertexId head) const {
  auto ch = children(tail);
  return static_cast<std::size_t>(std::count(ch.begin(), ch.end(), head));
}

bool Digraph::has_multi_arcs() const {
  for (auto v : vertices()) {
    std::vector<VertexId> ch(out_[v.value]);
    std::sort(ch.begin(), ch.end());
    if (std::adjacent_find(ch.begin(), ch.end()) != ch.end()) return true;
  }
  return false;
}

std::vector<VertexId> Digraph::sinks() const {
  std::vector<VertexId> out;
  for (auto v : vertices())
    if (out_[v.value].empty()) out.push_back(v);
  return out;
}

bool Digraph::reaches(VertexId from, VertexId to) const {
  check(from);
  check(to);
  return (desc_[from.value][to.value / 64] >> (to.value % 64)) & 1u;
}

ArcId Digraph::in_arc(VertexId v) const {
  auto pa = parents(v);
  if (pa.size() != 1)
    throw StructureError("vertex " + reconet::to_string(v) + " has indegree " +
                         std::to_string(pa.size()) + ", expected 1");
  return ArcId{pa[0], v, 0};
}

// ---------------------------------------------------------------- DigraphBuilder

DigraphBuilder::DigraphBuilder(const Digraph& g)
    : alive_(g.alive_), out_(g.out_), in_(g.in_), root_(g.root_) {}

void DigraphBuilder::check(VertexId v) const {
  if (!contains(v)) throw IdentifierError("unknown vertex " + to_string(v));
}

VertexId DigraphBuilder::add_vertex() {
  VertexId v{static_cast<std::uint32_t>(alive_.size())};
  alive_.push_back(1);
  out_.emplace_back();
  in_.emplace_back();
  return v;
}

ArcId DigraphBuilder::add_arc(VertexId tail, VertexId head) {
  check(tail);
  check(head);
  auto& ch = out_[tail.value];
  auto index = static_cast<std::uint32_t>(std::count(ch.begin(), ch.end(), head));
  ch.push_back(head);
  in_[head.value].push_back(tail);
  return ArcId{tail, head, index};
}

void DigraphBuilder::remove_arc(const ArcId& arc) {
  check(arc.tail);
  check(arc.head);
  auto& ch = out_[arc.tail.value];
  auto& pa = in_[arc.head.value];
  auto i = kth_position(ch, arc.head, arc.index);
  auto j = kth_position(pa, arc.tail, arc.index);
  if (i == ch.size() || j == pa.size()) throw IdentifierError("unknown arc " + to_string(arc));
  ch.erase(ch.begin() + static_cast<std::ptrdiff_t>(i));
  pa.erase(pa.begin() + static_cast<std::ptrdiff_t>(j));
}

void DigraphBuilder::remove_vertex(VertexId v) {
  check(v);
  for (auto c : out_[v.value]) {
    auto& pa = in_[c.value];
    pa.erase(std::remove(pa.begin(), pa.end(), v), pa.end());
  }
  for (auto p : in_[v.value]) {
    auto& ch = out_[p.value];
    ch.erase(std::remove(ch.begin(), ch.end(), v), ch.end());
  }
  out_[v.value].clear();
  in_[v.value].clear();
  alive_[v.value] = 0;
  if (root_ == v) root_.reset();
}

void DigraphBuilder::set_root(VertexId v) {
  check(v);
  root_ = v;
}

Digraph DigraphBuilder::build() const {
  Digraph g;
  g.alive_ = alive_;
  g.out_ = out_;
  g.in_ = in_;
  const std::size_t n = alive_.size();
  std::vector<VertexId> sources;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!alive_[i]) continue;
    ++g.vertex_count_;
    g.arc_count_ += out_[i].size();
    if (in_[i].empty()) sources.push_back(VertexId{i});
  }
  if (root_) {
    if (!in_[root_->value].empty())
      throw StructureError("root " + to_string(*root_) + " has nonzero indegree");
    g.root_ = root_;
  } else if (sources.size() == 1) {
    g.root_ = sources.front();
  }

  // Kahn's algorithm; the min-heap makes the order depend only on ids.
  std::vector<std::size_t> indeg(n, 0);
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!alive_[i]) continue;
    indeg[i] = in_[i].size();
    if (indeg[i] == 0) ready.push(i);
  }
  while (!ready.empty()) {
    auto i = ready.top();
    ready.pop();
    g.topo_.push_back(VertexId{i});
    for (auto c : out_[i])
      if (--indeg[c.value] == 0) ready.push(c.value);
  }
  if (g.topo_.size() != g.vertex_count_) throw StructureError("graph contains a directed cycle");

  g.words_ = (n + 63) / 64;
  g.desc_.assign(n, std::vector<std::uint64_t>(g.words_, 0));
  for (auto it = g.topo_.rbegin(); it != g.topo_.rend(); ++it) {
    auto& d = g.desc_[it->value];
    d[it->value / 64] |= std::uint64_t{1} << (it->value % 64);
    for (auto c : out_[it->value]) {
      const auto& dc = g.desc_[c.value];
      for (std::size_t w = 0; w < g.words_; ++w) d[w] |= dc[w];
    }
  }

  if (g.root_) {
    for (auto v : g.topo_)
      if (!g.reaches(*g.root_, v))
        throw StructureError("vertex " + to_string(v) + " is not reachable from the root");
  }
  return g;
}

// ---------------------------------------------------------------- order queries

bool is_ancestor(const Digraph& g, const Element& a, const Element& b) {
  if (!g.contains(a)) throw IdentifierError("unknown element " + to_string(a));
  if (!g.contains(b)) throw IdentifierError("unknown element " + to_string(b));
  // x ⪯ y means y lies on a path from the root to x.
  if (is_vertex(a) && is_vertex(b)) return g.reaches(as_vertex(b), as_vertex(a));
  if (is_vertex(a)) return g.reaches(as_arc(b).head, as_vertex(a));
  if (is_vertex(b)) return g.reaches(as_vertex(b), as_arc(a).tail);
  if (as_arc(a) == as_arc(b)) return true;
  return g.reaches(as_arc(b).head, as_arc(a).tail);
}

std::vector<VertexId> leaves_below(const Digraph& g, VertexId x) {
  std::vector<VertexId> out;
  for (auto l : g.sinks())
    if (g.reaches(x, l)) out.push_back(l);
  return out;
}

VertexId lca(const Digraph& g, std::span<const VertexId> vs) {
  if (vs.empty()) throw ArgumentError("lca of an empty set");
  for (auto v : g.vertices())
    if (g.indegree(v) > 1) throw StructureError("lca requires a tree; " + to_string(v) + " is a hybrid");
  for (auto v : vs)
    if (!g.contains(v)) throw IdentifierError("unknown vertex " + to_string(v));
  // In a tree the common ancestors form a chain; the last one in topological order is lowest.
  std::optional<VertexId> best;
  for (auto c : g.topological_order()) {
    bool all = std::all_of(vs.begin(), vs.end(), [&](VertexId v) { return g.reaches(c, v); });
    if (all) best = c;
  }
  if (!best) throw StructureError("vertices have no common ancestor");
  return *best;
}

VertexId lca_elements(const Digraph& g, std::span<const Element> es) {
  std::vector<VertexId> vs;
  vs.reserve(es.size());
  for (const auto& e : es) vs.push_back(is_vertex(e) ? as_vertex(e) : as_arc(e).tail);
  return lca(g, vs);
}

bool separates(const Digraph& g, VertexId z, const Element& x, const Element& y) {
  VertexId xv = head_of(x), yv = head_of(y);
  auto ch = g.children(z);
  if (ch.size() < 2) return false;
  for (std::size_t i = 0; i < ch.size(); ++i) {
    if (!g.reaches(ch[i], xv)) continue;
    for (std::size_t j = 0; j < ch.size(); ++j)
      if (i != j && g.reaches(ch[j], yv)) return true;
  }
  return false;
}

std::vector<VertexId> separation_set(const Digraph& g, const Element& x, const Element& y) {
  if (!g.contains(x)) throw IdentifierError("unknown element " + to_string(x));
  if (!g.contains(y)) throw IdentifierError("unknown element " + to_string(y));
  std::vector<VertexId> out;
  for (auto z : g.vertices())
    if (separates(g, z, x, y)) out.push_back(z);
  return out;
}

bool in_separation_set_multi(const Digraph& g, VertexId z, std::span<const Element> xs) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i; j < xs.size(); ++j)
      if (separates(g, z, xs[i], xs[j])) return true;
  return false;
}

std::vector<VertexId> separation_set_multi(const Digraph& g, std::span<const Element> xs) {
  if (xs.empty()) throw ArgumentError("separation set of an empty sequence");
  for (const auto& x : xs)
    if (!g.contains(x)) throw IdentifierError("unknown element " + to_string(x));
  std::vector<VertexId> out;
  for (auto z : g.vertices())
    if (in_separation_set_multi(g, z, xs)) out.push_back(z);
  return out;
}

// ---------------------------------------------------------------- subdivision

Subdivision subdivide(const Digraph& g, const std::map<ArcId, std::uint32_t>& plan) {
  for (const auto& [a, k] : plan) {
    if (!g.contains(a)) throw IdentifierError("unknown arc " + to_string(a));
    if (k == 0) throw ArgumentError("subdivision count must be positive for " + to_string(a));
  }
  DigraphBuilder b;
  for (std::size_t i = 0; i < g.id_bound(); ++i) b.add_vertex();
  for (std::uint32_t i = 0; i < g.id_bound(); ++i)
    if (!g.contains(VertexId{i})) b.remove_vertex(VertexId{i});
  if (g.root()) b.set_root(*g.root());

  Subdivision out;
  for (auto v : g.vertices()) out.vertex_map[v] = v;
  for (const auto& a : g.arcs()) {
    auto it = plan.find(a);
    std::uint32_t k = it == plan.end() ? 1 : it->second;
    Path p;
    p.vertices.push_back(a.tail);
    VertexId cur = a.tail;
    for (std::uint32_t s = 1; s < k; ++s) {
      auto w = b.add_vertex();
      out.fresh_vertices.push_back(w);
      p.arcs.push_back(b.add_arc(cur, w));
      p.vertices.push_back(w);
      cur = w;
    }
    p.arcs.push_back(b.add_arc(cur, a.head));
    p.vertices.push_back(a.head);
    out.arc_paths[a] = std::move(p);
  }
  out.graph = b.build();
  return out;
}

std::string to_string(VertexId v) { return "v" + std::to_string(v.value); }

std::string to_string(const ArcId& a) {
  return to_string(a.tail) + ">" + to_string(a.head) + "#" + std::to_string(a.index);
}

std::string to_string(const Element& e) {
  return is_vertex(e) ? to_string(as_vertex(e)) : to_string(as_arc(e));
}

}  // namespace reconet
