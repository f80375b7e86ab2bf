#include "reconet/triples.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "reconet/errors.hpp"

namespace reconet {

void TripleSet::insert(const Triple& t) {
  triples.insert(t);
  labels.insert(t.a);
  labels.insert(t.b);
  labels.insert(t.c);
}

TripleSet make_triple_set(const std::vector<Triple>& r) {
  TripleSet s;
  for (const auto& t : r) s.insert(make_triple(t.a, t.b, t.c));
  return s;
}

namespace {

// ab|c for every inner vertex x, a and b below one child of x, c below another.
template <class LabelsBelow>
void collect_triples(const Digraph& g, LabelsBelow below, TripleSet& out) {
  for (auto x : g.vertices()) {
    auto ch = g.children(x);
    if (ch.size() < 2) continue;
    std::vector<std::vector<std::string>> sets;
    for (auto c : ch) sets.push_back(below(c));
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = 0; j < sets.size(); ++j) {
        if (i == j) continue;
        const auto& si = sets[i];
        for (std::size_t p = 0; p < si.size(); ++p)
          for (std::size_t q = p + 1; q < si.size(); ++q)
            for (const auto& c : sets[j]) {
              if (c == si[p] || c == si[q]) continue;
              out.insert(make_triple(si[p], si[q], c));
            }
      }
  }
}

}  // namespace

TripleSet displayed_triples(const Network& tree) {
  if (!tree.is_tree()) throw StructureError("displayed_triples needs a tree; use displays for networks");
  const auto& g = tree.graph();
  TripleSet out;
  for (const auto& x : tree.species()) out.labels.insert(x);
  collect_triples(
      g,
      [&](VertexId c) {
        std::vector<std::string> s;
        for (auto l : leaves_below(g, c)) s.push_back(tree.name(l));
        std::sort(s.begin(), s.end());
        return s;
      },
      out);
  return out;
}

TripleSet displayed_triples(const GeneTree& t) {
  const auto& g = t.graph();
  TripleSet out;
  for (auto l : t.leaves()) out.labels.insert(t.name(l));
  collect_triples(
      g,
      [&](VertexId c) {
        std::vector<std::string> s;
        for (auto l : leaves_below(g, c)) s.push_back(t.name(l));
        std::sort(s.begin(), s.end());
        return s;
      },
      out);
  return out;
}

TripleSet informative_triples(const GeneTree& t) {
  TripleSet out;
  for (const auto& x : t.species()) out.labels.insert(x);
  for (auto x : t.inner()) {
    if (!t.is_speciation(x)) continue;
    auto ch = t.children(x);
    for (std::size_t i = 0; i < ch.size(); ++i)
      for (std::size_t j = 0; j < ch.size(); ++j) {
        if (i == j) continue;
        const auto& si = t.sigma_set(ch[i]);
        for (std::size_t p = 0; p < si.size(); ++p)
          for (std::size_t q = p + 1; q < si.size(); ++q)
            for (const auto& c : t.sigma_set(ch[j])) {
              if (c == si[p] || c == si[q]) continue;
              out.insert(make_triple(si[p], si[q], c));
            }
      }
  }
  return out;
}

// ---------------------------------------------------------------- BUILD

namespace {

class Build {
 public:
  explicit Build(const TripleSet& r) : r_(r) {
    for (const auto& x : r.labels) taken_[x] = VertexId{};
  }

  std::optional<Network> run() {
    auto rho = b_.add_vertex();
    b_.set_root(rho);
    name(rho, "root");
    std::vector<std::string> all(r_.labels.begin(), r_.labels.end());
    auto top = recurse(all);
    if (!top) return std::nullopt;
    b_.add_arc(rho, *top);
    return Network::validate(b_.build(), std::move(names_));
  }

 private:
  void name(VertexId v, const std::string& base) {
    names_.resize(v.value + 1);
    auto n = unique_name(base, taken_);
    taken_[n] = v;
    names_[v.value] = n;
  }

  std::optional<VertexId> recurse(const std::vector<std::string>& labels) {
    if (labels.size() == 1) {
      auto l = b_.add_vertex();
      names_.resize(l.value + 1);
      names_[l.value] = labels.front();
      return l;
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;
    std::vector<std::size_t> comp(labels.size());
    std::iota(comp.begin(), comp.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
      return comp[i] == i ? i : comp[i] = find(comp[i]);
    };
    for (const auto& t : r_.triples) {
      auto a = index.find(t.a), b = index.find(t.b), c = index.find(t.c);
      if (a == index.end() || b == index.end() || c == index.end()) continue;
      comp[find(a->second)] = find(b->second);
    }
    // Components ordered by their smallest label; labels are sorted already.
    std::map<std::size_t, std::vector<std::string>> groups;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto root = find(i);
      if (!groups.count(root)) order.push_back(root);
      groups[root].push_back(labels[i]);
    }
    if (order.size() == 1) return std::nullopt;
    auto v = b_.add_vertex();
    name(v, "i" + std::to_string(++inner_));
    for (auto k : order) {
      auto c = recurse(groups[k]);
      if (!c) return std::nullopt;
      b_.add_arc(v, *c);
    }
    return v;
  }

  const TripleSet& r_;
  DigraphBuilder b_;
  Names names_;
  std::map<std::string, VertexId> taken_;
  std::size_t inner_ = 0;
};

}  // namespace

std::optional<Network> is_compatible(const TripleSet& r) {
  if (r.labels.size() < 2) throw ArgumentError("compatibility needs at least two labels");
  for (const auto& t : r.triples)
    if (!r.labels.count(t.a) || !r.labels.count(t.b) || !r.labels.count(t.c))
      throw ArgumentError("triple " + to_string(t) + " uses a label outside the label set");
  return Build(r).run();
}

// ---------------------------------------------------------------- tree reconciliation

bool has_disjoint_speciations(const GeneTree& t) {
  for (auto x : t.inner()) {
    if (!t.is_speciation(x)) continue;
    std::set<std::string> seen;
    for (auto c : t.children(x))
      for (const auto& s : t.sigma_set(c))
        if (!seen.insert(s).second) return false;
  }
  return true;
}

std::optional<TreeReconciliation> reconcile_to_tree(const GeneTree& t) {
  auto s = informative_triples(t);
  if (s.labels.size() < 2) return std::nullopt;
  auto tree = is_compatible(s);
  if (!tree) return std::nullopt;
  const auto& g = tree->graph();
  ReconMap mu;
  mu.kind = TargetKind::network;
  for (auto x : t.preorder()) {
    if (t.is_leaf(x)) {
      mu.set(x, tree->leaf(t.sigma(x)));
      continue;
    }
    std::vector<VertexId> ls;
    for (const auto& sp : t.sigma_set(x)) ls.push_back(tree->leaf(sp));
    auto l = lca(g, ls);
    if (t.is_speciation(x)) mu.set(x, l);
    else mu.set(x, g.in_arc(l));
  }
  if (!check_relaxed_tree(t, *tree, mu, has_disjoint_speciations(t)).ok()) return std::nullopt;
  return TreeReconciliation{std::move(*tree), std::move(mu)};
}

// ---------------------------------------------------------------- display

namespace {

// Two internally vertex-disjoint paths from one source to two sinks, by unit-capacity
// max flow on the vertex-split graph.
class TwoPaths {
 public:
  explicit TwoPaths(const Digraph& g) : g_(g), n_(g.id_bound()) {}

  bool run(VertexId u, VertexId s1, VertexId s2, const std::vector<char>& blocked) {
    // Nodes: in(x) = 2x, out(x) = 2x+1, sink = 2n.
    const std::size_t sink = 2 * n_;
    edges_.clear();
    adj_.assign(2 * n_ + 1, {});
    for (auto x : g_.vertices()) {
      bool endpoint = x == u || x == s1 || x == s2;
      if (blocked[x.value] && !endpoint) continue;
      if (x != s1 && x != s2) add(2 * x.value, 2 * x.value + 1, x == u ? 2 : 1);
      if (x == s1 || x == s2) {
        add(2 * x.value, sink, 1);
        continue;
      }
      VertexId prev{~0u};
      for (auto y : g_.children(x)) {
        if (y == prev) continue;
        prev = y;
        if (y == u) continue;
        if (blocked[y.value] && y != s1 && y != s2) continue;
        add(2 * x.value + 1, 2 * y.value, 1);
      }
    }
    int flow = 0;
    while (flow < 2 && augment(2 * u.value, sink)) ++flow;
    return flow == 2;
  }

 private:
  struct Edge {
    std::size_t to;
    int cap;
  };

  void add(std::size_t a, std::size_t b, int cap) {
    adj_[a].push_back(edges_.size());
    edges_.push_back({b, cap});
    adj_[b].push_back(edges_.size());
    edges_.push_back({a, 0});
  }

  bool augment(std::size_t s, std::size_t t) {
    std::vector<std::size_t> via(adj_.size(), SIZE_MAX);
    std::vector<char> seen(adj_.size(), 0);
    std::deque<std::size_t> q{s};
    seen[s] = 1;
    while (!q.empty() && !seen[t]) {
      auto x = q.front();
      q.pop_front();
      for (auto e : adj_[x]) {
        if (edges_[e].cap <= 0 || seen[edges_[e].to]) continue;
        seen[edges_[e].to] = 1;
        via[edges_[e].to] = e;
        q.push_back(edges_[e].to);
      }
    }
    if (!seen[t]) return false;
    for (auto x = t; x != s;) {
      auto e = via[x];
      edges_[e].cap -= 1;
      edges_[e ^ 1].cap += 1;
      x = edges_[e ^ 1].to;
    }
    return true;
  }

  const Digraph& g_;
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
};

class Display {
 public:
  Display(const Digraph& g, VertexId a, VertexId b, VertexId c)
      : g_(g), a_(a), b_(b), c_(c), used_(g.id_bound(), 0), flow_(g) {}

  bool run() {
    for (auto v : g_.vertices()) {
      if (g_.outdegree(v) < 2 || !g_.reaches(v, a_) || !g_.reaches(v, b_)) continue;
      used_[v.value] = 1;
      bool ok = path(v, a_, [&] { return path(v, b_, [&] { return close(v); }); });
      used_[v.value] = 0;
      if (ok) return true;
    }
    return false;
  }

 private:
  // Every simple extension of a path at x to target over unused vertices.
  bool path(VertexId x, VertexId target, const std::function<bool()>& next) {
    VertexId prev{~0u};
    for (auto y : g_.children(x)) {
      if (y == prev) continue;
      prev = y;
      if (used_[y.value] || (y != target && !g_.reaches(y, target))) continue;
      used_[y.value] = 1;
      bool ok = y == target ? next() : path(y, target, next);
      used_[y.value] = 0;
      if (ok) return true;
    }
    return false;
  }

  // Some u above v with disjoint paths to v and c avoiding the cherry paths.
  bool close(VertexId v) {
    for (auto u : g_.vertices()) {
      if (used_[u.value] || u == v || !g_.reaches(u, v) || !g_.reaches(u, c_)) continue;
      if (flow_.run(u, v, c_, used_)) return true;
    }
    return false;
  }

  const Digraph& g_;
  VertexId a_, b_, c_;
  std::vector<char> used_;
  TwoPaths flow_;
};

}  // namespace

bool displays(const Network& n, const Triple& r, std::size_t max_vertices) {
  const auto& g = n.graph();
  if (g.vertex_count() > max_vertices)
    throw ResourceError("display check limited to " + std::to_string(max_vertices) + " vertices");
  auto leaf = [&](const std::string& x) {
    auto v = n.find(x);
    if (!v || !n.is_leaf(*v)) throw ArgumentError("'" + x + "' is not a leaf of the network");
    return *v;
  };
  auto a = leaf(r.a), b = leaf(r.b), c = leaf(r.c);
  if (a == b || a == c || b == c) throw ArgumentError("triple labels must be distinct");
  return Display(g, a, b, c).run();
}

}  // namespace reconet
