#include "reconet/phylo.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "reconet/errors.hpp"

namespace reconet {

std::string unique_name(const std::string& base, const std::map<std::string, VertexId>& taken) {
  std::string s = base;
  while (taken.count(s)) s += '\'';
  return s;
}

// ---------------------------------------------------------------- Labeled

Labeled::Labeled(Digraph g, Names names) : g_(std::move(g)), names_(std::move(names)) {
  names_.resize(g_.id_bound());
  for (auto v : g_.vertices()) by_name_[names_[v.value]] = v;
}

const std::string& Labeled::name(VertexId v) const {
  if (!g_.contains(v)) throw IdentifierError("unknown vertex " + to_string(v));
  return names_[v.value];
}

std::optional<VertexId> Labeled::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

VertexId Labeled::at(const std::string& name) const {
  auto v = find(name);
  if (!v) throw IdentifierError("unknown vertex name '" + name + "'");
  return *v;
}

namespace {

// Every live vertex needs a non-empty name, and names must be unique.
void check_names(const Digraph& g, const Names& names, Report& r) {
  std::map<std::string, VertexId> seen;
  for (auto v : g.vertices()) {
    if (v.value >= names.size() || names[v.value].empty()) {
      r.add("names", {to_string(v)}, "vertex has no name");
      continue;
    }
    auto [it, fresh] = seen.emplace(names[v.value], v);
    if (!fresh) r.add("names", {names[v.value]}, "name is used by two vertices");
  }
}

std::string label(const Digraph& g, const Names& names, VertexId v) {
  (void)g;
  if (v.value < names.size() && !names[v.value].empty()) return names[v.value];
  return to_string(v);
}

}  // namespace

// ---------------------------------------------------------------- Network

Report Network::check(const Digraph& g, const Names& names) {
  Report r;
  check_names(g, names, r);
  std::vector<VertexId> sources;
  for (auto v : g.vertices())
    if (g.indegree(v) == 0) sources.push_back(v);
  if (sources.size() != 1 || !g.root()) {
    std::vector<std::string> w;
    for (auto s : sources) w.push_back(label(g, names, s));
    r.add("N1", w, "expected a single root with indegree 0");
    return r;
  }
  auto rho = *g.root();
  if (g.outdegree(rho) != 1) {
    r.add("N1", {label(g, names, rho)}, "root must have outdegree 1");
  } else {
    auto c = g.children(rho).front();
    if (g.indegree(c) != 1 || g.outdegree(c) < 2)
      r.add("N1", {label(g, names, c)}, "child of the root must be a tree vertex");
  }
  std::set<std::string> species;
  for (auto v : g.vertices()) {
    if (v == rho) continue;
    auto in = g.indegree(v), out = g.outdegree(v);
    if (out == 0) {
      if (in != 1) r.add("N2", {label(g, names, v)}, "leaf must have indegree 1");
      if (v.value < names.size()) species.insert(names[v.value]);
      continue;
    }
    bool tree_vertex = in == 1 && out > 1;
    bool hybrid = in > 1 && out == 1;
    if (!tree_vertex && !hybrid)
      r.add("N3", {label(g, names, v)},
            "inner vertex is neither a tree vertex nor a hybrid (in " + std::to_string(in) +
                ", out " + std::to_string(out) + ")");
  }
  if (species.size() < 2) r.add("S", {}, "a network needs at least two species");
  return r;
}

Network Network::validate(Digraph g, Names names) {
  auto r = check(g, names);
  if (!r.ok()) throw ValidationError(std::move(r));
  return Network(std::move(g), std::move(names));
}

std::vector<std::string> Network::species() const {
  std::vector<std::string> out;
  for (auto l : g_.sinks()) out.push_back(names_[l.value]);
  std::sort(out.begin(), out.end());
  return out;
}

VertexId Network::leaf(const std::string& species) const {
  auto v = find(species);
  if (!v || !is_leaf(*v)) throw IdentifierError("unknown species '" + species + "'");
  return *v;
}

bool Network::is_tree() const {
  for (auto v : g_.vertices())
    if (g_.indegree(v) > 1) return false;
  return true;
}

// ---------------------------------------------------------------- GeneTree

const char* to_string(Event e) { return e == Event::speciation ? "S" : "D"; }

Report GeneTree::check(const Digraph& g, const Names& names,
                       const std::vector<std::optional<Event>>& events,
                       const std::vector<std::string>& sigma) {
  Report r;
  check_names(g, names, r);
  if (!g.root()) {
    r.add("tree", {}, "expected a single root");
    return r;
  }
  auto root = *g.root();
  for (auto v : g.vertices()) {
    if (v != root && g.indegree(v) != 1)
      r.add("tree", {label(g, names, v)}, "non-root vertex must have indegree 1");
    auto out = g.outdegree(v);
    if (out == 1)
      r.add("reduced", {label(g, names, v)}, "inner vertex must have outdegree at least 2");
    bool has_event = v.value < events.size() && events[v.value].has_value();
    bool has_sigma = v.value < sigma.size() && !sigma[v.value].empty();
    if (out == 0) {
      if (!has_sigma) r.add("sigma", {label(g, names, v)}, "gene leaf has no species");
      if (has_event) r.add("event", {label(g, names, v)}, "leaf carries an event label");
    } else {
      if (!has_event) r.add("event", {label(g, names, v)}, "inner vertex has no event label");
      if (has_sigma) r.add("sigma", {label(g, names, v)}, "inner vertex carries a species");
    }
  }
  if (g.outdegree(root) == 0)
    r.add("reduced", {label(g, names, root)}, "root must have outdegree at least 2");
  std::set<std::string> species;
  for (auto l : g.sinks())
    if (l.value < sigma.size() && !sigma[l.value].empty()) species.insert(sigma[l.value]);
  if (species.size() < 2) r.add("species", {}, "genes must come from at least two species");
  return r;
}

GeneTree GeneTree::validate(Digraph g, Names names, std::vector<std::optional<Event>> events,
                            std::vector<std::string> sigma) {
  auto r = check(g, names, events, sigma);
  if (!r.ok()) throw ValidationError(std::move(r));
  GeneTree t(std::move(g), std::move(names));
  const auto n = t.g_.id_bound();
  events.resize(n);
  sigma.resize(n);
  t.events_ = std::move(events);
  t.sigma_ = std::move(sigma);

  std::vector<VertexId> stack{t.root()};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    t.preorder_.push_back(v);
    auto ch = t.g_.children(v);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  t.sigma_sets_.assign(n, {});
  for (auto it = t.preorder_.rbegin(); it != t.preorder_.rend(); ++it) {
    auto& s = t.sigma_sets_[it->value];
    if (t.is_leaf(*it)) {
      s.push_back(t.sigma_[it->value]);
      continue;
    }
    for (auto c : t.g_.children(*it)) {
      const auto& cs = t.sigma_sets_[c.value];
      s.insert(s.end(), cs.begin(), cs.end());
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return t;
}

std::optional<VertexId> GeneTree::parent(VertexId v) const {
  auto p = g_.parents(v);
  if (p.empty()) return std::nullopt;
  return p.front();
}

std::vector<VertexId> GeneTree::inner() const {
  std::vector<VertexId> out;
  for (auto v : preorder_)
    if (!is_leaf(v)) out.push_back(v);
  return out;
}

bool same_gene_tree(const GeneTree& a, const GeneTree& b) {
  std::function<bool(VertexId, VertexId)> eq = [&](VertexId x, VertexId y) {
    if (a.name(x) != b.name(y) || a.event(x) != b.event(y)) return false;
    if (a.is_leaf(x) != b.is_leaf(y)) return false;
    if (a.is_leaf(x)) return a.sigma(x) == b.sigma(y);
    auto cx = a.children(x), cy = b.children(y);
    if (cx.size() != cy.size()) return false;
    for (std::size_t i = 0; i < cx.size(); ++i)
      if (!eq(cx[i], cy[i])) return false;
    return true;
  };
  return a.graph().vertex_count() == b.graph().vertex_count() && eq(a.root(), b.root());
}

bool is_well_behaved(const GeneTree& t) {
  for (auto v : t.inner()) {
    if (!t.is_speciation(v)) continue;
    auto ch = t.children(v);
    bool all_same = std::all_of(ch.begin(), ch.end(), [&](VertexId c) {
      return t.sigma_set(c) == t.sigma_set(ch.front());
    });
    if (all_same) return false;
  }
  return true;
}

// ---------------------------------------------------------------- MULTree

Report MULTree::check(const Digraph& g, const Names& names,
                      const std::vector<std::string>& leaf_species, bool pseudo) {
  Report r;
  check_names(g, names, r);
  if (!g.root()) {
    r.add("tree", {}, "expected a single root");
    return r;
  }
  auto rho = *g.root();
  if (g.outdegree(rho) != 1) r.add("root", {label(g, names, rho)}, "root must have outdegree 1");
  std::set<std::string> species;
  for (auto v : g.vertices()) {
    if (v == rho) continue;
    if (g.indegree(v) != 1)
      r.add("tree", {label(g, names, v)}, "non-root vertex must have indegree 1");
    auto out = g.outdegree(v);
    bool has_species = v.value < leaf_species.size() && !leaf_species[v.value].empty();
    if (out == 0) {
      if (!has_species) r.add("chi", {label(g, names, v)}, "leaf has no species");
      else species.insert(leaf_species[v.value]);
    } else {
      if (has_species) r.add("chi", {label(g, names, v)}, "inner vertex carries a species");
      if (out == 1 && !pseudo)
        r.add("D1", {label(g, names, v)}, "indegree-1 outdegree-1 vertex in a MUL-tree");
    }
  }
  if (species.size() < 2) r.add("S", {}, "a MUL-tree needs at least two species");
  return r;
}

MULTree MULTree::validate(Digraph g, Names names, std::vector<std::string> leaf_species,
                          bool pseudo) {
  auto r = check(g, names, leaf_species, pseudo);
  if (!r.ok()) throw ValidationError(std::move(r));
  MULTree m(std::move(g), std::move(names));
  leaf_species.resize(m.g_.id_bound());
  m.leaf_species_ = std::move(leaf_species);
  m.pseudo_ = pseudo;
  for (auto v : m.g_.vertices()) {
    if (m.is_leaf(v)) m.chi_[m.leaf_species_[v.value]].push_back(v);
    else if (v != m.root() && m.g_.outdegree(v) == 1) m.d1_.push_back(v);
  }
  return m;
}

const std::vector<VertexId>& MULTree::chi(const std::string& species) const {
  auto it = chi_.find(species);
  if (it == chi_.end()) throw IdentifierError("unknown species '" + species + "'");
  return it->second;
}

std::vector<std::string> MULTree::species() const {
  std::vector<std::string> out;
  for (const auto& [x, _] : chi_) out.push_back(x);
  return out;
}

bool MULTree::is_d1(VertexId v) const {
  return std::binary_search(d1_.begin(), d1_.end(), v);
}

std::string canonical_form(const MULTree& m) {
  const auto& g = m.graph();
  std::function<std::string(VertexId)> rec = [&](VertexId v) -> std::string {
    if (m.is_leaf(v)) {
      const auto& x = m.species_of(v);
      return "L" + std::to_string(x.size()) + ":" + x;
    }
    std::vector<std::string> parts;
    for (auto c : g.children(v)) parts.push_back(rec(c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (const auto& p : parts) s += p;
    return s + ")";
  };
  return rec(m.root());
}

bool mul_isomorphic(const MULTree& a, const MULTree& b) {
  return a.graph().vertex_count() == b.graph().vertex_count() &&
         canonical_form(a) == canonical_form(b);
}

SimpleSubdivision simple_subdivision(const MULTree& m) {
  if (m.pseudo()) throw ArgumentError("simple subdivision expects a MUL-tree, got a pseudo MUL-tree");
  const auto& g = m.graph();
  std::map<ArcId, std::uint32_t> plan;
  for (const auto& [x, leaves] : m.chi_map()) {
    if (leaves.size() < 2) continue;
    for (auto l : leaves) plan[g.in_arc(l)] = 2;
  }
  auto sub = subdivide(g, plan);
  Names names = m.names();
  auto species = m.leaf_species();
  names.resize(sub.graph.id_bound());
  species.resize(sub.graph.id_bound());
  std::map<std::string, VertexId> taken;
  for (auto v : g.vertices()) taken[m.name(v)] = v;

  SimpleSubdivision out;
  for (const auto& [a, path] : sub.arc_paths) {
    if (path.vertices.size() != 3) continue;
    auto ve = path.vertices[1];
    auto n = unique_name("sub_" + m.name(a.head), taken);
    taken[n] = ve;
    names[ve.value] = n;
    out.origin[ve] = a;
  }
  out.arc_paths = std::move(sub.arc_paths);
  out.tree = MULTree::validate(std::move(sub.graph), std::move(names), std::move(species), true);
  return out;
}

std::string element_label(const Labeled& g, const Element& e) {
  if (is_vertex(e)) return g.name(as_vertex(e));
  const auto& a = as_arc(e);
  return g.name(a.tail) + ">" + g.name(a.head) + "#" + std::to_string(a.index);
}

// ---------------------------------------------------------------- Triple

Triple make_triple(std::string a, std::string b, std::string c) {
  if (a == b || a == c || b == c)
    throw ArgumentError("triple labels must be pairwise distinct: " + a + "," + b + "|" + c);
  if (b < a) std::swap(a, b);
  return Triple{std::move(a), std::move(b), std::move(c)};
}

std::string to_string(const Triple& t) { return t.a + "," + t.b + "|" + t.c; }

}  // namespace reconet
