#include "reconet/axioms.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "reconet/errors.hpp"

namespace reconet {

const Element& ReconMap::at(VertexId v) const {
  if (!has(v)) throw ArgumentError("map has no image for gene vertex " + to_string(v));
  return *image[v.value];
}

void ReconMap::set(VertexId v, Element e) {
  if (image.size() <= v.value) image.resize(v.value + 1);
  image[v.value] = std::move(e);
}

Element FoldingMap::apply(const Element& e) const {
  if (is_vertex(e)) {
    auto v = as_vertex(e);
    if (v.value >= fv.size() || !fv[v.value]) throw ArgumentError("fV undefined at " + to_string(v));
    return *fv[v.value];
  }
  auto it = fe.find(as_arc(e));
  if (it == fe.end()) throw ArgumentError("fE undefined at " + to_string(e));
  return it->second;
}

namespace {

void require_total(const GeneTree& t, const ReconMap& m) {
  for (auto v : t.graph().vertices())
    if (!m.has(v)) throw ArgumentError("map is not total: no image for gene " + t.name(v));
}

// Reports images that do not exist in the target; returns false when any is missing.
bool check_domain(const GeneTree& t, const Labeled& target, const ReconMap& m, Report& r) {
  bool ok = true;
  for (auto v : t.preorder()) {
    if (!target.graph().contains(m.at(v))) {
      r.add("domain", {t.name(v), to_string(m.at(v))}, "image is not part of the target");
      ok = false;
    }
  }
  return ok;
}

std::vector<std::string> witness(const GeneTree& t, const Labeled& target, const ReconMap& m,
                                 std::initializer_list<VertexId> genes) {
  std::vector<std::string> w;
  for (auto v : genes) w.push_back(t.name(v) + "->" + element_label(target, m.at(v)));
  return w;
}

// R3 / M3. Leaves count as non-duplications, so any pair with a leaf is strict.
void check_ancestors(const GeneTree& t, const Labeled& target, const ReconMap& m, Report& r,
                     const std::string& weak_id, const std::string& strict_id) {
  const auto& g = target.graph();
  for (auto x : t.preorder()) {
    for (auto y = t.parent(x); y; y = t.parent(*y)) {
      bool both_dup = t.is_duplication(x) && t.is_duplication(*y);
      const auto &ex = m.at(x), &ey = m.at(*y);
      if (both_dup) {
        if (!is_ancestor(g, ex, ey))
          r.add(weak_id, witness(t, target, m, {x, *y}), "image of a descendant is not below");
      } else if (!is_strict_ancestor(g, ex, ey)) {
        r.add(strict_id, witness(t, target, m, {x, *y}), "image of a descendant is not strictly below");
      }
    }
  }
}

void check_leaves_and_duplications(const GeneTree& t, const Network& n, const ReconMap& m,
                                   Report& r) {
  for (auto x : t.preorder()) {
    const auto& e = m.at(x);
    if (t.is_leaf(x)) {
      auto l = n.find(t.sigma(x));
      if (!l || !n.is_leaf(*l) || !is_vertex(e) || as_vertex(e) != *l)
        r.add("R1", witness(t, n, m, {x}), "leaf must map to its species " + t.sigma(x));
    } else if (t.is_duplication(x) && !is_arc(e)) {
      r.add("R2.ii", witness(t, n, m, {x}), "duplication must map to an arc");
    }
  }
}

std::vector<Element> child_images(const GeneTree& t, const ReconMap& m, VertexId x) {
  std::vector<Element> out;
  for (auto c : t.children(x)) out.push_back(m.at(c));
  return out;
}

}  // namespace

Report check_treenet(const GeneTree& t, const Network& n, const ReconMap& mu) {
  require_total(t, mu);
  Report r;
  if (!check_domain(t, n, mu, r)) return r;
  check_leaves_and_duplications(t, n, mu, r);
  for (auto x : t.inner()) {
    if (!t.is_speciation(x)) continue;
    const auto& e = mu.at(x);
    auto imgs = child_images(t, mu, x);
    if (!is_vertex(e) || !in_separation_set_multi(n.graph(), as_vertex(e), imgs))
      r.add("R2.i", witness(t, n, mu, {x}), "speciation image does not separate its children's images");
  }
  check_ancestors(t, n, mu, r, "R3.i", "R3.ii");
  return r;
}

Report check_relaxed_tree(const GeneTree& t, const Network& s, const ReconMap& mu, bool strict) {
  if (!s.is_tree()) throw StructureError("relaxed tree reconciliation needs a species tree");
  require_total(t, mu);
  Report r;
  if (!check_domain(t, s, mu, r)) return r;
  check_leaves_and_duplications(t, s, mu, r);
  const auto& g = s.graph();
  for (auto x : t.inner()) {
    if (!t.is_speciation(x)) continue;
    std::vector<VertexId> leaves;
    bool known = true;
    for (const auto& sp : t.sigma_set(x)) {
      auto l = s.find(sp);
      if (!l) known = false;
      else leaves.push_back(*l);
    }
    const auto& e = mu.at(x);
    if (!known || !is_vertex(e) || as_vertex(e) != lca(g, leaves))
      r.add("R2.i*", witness(t, s, mu, {x}), "speciation image is not the lca of its species");
    if (strict) {
      auto ch = t.children(x);
      for (std::size_t i = 0; i < ch.size(); ++i)
        for (std::size_t j = i + 1; j < ch.size(); ++j)
          if (comparable(g, mu.at(ch[i]), mu.at(ch[j])))
            r.add("R2.iii", witness(t, s, mu, {ch[i], ch[j]}),
                  "children of a speciation have comparable images");
    }
  }
  check_ancestors(t, s, mu, r, "R3.i", "R3.ii");
  return r;
}

Report check_mul(const GeneTree& t, const MULTree& m, const ReconMap& kappa) {
  require_total(t, kappa);
  Report r;
  if (!check_domain(t, m, kappa, r)) return r;
  const auto& g = m.graph();
  for (auto x : t.preorder()) {
    const auto& e = kappa.at(x);
    if (is_vertex(e) && m.is_d1(as_vertex(e)))
      r.add("domain", witness(t, m, kappa, {x}), "image is a vertex of D1");
    if (t.is_leaf(x)) {
      bool ok = is_vertex(e) && m.is_leaf(as_vertex(e)) && m.species_of(as_vertex(e)) == t.sigma(x);
      if (!ok) r.add("M1", witness(t, m, kappa, {x}), "leaf must map into chi(" + t.sigma(x) + ")");
    } else if (t.is_duplication(x)) {
      if (!is_arc(e)) r.add("M2.ii", witness(t, m, kappa, {x}), "duplication must map to an arc");
    } else {
      // In a tree the path to each child image is unique, so distinct first arcs is all
      // that M2.i asks for; that is exactly separation by the image.
      auto imgs = child_images(t, kappa, x);
      bool ok = is_vertex(e) && !m.is_leaf(as_vertex(e)) &&
                in_separation_set_multi(g, as_vertex(e), imgs);
      if (!ok)
        r.add("M2.i", witness(t, m, kappa, {x}),
              "no two children reached through distinct first arcs");
    }
  }
  check_ancestors(t, m, kappa, r, "M3.i", "M3.ii");
  return r;
}

Report check_folding(const MULTree& m, const Network& n, const FoldingMap& f) {
  Report r;
  const auto& gm = m.graph();
  const auto& gn = n.graph();
  bool total = true;
  for (auto v : gm.vertices()) {
    if (v.value >= f.fv.size() || !f.fv[v.value] || !gn.contains(*f.fv[v.value])) {
      r.add("domain", {m.name(v)}, "fV undefined or outside the network");
      total = false;
    }
  }
  for (const auto& a : gm.arcs()) {
    auto it = f.fe.find(a);
    if (it == f.fe.end() || !gn.contains(it->second)) {
      r.add("domain", {element_label(m, a)}, "fE undefined or outside the network");
      total = false;
    }
  }
  if (!total) return r;

  std::set<VertexId> hit_v;
  std::set<ArcId> hit_e;
  for (auto v : gm.vertices()) hit_v.insert(*f.fv[v.value]);
  for (const auto& a : gm.arcs()) hit_e.insert(f.fe.at(a));
  for (auto w : gn.vertices())
    if (!hit_v.count(w)) r.add("surjective-V", {n.name(w)}, "network vertex has no preimage");
  for (const auto& a : gn.arcs())
    if (!hit_e.count(a)) r.add("surjective-E", {element_label(n, a)}, "network arc has no preimage");

  for (const auto& a : gm.arcs()) {
    const auto& b = f.fe.at(a);
    if (b.tail != *f.fv[a.tail.value] || b.head != *f.fv[a.head.value])
      r.add("F1", {element_label(m, a), element_label(n, b)}, "arc endpoints are not preserved");
  }
  for (auto v : gm.vertices()) {
    if (!m.is_leaf(v)) continue;
    auto l = n.find(m.species_of(v));
    if (!l || *f.fv[v.value] != *l)
      r.add("F2", {m.name(v)}, "leaf must map to its species " + m.species_of(v));
  }
  for (auto v : gm.vertices()) {
    auto w = *f.fv[v.value];
    auto out = gm.out_arcs(v);
    for (const auto& a : gn.out_arcs(w)) {
      auto k = std::count_if(out.begin(), out.end(), [&](const ArcId& u) { return f.fe.at(u) == a; });
      if (k != 1)
        r.add("F3", {m.name(v), element_label(n, a)},
              std::to_string(k) + " liftings of the arc at this vertex, expected 1");
    }
  }
  return r;
}

// ---------------------------------------------------------------- biTreeNet maps

bool is_binary(const GeneTree& t) {
  for (auto v : t.inner())
    if (t.children(v).size() != 2) return false;
  return true;
}

bool is_binary(const Network& n) {
  const auto& g = n.graph();
  for (auto v : g.vertices()) {
    if (v == n.root() || n.is_leaf(v)) continue;
    if (n.is_hybrid(v) ? g.indegree(v) != 2 : g.outdegree(v) != 2) return false;
  }
  return true;
}

Report check_bitreenet(const GeneTree& t, const Network& n, const BiTreeNetMap& alpha) {
  Report r;
  const auto& g = n.graph();
  auto a1 = [&](VertexId v) -> std::optional<VertexId> {
    if (v.value >= alpha.alpha1.size()) return std::nullopt;
    return alpha.alpha1[v.value];
  };
  auto a2 = [&](VertexId v) -> std::optional<AlphaLabel> {
    if (v.value >= alpha.alpha2.size()) return std::nullopt;
    return alpha.alpha2[v.value];
  };
  for (auto v : t.preorder()) {
    if (!a1(v) || !a2(v) || !g.contains(*a1(v))) {
      r.add("domain", {t.name(v)}, "alpha undefined or outside the network");
      return r;
    }
  }
  for (auto u : t.preorder()) {
    auto lab = *a2(u);
    if (t.is_leaf(u)) {
      auto l = n.find(t.sigma(u));
      if (lab != AlphaLabel::c || !l || *a1(u) != *l)
        r.add("A1", {t.name(u)}, "leaf needs label c and its species");
    } else {
      if (lab == AlphaLabel::c) r.add("A1", {t.name(u)}, "inner vertex labeled c");
      auto ev = lab == AlphaLabel::s ? Event::speciation : Event::duplication;
      if (lab != AlphaLabel::c && t.event(u) != ev)
        r.add("events", {t.name(u)}, "alpha2 disagrees with the event label");
      if (lab == AlphaLabel::s) {
        auto ch = t.children(u);
        if (ch.size() != 2 || !separates(g, *a1(u), *a1(ch[0]), *a1(ch[1])))
          r.add("A2", {t.name(u)}, "speciation image does not separate its children's images");
      }
    }
  }
  for (auto v : t.preorder()) {
    for (auto u = t.parent(v); u; u = t.parent(*u)) {
      bool weak = *a2(*u) == AlphaLabel::d;
      bool ok = weak ? is_ancestor(g, *a1(v), *a1(*u)) : is_strict_ancestor(g, *a1(v), *a1(*u));
      if (!ok) r.add("A3", {t.name(v), t.name(*u)}, "ancestor order not preserved");
    }
  }
  return r;
}

ReconMap alpha_to_mu(const GeneTree& t, const Network& n, const BiTreeNetMap& alpha) {
  if (!is_binary(t) || !is_binary(n)) throw ArgumentError("alpha_to_mu needs a binary tree and network");
  auto r = check_bitreenet(t, n, alpha);
  if (!r.ok()) throw ValidationError(std::move(r));
  const auto& g = n.graph();
  ReconMap mu;
  for (auto u : t.preorder()) {
    auto w = *alpha.alpha1[u.value];
    if (*alpha.alpha2[u.value] != AlphaLabel::d) {
      mu.set(u, w);
    } else if (w == n.root()) {
      mu.set(u, g.out_arcs(w).front());
    } else if (n.is_hybrid(w)) {
      mu.set(u, g.out_arcs(w).front());
    } else {
      mu.set(u, g.in_arc(w));
    }
  }
  return mu;
}

// ---------------------------------------------------------------- existence search

namespace {

// Exact dynamic program over the gene tree. The constraints of a reconciliation only
// relate a vertex to its parent (the order is transitive) and to its children (the
// separation condition), and the separation condition for a pair of children only
// depends on each child's image separately. So the set of feasible images of a vertex
// is determined by the feasible sets of its children.
class Search {
 public:
  Search(const GeneTree& t, const Digraph& g, std::vector<Element> speciation_candidates,
         std::function<std::vector<Element>(VertexId)> leaf_candidates)
      : t_(t), g_(g), spec_(std::move(speciation_candidates)), leaf_(std::move(leaf_candidates)) {
    for (const auto& a : g_.arcs()) arcs_.push_back(a);
    sort_by_height(spec_);
    sort_by_height(arcs_);
  }

  std::optional<ReconMap> run() {
    feasible_.assign(t_.graph().id_bound(), {});
    const auto& pre = t_.preorder();
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
      auto x = *it;
      if (t_.is_leaf(x)) {
        feasible_[x.value] = leaf_(x);
        continue;
      }
      const auto& cands = t_.is_duplication(x) ? arcs_ : spec_;
      for (const auto& e : cands)
        if (fits(x, e)) feasible_[x.value].push_back(e);
      if (feasible_[x.value].empty()) return std::nullopt;
    }
    ReconMap m;
    m.image.resize(t_.graph().id_bound());
    m.set(t_.root(), feasible_[t_.root().value].front());
    for (auto x : pre)
      if (!t_.is_leaf(x)) assign_children(x, m);
    return m;
  }

 private:
  void sort_by_height(std::vector<Element>& v) {
    std::vector<std::size_t> h(g_.id_bound(), 0);
    const auto& topo = g_.topological_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it)
      for (auto c : g_.children(*it)) h[it->value] = std::max(h[it->value], h[c.value] + 1);
    auto key = [&](const Element& e) { return is_vertex(e) ? 2 * h[as_vertex(e).value] : 2 * h[as_arc(e).head.value] + 1; };
    std::stable_sort(v.begin(), v.end(), [&](const Element& a, const Element& b) {
      auto ka = key(a), kb = key(b);
      return ka != kb ? ka < kb : a < b;
    });
  }

  // Order constraint between a child image c of x and the image e of x.
  bool below(VertexId child, const Element& c, VertexId x, const Element& e) const {
    if (t_.is_duplication(child) && t_.is_duplication(x)) return is_ancestor(g_, c, e);
    return is_strict_ancestor(g_, c, e);
  }

  // Out-arc positions of z whose head reaches the (head of the) element.
  std::vector<std::size_t> arcs_toward(VertexId z, const Element& c) const {
    std::vector<std::size_t> out;
    auto ch = g_.children(z);
    for (std::size_t k = 0; k < ch.size(); ++k)
      if (g_.reaches(ch[k], head_of(c))) out.push_back(k);
    return out;
  }

  static bool distinct_pair(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    for (auto i : a)
      for (auto j : b)
        if (i != j) return true;
    return false;
  }

  bool fits(VertexId x, const Element& e) const {
    auto ch = t_.children(x);
    for (auto c : ch) {
      const auto& f = feasible_[c.value];
      if (std::none_of(f.begin(), f.end(), [&](const Element& ce) { return below(c, ce, x, e); }))
        return false;
    }
    if (t_.is_duplication(x)) return true;
    return find_pair(x, as_vertex(e)).has_value();
  }

  struct Pair {
    std::size_t i, j;
    Element ci, cj;
  };

  // First (i <= j, witnesses) in order for which z separates the two child images.
  std::optional<Pair> find_pair(VertexId x, VertexId z) const {
    auto ch = t_.children(x);
    for (std::size_t i = 0; i < ch.size(); ++i) {
      for (const auto& ci : feasible_[ch[i].value]) {
        if (!below(ch[i], ci, x, z)) continue;
        auto ai = arcs_toward(z, ci);
        if (ai.empty()) continue;
        if (ai.size() >= 2) return Pair{i, i, ci, ci};
        for (std::size_t j = i + 1; j < ch.size(); ++j)
          for (const auto& cj : feasible_[ch[j].value])
            if (below(ch[j], cj, x, z) && distinct_pair(ai, arcs_toward(z, cj)))
              return Pair{i, j, ci, cj};
      }
    }
    return std::nullopt;
  }

  void assign_children(VertexId x, ReconMap& m) const {
    const auto& e = m.at(x);
    auto ch = t_.children(x);
    std::optional<Pair> p;
    if (t_.is_speciation(x)) p = find_pair(x, as_vertex(e));
    for (std::size_t k = 0; k < ch.size(); ++k) {
      if (p && k == p->i) {
        m.set(ch[k], p->ci);
      } else if (p && k == p->j) {
        m.set(ch[k], p->cj);
      } else {
        for (const auto& ce : feasible_[ch[k].value]) {
          if (below(ch[k], ce, x, e)) {
            m.set(ch[k], ce);
            break;
          }
        }
      }
    }
  }

  const GeneTree& t_;
  const Digraph& g_;
  std::vector<Element> spec_;
  std::vector<Element> arcs_;
  std::function<std::vector<Element>(VertexId)> leaf_;
  std::vector<std::vector<Element>> feasible_;
};

void check_limits(const GeneTree& t, std::size_t target_size, const SearchLimits& limits,
                  bool check_target) {
  auto internal = t.inner().size();
  if (internal > limits.max_internal)
    throw ResourceError("gene tree has " + std::to_string(internal) +
                        " inner vertices, limit is " + std::to_string(limits.max_internal));
  if (check_target && target_size > limits.max_target)
    throw ResourceError("target has " + std::to_string(target_size) +
                        " vertices and arcs, limit is " + std::to_string(limits.max_target));
}

}  // namespace

std::optional<ReconMap> exists_treenet_map(const GeneTree& t, const Network& n,
                                           const SearchLimits& limits) {
  const auto& g = n.graph();
  check_limits(t, g.vertex_count() + g.arc_count(), limits, true);
  std::vector<Element> spec;
  for (auto v : g.vertices())
    if (g.outdegree(v) >= 2) spec.push_back(v);
  Search s(t, g, std::move(spec), [&](VertexId leaf) {
    std::vector<Element> out;
    auto l = n.find(t.sigma(leaf));
    if (l && n.is_leaf(*l)) out.push_back(*l);
    return out;
  });
  auto mu = s.run();
  if (mu && !check_treenet(t, n, *mu).ok())
    throw std::logic_error("existence search produced an invalid map: " + check_treenet(t, n, *mu).to_string());
  return mu;
}

std::optional<ReconMap> exists_mul_map(const GeneTree& t, const MULTree& m,
                                       const SearchLimits& limits) {
  check_limits(t, 0, limits, false);
  const auto& g = m.graph();
  std::vector<Element> spec;
  for (auto v : g.vertices())
    if (g.outdegree(v) >= 2) spec.push_back(v);
  Search s(t, g, std::move(spec), [&](VertexId leaf) {
    std::vector<Element> out;
    auto it = m.chi_map().find(t.sigma(leaf));
    if (it != m.chi_map().end())
      for (auto l : it->second) out.push_back(l);
    return out;
  });
  auto kappa = s.run();
  if (kappa) {
    kappa->kind = TargetKind::multree;
    if (!check_mul(t, m, *kappa).ok())
      throw std::logic_error("existence search produced an invalid map: " + check_mul(t, m, *kappa).to_string());
  }
  return kappa;
}

}  // namespace reconet
