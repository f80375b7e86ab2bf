#include "reconet/unfold.hpp"

#include <algorithm>
#include <deque>

#include "reconet/errors.hpp"

namespace reconet {

Path UnfoldStar::path(VertexId p) const {
  Path out;
  for (std::optional<VertexId> cur = p; cur; cur = parent[cur->value]) {
    out.vertices.push_back(last[cur->value]);
    if (last_arc[cur->value]) out.arcs.push_back(*last_arc[cur->value]);
  }
  std::reverse(out.vertices.begin(), out.vertices.end());
  std::reverse(out.arcs.begin(), out.arcs.end());
  return out;
}

UnfoldStar unfold_star(const Network& n, std::size_t limit) {
  const auto& g = n.graph();
  UnfoldStar u;
  DigraphBuilder b;
  Names names;
  std::vector<std::string> species;
  std::map<std::string, VertexId> taken;
  std::map<VertexId, std::size_t> seen;

  auto make = [&](VertexId w, std::optional<ArcId> arc, std::optional<VertexId> par) {
    if (u.last.size() >= limit)
      throw ResourceError("unfolding has more than " + std::to_string(limit) + " paths");
    auto p = b.add_vertex();
    auto k = ++seen[w];
    auto nm = unique_name(k == 1 ? n.name(w) : n.name(w) + "." + std::to_string(k), taken);
    taken[nm] = p;
    names.push_back(nm);
    species.push_back(n.is_leaf(w) ? n.name(w) : std::string());
    u.last.push_back(w);
    u.last_arc.push_back(arc);
    u.parent.push_back(par);
    if (par) {
      b.add_arc(*par, p);
      u.step[{*par, *arc}] = p;
    }
    return p;
  };

  std::deque<VertexId> queue{make(n.root(), std::nullopt, std::nullopt)};
  while (!queue.empty()) {
    auto p = queue.front();
    queue.pop_front();
    for (const auto& a : g.out_arcs(u.last[p.value])) queue.push_back(make(a.head, a, p));
  }
  u.tree = MULTree::validate(b.build(), std::move(names), std::move(species), true);
  return u;
}

MULTree suppress_d1(const MULTree& m) {
  DigraphBuilder b(m.graph());
  Names names = m.names();
  for (auto v : m.d1()) {
    auto p = b.parents(v).front();
    auto c = b.children(v).front();
    b.remove_vertex(v);
    b.add_arc(p, c);
    names[v.value].clear();
  }
  return MULTree::validate(b.build(), std::move(names), m.leaf_species(), false);
}

MULTree unfold(const Network& n, std::size_t limit) { return suppress_d1(unfold_star(n, limit).tree); }

UniversalFolding universal_folding(const Network& n, std::size_t limit) {
  if (!n.is_multi_arc_free()) throw PreconditionError("universal folding needs a multi-arc free network");
  UniversalFolding out;
  out.unfolding = unfold_star(n, limit);
  const auto& u = out.unfolding;
  out.folding.fv.assign(u.last.size(), std::nullopt);
  for (std::size_t i = 0; i < u.last.size(); ++i) out.folding.fv[i] = u.last[i];
  for (const auto& a : u.tree.graph().arcs()) out.folding.fe[a] = *u.last_arc[a.head.value];
  return out;
}

// ---------------------------------------------------------------- lifting

namespace {

class Lifter {
 public:
  Lifter(const GeneTree& t, const Network& n, const ReconMap& mu, const UnfoldStar& u)
      : t_(t), g_(n.graph()), mu_(mu), u_(u) {}

  ReconMap run() {
    kappa_.kind = TargetKind::multree;
    path_.assign(t_.graph().id_bound(), std::nullopt);
    auto root_path = VertexId{0};
    assign(t_.root(), extend(root_path, mu_.at(t_.root())));
    for (auto v : t_.preorder()) {
      if (t_.is_leaf(v)) continue;
      if (t_.is_speciation(v)) lift_speciation_children(v);
      else lift_duplication_children(v);
    }
    return kappa_;
  }

 private:
  std::vector<ArcId> sorted_out(VertexId w) const {
    auto out = g_.out_arcs(w);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Can a path from tail(a) that starts with a realize the element?
  bool can_start(const ArcId& a, const Element& target) const {
    if (is_vertex(target)) return g_.reaches(a.head, as_vertex(target));
    const auto& e = as_arc(target);
    return a == e || g_.reaches(a.head, e.tail);
  }

  // Lexicographically smallest extension of path p that ends in the vertex, or ends
  // with the arc.
  VertexId extend(VertexId p, const Element& target) const {
    VertexId goal = is_vertex(target) ? as_vertex(target) : as_arc(target).tail;
    while (u_.last[p.value] != goal) {
      bool moved = false;
      for (const auto& a : sorted_out(u_.last[p.value])) {
        if (g_.reaches(a.head, goal)) {
          p = u_.step.at({p, a});
          moved = true;
          break;
        }
      }
      if (!moved) throw PreconditionError("image is not below its parent's image");
    }
    if (is_arc(target)) p = u_.step.at({p, as_arc(target)});
    return p;
  }

  void assign(VertexId v, VertexId p) {
    path_[v.value] = p;
    if (is_vertex(mu_.at(v))) kappa_.set(v, p);
    else kappa_.set(v, ArcId{*u_.parent[p.value], p, 0});
  }

  void lift_duplication_children(VertexId v) {
    auto p = *path_[v.value];
    for (auto c : t_.children(v)) {
      if (mu_.at(c) == mu_.at(v)) assign(c, p);
      else assign(c, extend(p, mu_.at(c)));
    }
  }

  void lift_speciation_children(VertexId v) {
    auto p = *path_[v.value];
    auto w = u_.last[p.value];
    auto ch = t_.children(v);
    std::vector<std::vector<ArcId>> first(ch.size());
    for (std::size_t i = 0; i < ch.size(); ++i)
      for (const auto& a : sorted_out(w))
        if (can_start(a, mu_.at(ch[i]))) first[i].push_back(a);

    // First pair of children that can leave w through distinct arcs.
    std::vector<std::optional<ArcId>> pick(ch.size());
    [&] {
      for (std::size_t i = 0; i < ch.size(); ++i)
        for (std::size_t j = i + 1; j < ch.size(); ++j)
          for (const auto& ai : first[i])
            for (const auto& aj : first[j])
              if (ai != aj) {
                pick[i] = ai;
                pick[j] = aj;
                return;
              }
    }();
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (mu_.at(ch[i]) == mu_.at(v)) {
        assign(ch[i], p);
        continue;
      }
      if (!pick[i] && !first[i].empty()) pick[i] = first[i].front();
      if (!pick[i]) throw PreconditionError("image is not below its parent's image");
      const auto& a = *pick[i];
      auto q = u_.step.at({p, a});
      const auto& target = mu_.at(ch[i]);
      if (is_arc(target) && as_arc(target) == a) assign(ch[i], q);
      else assign(ch[i], extend(q, target));
    }
  }

  const GeneTree& t_;
  const Digraph& g_;
  const ReconMap& mu_;
  const UnfoldStar& u_;
  ReconMap kappa_;
  std::vector<std::optional<VertexId>> path_;
};

}  // namespace

ReconMap lift_mu(const GeneTree& t, const Network& n, const ReconMap& mu, const UnfoldStar& u) {
  if (!n.is_multi_arc_free()) throw PreconditionError("lifting needs a multi-arc free network");
  auto r = check_treenet(t, n, mu);
  if (!r.ok()) throw PreconditionError("map is not a TreeNet-reconciliation:\n" + r.to_string());
  return Lifter(t, n, mu, u).run();
}

RoundTrip roundtrip_check(const GeneTree& t, const Network& n, std::size_t limit,
                          const SearchLimits& search) {
  if (!n.is_multi_arc_free()) throw PreconditionError("round trip needs a multi-arc free network");
  RoundTrip out;
  out.network_side = exists_treenet_map(t, n, search).has_value();
  auto u = unfold_star(n, limit);
  out.mul_side = exists_mul_map(t, u.tree, search).has_value();
  out.agree = out.network_side == out.mul_side;
  return out;
}

}  // namespace reconet
