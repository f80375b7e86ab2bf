#include "reconet/construct.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "reconet/errors.hpp"

namespace reconet {

// ---------------------------------------------------------------- MUL-tree of a gene tree

AssociatedMUL associate_mul(const GeneTree& t) {
  DigraphBuilder b(t.graph());
  Names names = t.names();
  std::vector<std::string> species(t.graph().id_bound());
  std::map<std::string, VertexId> taken;
  for (auto v : t.graph().vertices()) {
    taken[t.name(v)] = v;
    if (t.is_leaf(v)) species[v.value] = t.sigma(v);
  }
  auto rho = b.add_vertex();
  b.add_arc(rho, t.root());
  b.set_root(rho);
  names.resize(rho.value + 1);
  names[rho.value] = unique_name("root", taken);
  species.resize(rho.value + 1);

  AssociatedMUL out;
  out.mul = MULTree::validate(b.build(), std::move(names), std::move(species), false);
  out.kappa.kind = TargetKind::multree;
  const auto& g = out.mul.graph();
  for (auto v : t.preorder()) {
    if (t.is_duplication(v)) out.kappa.set(v, g.in_arc(v));
    else out.kappa.set(v, v);
  }
  return out;
}

ReconMap lift_kappa_to_subdivision(const ReconMap& kappa, const MULTree& m, const MULTree& sub,
                                   const std::map<ArcId, Path>& arc_paths) {
  ReconMap out;
  out.kind = TargetKind::multree;
  out.image.resize(kappa.image.size());
  for (std::size_t i = 0; i < kappa.image.size(); ++i) {
    if (!kappa.image[i]) continue;
    const auto& e = *kappa.image[i];
    if (!m.graph().contains(e)) throw ArgumentError("kappa image outside the MUL-tree: " + to_string(e));
    if (is_vertex(e)) {
      if (!sub.graph().contains(as_vertex(e)))
        throw ArgumentError("subdivision lost vertex " + to_string(e));
      out.image[i] = e;
      continue;
    }
    auto it = arc_paths.find(as_arc(e));
    if (it != arc_paths.end() && !it->second.arcs.empty()) {
      out.image[i] = it->second.arcs.back();
    } else if (sub.graph().contains(e)) {
      out.image[i] = e;
    } else {
      throw ArgumentError("no subdivision path for arc " + to_string(e));
    }
  }
  return out;
}

// ---------------------------------------------------------------- folding

FoldArtifacts fold_mul_to_network(const MULTree& m) {
  FoldArtifacts out;
  out.mul = m;
  out.subdivided = simple_subdivision(m);
  const auto& sub = out.subdivided.tree;
  const auto& gs = sub.graph();

  // Inner vertices of M keep their ids; species leaves and par(x) are fresh.
  DigraphBuilder b;
  for (std::size_t i = 0; i < gs.id_bound(); ++i) b.add_vertex();
  auto is_ve = [&](VertexId v) { return out.subdivided.origin.count(v) > 0; };
  for (std::uint32_t i = 0; i < gs.id_bound(); ++i) {
    VertexId v{i};
    if (!gs.contains(v) || sub.is_leaf(v) || is_ve(v)) b.remove_vertex(v);
  }
  b.set_root(sub.root());

  Names names(gs.id_bound());
  std::map<std::string, VertexId> taken;
  std::map<std::string, VertexId> leaf;
  for (const auto& x : sub.species()) {
    auto l = b.add_vertex();
    leaf[x] = l;
    taken[x] = l;
    names.resize(l.value + 1);
    names[l.value] = x;
  }
  for (auto v : gs.vertices()) {
    if (sub.is_leaf(v) || is_ve(v)) continue;
    auto n = unique_name(sub.name(v), taken);
    taken[n] = v;
    names[v.value] = n;
  }
  for (const auto& [x, ls] : sub.chi_map()) {
    if (ls.size() < 2) continue;
    auto p = b.add_vertex();
    out.par[x] = p;
    auto n = unique_name("p_" + x, taken);
    taken[n] = p;
    names.resize(p.value + 1);
    names[p.value] = n;
  }

  auto& f = out.folding;
  f.fv.assign(gs.id_bound(), std::nullopt);
  for (auto v : gs.vertices()) {
    if (sub.is_leaf(v)) f.fv[v.value] = leaf.at(sub.species_of(v));
    else if (is_ve(v)) f.fv[v.value] = out.par.at(sub.species_of(gs.children(v).front()));
    else f.fv[v.value] = v;
  }
  std::map<std::string, ArcId> par_arc;
  for (const auto& a : gs.arcs()) {
    if (is_ve(a.tail)) {
      const auto& x = sub.species_of(a.head);
      auto it = par_arc.find(x);
      if (it == par_arc.end()) it = par_arc.emplace(x, b.add_arc(out.par.at(x), leaf.at(x))).first;
      f.fe[a] = it->second;
    } else {
      f.fe[a] = b.add_arc(*f.fv[a.tail.value], *f.fv[a.head.value]);
    }
  }
  out.network = Network::validate(b.build(), std::move(names));
  return out;
}

ReconMap compose_reconciliation(const ReconMap& kappa, const FoldingMap& f) {
  ReconMap mu;
  mu.kind = TargetKind::network;
  mu.image.resize(kappa.image.size());
  for (std::size_t i = 0; i < kappa.image.size(); ++i)
    if (kappa.image[i]) mu.image[i] = f.apply(*kappa.image[i]);
  return mu;
}

// ---------------------------------------------------------------- multi-arc elimination

namespace {
const std::vector<VertexId> kEmpty;
}

const std::vector<VertexId>& StarSets::w_of(const std::string& x) const {
  auto it = W.find(x);
  return it == W.end() ? kEmpty : it->second;
}

const std::vector<VertexId>& StarSets::v_of(const std::string& x) const {
  auto it = V.find(x);
  return it == V.end() ? kEmpty : it->second;
}

StarSets star_sets(const Network& n) {
  const auto& g = n.graph();
  StarSets s;
  std::set<VertexId> w2;
  for (const auto& x : n.species()) {
    auto lx = n.leaf(x);
    std::vector<VertexId> wx;
    for (auto v : g.vertices()) {
      if (v == lx || !g.reaches(v, lx)) continue;
      auto below = leaves_below(g, v);
      if (below.size() == 1) wx.push_back(v);
    }
    if (wx.empty()) continue;
    std::set<VertexId> vx;
    for (auto z : g.vertices()) {
      if (std::binary_search(wx.begin(), wx.end(), z)) continue;
      for (auto c : g.children(z))
        if (std::binary_search(wx.begin(), wx.end(), c)) vx.insert(z);
    }
    w2.insert(wx.begin(), wx.end());
    w2.insert(lx);
    s.V[x] = {vx.begin(), vx.end()};
    s.W[x] = std::move(wx);
  }
  for (auto v : g.vertices()) {
    if (w2.count(v)) s.W2.push_back(v);
    else s.W1.push_back(v);
  }
  for (const auto& a : g.arcs())
    if (!w2.count(a.tail) && !w2.count(a.head)) s.F1.push_back(a);
  std::sort(s.F1.begin(), s.F1.end());
  return s;
}

Elimination eliminate_multiarcs(const Network& n) {
  Elimination out;
  out.stars = star_sets(n);
  const auto& s = out.stars;
  DigraphBuilder b(n.graph());
  Names names = n.names();
  std::map<std::string, VertexId> taken;
  for (auto v : n.graph().vertices()) taken[n.name(v)] = v;

  auto remove_w = [&](const std::string& x) {
    for (auto v : s.w_of(x)) {
      b.remove_vertex(v);
      taken.erase(names[v.value]);
      names[v.value].clear();
      out.removed.push_back(v);
    }
  };
  // All single-parent species first, then the ones that need a fresh hybrid.
  for (const auto& [x, vx] : s.V) {
    if (vx.size() != 1) continue;
    remove_w(x);
    b.add_arc(vx.front(), n.leaf(x));
  }
  for (const auto& [x, vx] : s.V) {
    if (vx.size() == 1) continue;
    remove_w(x);
    auto w = b.add_vertex();
    auto nm = unique_name("w_" + x, taken);
    taken[nm] = w;
    names.resize(w.value + 1);
    names[w.value] = nm;
    out.fresh[x] = w;
    for (auto z : vx) b.add_arc(z, w);
    b.add_arc(w, n.leaf(x));
  }
  std::sort(out.removed.begin(), out.removed.end());
  auto g = b.build();
  auto report = Network::check(g, names);
  if (!report.ok())
    throw PreconditionError("multi-arc elimination did not yield a network:\n" + report.to_string());
  out.network = Network::validate(std::move(g), std::move(names));
  return out;
}

ReconMap build_mu_star(const GeneTree& t, const ReconMap& mu, const Network& n,
                       const Elimination& star) {
  if (!is_well_behaved(t)) throw PreconditionError("mu* needs a well-behaved gene tree");
  const auto& s = star.stars;
  const auto& gstar = star.network.graph();
  ReconMap out;
  out.kind = TargetKind::network;
  out.image.resize(mu.image.size());
  for (auto v : t.preorder()) {
    const auto& e = mu.at(v);
    if (t.is_leaf(v) || t.is_speciation(v) ||
        std::binary_search(s.F1.begin(), s.F1.end(), as_arc(e))) {
      out.set(v, e);
      continue;
    }
    auto h = as_arc(e).head;
    std::optional<VertexId> x;
    for (const auto& [sp, wx] : s.W)
      if (h == n.leaf(sp) || std::binary_search(wx.begin(), wx.end(), h)) x = n.leaf(sp);
    if (!x) throw PreconditionError("no species below the image of duplication " + t.name(v));
    out.set(v, gstar.in_arc(*x));
  }
  return out;
}

PipelineResult pipeline(const GeneTree& t) {
  PipelineResult r;
  auto am = associate_mul(t);
  r.kappa = am.kappa;
  r.fold = fold_mul_to_network(am.mul);
  r.kappa_sub = lift_kappa_to_subdivision(r.kappa, r.fold.mul, r.fold.subdivided.tree,
                                          r.fold.subdivided.arc_paths);
  r.mu = compose_reconciliation(r.kappa_sub, r.fold.folding);
  r.well_behaved = is_well_behaved(t);
  if (r.well_behaved) {
    r.star = eliminate_multiarcs(r.fold.network);
    r.mu_star = build_mu_star(t, r.mu, r.fold.network, *r.star);
  }
  return r;
}

// ---------------------------------------------------------------- triples

std::optional<GeneTree> triples_gene_tree(const std::vector<Triple>& r) {
  std::set<Triple> distinct(r.begin(), r.end());
  if (distinct.empty()) return std::nullopt;
  DigraphBuilder b;
  Names names;
  std::vector<std::optional<Event>> events;
  std::vector<std::string> sigma;
  auto vertex = [&](std::string name, std::optional<Event> ev, std::string sp) {
    auto v = b.add_vertex();
    names.push_back(std::move(name));
    events.push_back(ev);
    sigma.push_back(std::move(sp));
    return v;
  };
  std::optional<VertexId> root;
  if (distinct.size() > 1) root = vertex("t0", Event::duplication, "");
  std::size_t i = 0;
  for (const auto& tr : distinct) {
    ++i;
    auto p = "t" + std::to_string(i) + "_";
    auto top = vertex(p + "s2", Event::speciation, "");
    auto cherry = vertex(p + "s1", Event::speciation, "");
    b.add_arc(top, cherry);
    b.add_arc(cherry, vertex(p + "1", std::nullopt, tr.a));
    b.add_arc(cherry, vertex(p + "2", std::nullopt, tr.b));
    b.add_arc(top, vertex(p + "3", std::nullopt, tr.c));
    if (root) b.add_arc(*root, top);
  }
  return GeneTree::validate(b.build(), std::move(names), std::move(events), std::move(sigma));
}

std::optional<Network> network_from_triples(const std::vector<Triple>& r) {
  auto t = triples_gene_tree(r);
  if (!t) return std::nullopt;
  auto p = pipeline(*t);
  return p.final_network();
}

// ---------------------------------------------------------------- generator

std::string species_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "S" + std::to_string(i);
}

GeneTree gen_gene_tree(std::uint64_t seed, const GenParams& params) {
  if (params.species_count < 2) throw ArgumentError("species_count must be at least 2");
  if (params.max_leaves < 2) throw ArgumentError("max_leaves must be at least 2");
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };

  const std::size_t n = uniform(2, params.max_leaves);
  // Random agglomeration of n leaves into a tree; node i < n is a leaf.
  std::vector<std::vector<std::size_t>> kids(n);
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  while (pool.size() > 1) {
    std::size_t k = pool.size() >= 3 && coin(params.multifurcation_prob) ? 3 : 2;
    std::vector<std::size_t> picked;
    for (std::size_t j = 0; j < k; ++j) {
      auto at = uniform(0, pool.size() - 1);
      picked.push_back(pool[at]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
    }
    kids.push_back(std::move(picked));
    pool.push_back(kids.size() - 1);
  }
  std::vector<std::size_t> sp(n);
  for (auto& s : sp) s = uniform(0, params.species_count - 1);
  if (std::all_of(sp.begin(), sp.end(), [&](std::size_t s) { return s == sp.front(); })) {
    auto at = uniform(0, n - 1);
    sp[at] = (sp[at] + 1 + uniform(0, params.species_count - 2)) % params.species_count;
  }
  std::vector<bool> dup(kids.size());
  for (std::size_t i = n; i < kids.size(); ++i) dup[i] = coin(params.dup_prob);

  auto emit = [&](const std::vector<bool>& is_dup) {
    DigraphBuilder b;
    Names names;
    std::vector<std::optional<Event>> events;
    std::vector<std::string> sigma;
    std::size_t leaves = 0, inner = 0;
    std::function<VertexId(std::size_t)> rec = [&](std::size_t node) {
      auto v = b.add_vertex();
      if (node < n) {
        names.push_back("g" + std::to_string(++leaves));
        events.push_back(std::nullopt);
        sigma.push_back(species_name(sp[node]));
        return v;
      }
      names.push_back("n" + std::to_string(++inner));
      events.push_back(is_dup[node] ? Event::duplication : Event::speciation);
      sigma.emplace_back();
      for (auto c : kids[node]) b.add_arc(v, rec(c));
      return v;
    };
    rec(pool.front());
    return GeneTree::validate(b.build(), std::move(names), std::move(events), std::move(sigma));
  };
  auto t = emit(dup);
  if (!params.force_well_behaved || is_well_behaved(t)) return t;

  // Repair: a speciation whose children all carry the same species set becomes a duplication.
  // Vertices are emitted in preorder, so the i-th inner vertex in preorder is a fixed node.
  std::vector<std::size_t> inner_nodes;
  std::function<void(std::size_t)> order = [&](std::size_t node) {
    if (node < n) return;
    inner_nodes.push_back(node);
    for (auto c : kids[node]) order(c);
  };
  order(pool.front());
  auto inner = t.inner();
  for (std::size_t i = 0; i < inner.size(); ++i) {
    auto v = inner[i];
    if (!t.is_speciation(v)) continue;
    auto ch = t.children(v);
    bool same = std::all_of(ch.begin(), ch.end(),
                            [&](VertexId c) { return t.sigma_set(c) == t.sigma_set(ch.front()); });
    if (same) dup[inner_nodes[i]] = true;
  }
  return emit(dup);
}

}  // namespace reconet
