// Command-line front end. Every command prints a JSON summary on stdout.
// Exit codes: 0 success, 1 negative verdict, 2 usage or input error, 3 resource limit.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "reconet/construct.hpp"
#include "reconet/io.hpp"
#include "reconet/triples.hpp"
#include "reconet/unfold.hpp"

using namespace reconet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A ParseError with the file name in front.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

template <class F>
auto with_file(const std::string& path, F f) {
  try {
    return f(read_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

struct Options {
  std::string in, sigma, out, target, map;
  std::string format;
  std::string kind;
  std::size_t limit = 0;
  std::uint64_t seed = 1;
  bool strict = false;
};

GeneTree load_gene_tree(const Options& o) {
  std::optional<SigmaTable> sigma;
  if (!o.sigma.empty()) sigma = with_file(o.sigma, [](const std::string& s) { return parse_sigma(s); });
  return with_file(o.in, [&](const std::string& s) { return parse_gene_tree(s, sigma ? &*sigma : nullptr); });
}

Network load_network(const std::string& path, json& summary) {
  std::vector<std::string> warnings;
  auto n = with_file(path, [&](const std::string& s) { return parse_network(s, &warnings); });
  for (const auto& w : warnings) {
    std::cerr << "warning: " << path << ": " << w << "\n";
    summary["warnings"].push_back(w);
  }
  return n;
}

// Writes the document to --out or embeds it in the summary.
void emit(const Options& o, json& summary, const std::string& key, const std::string& text) {
  if (o.out.empty()) {
    summary[key] = text;
  } else {
    write_file(o.out, text);
    summary[key + "_file"] = o.out;
  }
}

std::string network_text(const Network& n, const std::string& format, const DotAnnotation& ann = {}) {
  if (format == "dot") return export_dot(n, ann);
  return write_network(n);
}

json report_json(const Report& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"axiom", x.axiom}, {"witnesses", x.witnesses}, {"message", x.message}});
  return v;
}

json triples_json(const TripleSet& r) {
  json v = json::array();
  for (const auto& t : r.triples) v.push_back(to_string(t));
  return v;
}

SearchLimits search_limits(const Options& o) {
  SearchLimits l;
  if (o.limit) l.max_target = o.limit;
  return l;
}

// ---------------------------------------------------------------- commands

int cmd_reconcile(const Options& o, json& s) {
  auto t = load_gene_tree(o);
  auto r = pipeline(t);
  const auto& n = r.final_network();
  const auto& mu = r.final_map();
  auto report = check_treenet(t, n, mu);
  fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  auto ext = o.format == "dot" ? "nstar.dot" : "nstar.enwk";
  write_file(dir / ext, network_text(n, o.format, {&t, &mu}));
  write_file(dir / "map.tsv", write_map(t, n, mu));
  s["well_behaved"] = r.well_behaved;
  s["multi_arc_free"] = n.is_multi_arc_free();
  s["vertices"] = n.graph().vertex_count();
  s["arcs"] = n.graph().arc_count();
  s["network_file"] = (dir / ext).string();
  s["map_file"] = (dir / "map.tsv").string();
  s["verified"] = report.ok();
  return report.ok() ? 0 : 1;
}

int cmd_fold(const Options& o, json& s) {
  auto t = load_gene_tree(o);
  auto am = associate_mul(t);
  auto f = fold_mul_to_network(am.mul);
  auto ks = lift_kappa_to_subdivision(am.kappa, f.mul, f.subdivided.tree, f.subdivided.arc_paths);
  auto mu = compose_reconciliation(ks, f.folding);
  s["mul"] = write_mul(am.mul);
  s["multi_arc_free"] = f.network.is_multi_arc_free();
  s["map"] = write_map(t, f.network, mu);
  emit(o, s, "network", network_text(f.network, o.format, {&t, &mu}));
  return 0;
}

int cmd_unfold(const Options& o, json& s) {
  auto n = load_network(o.in, s);
  auto limit = o.limit ? o.limit : kDefaultPathLimit;
  auto u = unfold_star(n, limit);
  const auto m = o.strict ? u.tree : suppress_d1(u.tree);
  s["pseudo"] = m.pseudo();
  s["leaves"] = m.graph().sinks().size();
  emit(o, s, "mul", o.format == "dot" ? export_dot(m) : write_mul(m));
  return 0;
}

int cmd_lift(const Options& o, json& s) {
  auto t = load_gene_tree(o);
  auto n = load_network(o.target, s);
  auto mu = with_file(o.map, [&](const std::string& x) { return parse_map(x, t, n, TargetKind::network); });
  auto u = unfold_star(n, o.limit ? o.limit : kDefaultPathLimit);
  auto kappa = lift_mu(t, n, mu, u);
  auto report = check_mul(t, u.tree, kappa);
  s["verified"] = report.ok();
  s["ustar"] = write_mul(u.tree);
  emit(o, s, "map", write_map(t, u.tree, kappa));
  return report.ok() ? 0 : 1;
}

int cmd_verify(const Options& o, json& s) {
  auto t = load_gene_tree(o);
  Report report;
  if (o.kind == "mul") {
    auto m = with_file(o.target, [](const std::string& x) { return parse_mul(x, true); });
    auto k = with_file(o.map, [&](const std::string& x) { return parse_map(x, t, m, TargetKind::multree); });
    report = check_mul(t, m, k);
  } else {
    auto n = load_network(o.target, s);
    auto mu = with_file(o.map, [&](const std::string& x) { return parse_map(x, t, n, TargetKind::network); });
    if (o.kind == "treenet") report = check_treenet(t, n, mu);
    else if (o.kind == "relaxed") report = check_relaxed_tree(t, n, mu, o.strict);
    else throw UsageError("--kind must be treenet, relaxed or mul");
  }
  s["ok"] = report.ok();
  s["violations"] = report_json(report);
  if (!report.ok()) std::cerr << report.to_string() << "\n";
  return report.ok() ? 0 : 1;
}

int cmd_exists(const Options& o, json& s) {
  auto t = load_gene_tree(o);
  std::optional<ReconMap> found;
  SearchLimits l = search_limits(o);
  if (o.kind == "mul") {
    auto m = with_file(o.target, [](const std::string& x) { return parse_mul(x, true); });
    found = exists_mul_map(t, m, l);
    if (found) s["map"] = write_map(t, m, *found);
  } else {
    auto n = load_network(o.target, s);
    found = exists_treenet_map(t, n, l);
    if (found) s["map"] = write_map(t, n, *found);
  }
  s["exists"] = found.has_value();
  return found ? 0 : 1;
}

int cmd_triples(const std::string& sub, const Options& o, json& s) {
  if (sub == "extract") {
    auto t = load_gene_tree(o);
    auto r = o.kind == "displayed" ? displayed_triples(t) : informative_triples(t);
    s["triples"] = triples_json(r);
    emit(o, s, "document", write_triples(r));
    return 0;
  }
  auto r = with_file(o.in, [](const std::string& x) { return parse_triples(x); });
  if (sub == "check-compat" || sub == "build-species-tree") {
    auto tree = r.labels.size() >= 2 ? is_compatible(r) : std::nullopt;
    s["compatible"] = tree.has_value();
    s["verdict"] = tree ? "compatible" : "incompatible";
    std::cerr << (tree ? "compatible" : "incompatible") << "\n";
    if (!tree) return 1;
    if (sub == "build-species-tree") emit(o, s, "tree", network_text(*tree, o.format));
    return 0;
  }
  // check-display
  auto n = load_network(o.target, s);
  bool all = true;
  json rows = json::array();
  auto limit = o.limit ? o.limit : kDefaultDisplayLimit;
  for (const auto& t : r.triples) {
    bool d = displays(n, t, limit);
    all = all && d;
    rows.push_back({{"triple", to_string(t)}, {"displayed", d}});
  }
  s["results"] = rows;
  s["all_displayed"] = all;
  return all ? 0 : 1;
}

int cmd_net_from_triples(const Options& o, json& s) {
  auto r = with_file(o.in, [](const std::string& x) { return parse_triples(x); });
  auto n = network_from_triples(r.to_vector());
  if (!n) throw UsageError("the triple file is empty");
  s["multi_arc_free"] = n->is_multi_arc_free();
  s["vertices"] = n->graph().vertex_count();
  emit(o, s, "network", network_text(*n, o.format));
  return 0;
}

int cmd_gen(const Options& o, std::size_t count, const GenParams& p, json& s) {
  json files = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    auto t = gen_gene_tree(o.seed + i, p);
    auto text = write_gene_tree(t);
    if (o.out.empty()) {
      files.push_back(text);
    } else {
      auto path = fs::path(o.out) / ("gene_" + std::to_string(o.seed + i) + ".nwk");
      write_file(path, text);
      files.push_back(path.string());
    }
  }
  s["trees"] = files;
  return 0;
}

int cmd_export(const Options& o, json& s) {
  std::string dot;
  if (o.kind == "gene") {
    dot = export_dot(load_gene_tree(o));
  } else if (o.kind == "mul") {
    dot = export_dot(with_file(o.in, [](const std::string& x) { return parse_mul(x, true); }));
  } else if (o.kind == "network") {
    auto n = load_network(o.in, s);
    if (!o.map.empty()) {
      if (o.target.empty()) throw UsageError("--map needs --tree for the gene tree");
      Options g = o;
      g.in = o.target;
      auto t = load_gene_tree(g);
      auto mu = with_file(o.map, [&](const std::string& x) { return parse_map(x, t, n, TargetKind::network); });
      dot = export_dot(n, {&t, &mu});
    } else {
      dot = export_dot(n);
    }
  } else {
    throw UsageError("--kind must be gene, network or mul");
  }
  emit(o, s, "dot", dot);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconciliation of event-labeled gene trees with species networks"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c, bool needs_in = true) {
    auto in = c->add_option("--in", o.in, "input file");
    if (needs_in) in->required();
    c->add_option("--out", o.out, "output file (directory for reconcile and gen)");
    c->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"newick", "enewick", "dot", "tsv"}));
    return c;
  };
  auto sigma = [&](CLI::App* c) { c->add_option("--sigma", o.sigma, "gene<TAB>species sidecar"); };

  auto reconcile = common(app.add_subcommand("reconcile", "build N* (or N) and its map for a gene tree"));
  sigma(reconcile);
  auto fold = common(app.add_subcommand("fold", "fold the gene tree's MUL-tree into a network"));
  sigma(fold);
  auto unfold_c = common(app.add_subcommand("unfold", "unfold a network into its MUL-tree"));
  unfold_c->add_option("--limit", o.limit, "maximum number of root paths");
  unfold_c->add_flag("--strict", o.strict, "keep indegree-1 outdegree-1 vertices (U*)");
  auto lift = common(app.add_subcommand("lift", "lift a network map onto U*(N)"));
  sigma(lift);
  lift->add_option("--target", o.target, "network")->required();
  lift->add_option("--map", o.map, "map TSV")->required();
  lift->add_option("--limit", o.limit, "maximum number of root paths");
  auto verify = common(app.add_subcommand("verify", "check a map against the reconciliation axioms"));
  sigma(verify);
  verify->add_option("--kind", o.kind, "treenet (default), relaxed or mul");
  verify->add_option("--target", o.target, "network, species tree or MUL-tree")->required();
  verify->add_option("--map", o.map, "map TSV")->required();
  verify->add_flag("--strict", o.strict, "strict tree reconciliation (relaxed kind only)");
  auto exists = common(app.add_subcommand("exists", "search for a reconciliation map"));
  sigma(exists);
  exists->add_option("--kind", o.kind, "treenet (default) or mul");
  exists->add_option("--target", o.target, "network or MUL-tree")->required();
  exists->add_option("--limit", o.limit, "maximum number of target elements");

  auto triples = app.add_subcommand("triples", "rooted triple tools");
  triples->require_subcommand(1);
  auto t_extract = common(triples->add_subcommand("extract", "informative or displayed triples of a gene tree"));
  sigma(t_extract);
  t_extract->add_option("--kind", o.kind, "informative (default) or displayed");
  auto t_compat = common(triples->add_subcommand("check-compat", "BUILD compatibility test"));
  auto t_build = common(triples->add_subcommand("build-species-tree", "BUILD tree of a compatible set"));
  auto t_display = common(triples->add_subcommand("check-display", "does the network display each triple"));
  t_display->add_option("--target", o.target, "network")->required();
  t_display->add_option("--limit", o.limit, "maximum network size");

  auto nft = common(app.add_subcommand("net-from-triples", "multi-arc free network displaying a triple set"));

  std::size_t count = 1;
  GenParams gp;
  auto gen = common(app.add_subcommand("gen", "random gene trees"), false);
  gen->add_option("--seed", o.seed, "first seed");
  gen->add_option("--count", count, "number of trees");
  gen->add_option("--leaves", gp.max_leaves, "maximum number of leaves");
  gen->add_option("--species", gp.species_count, "number of species");
  gen->add_option("--dup-prob", gp.dup_prob, "duplication probability");
  gen->add_flag("--well-behaved", gp.force_well_behaved, "only well-behaved trees");

  auto exp = common(app.add_subcommand("export", "DOT rendering"));
  sigma(exp);
  exp->add_option("--kind", o.kind, "gene, network or mul")->required();
  exp->add_option("--map", o.map, "map TSV used as annotations");
  exp->add_option("--tree", o.target, "gene tree of the map");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  // One string backs every --kind, so defaults are applied per subcommand here.
  if (o.kind.empty()) {
    if (*verify || *exists) o.kind = "treenet";
    else if (*t_extract) o.kind = "informative";
  }

  json s;
  int code = 0;
  try {
    if (*reconcile) s["command"] = "reconcile", code = cmd_reconcile(o, s);
    else if (*fold) s["command"] = "fold", code = cmd_fold(o, s);
    else if (*unfold_c) s["command"] = "unfold", code = cmd_unfold(o, s);
    else if (*lift) s["command"] = "lift", code = cmd_lift(o, s);
    else if (*verify) s["command"] = "verify", code = cmd_verify(o, s);
    else if (*exists) s["command"] = "exists", code = cmd_exists(o, s);
    else if (*nft) s["command"] = "net-from-triples", code = cmd_net_from_triples(o, s);
    else if (*gen) s["command"] = "gen", code = cmd_gen(o, count, gp, s);
    else if (*exp) s["command"] = "export", code = cmd_export(o, s);
    else {
      for (auto* sub : {t_extract, t_compat, t_build, t_display})
        if (*sub) {
          s["command"] = "triples " + sub->get_name();
          code = cmd_triples(sub->get_name(), o, s);
        }
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    s["error"] = e.what();
    code = 3;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    s["error"] = e.what();
    code = 2;
  } catch (const InputError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    s["error"] = e.what();
    code = 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    s["error"] = e.what();
    code = 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input:\n" << e.what() << "\n";
    s["error"] = e.what();
    code = 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    s["error"] = e.what();
    code = 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    s["error"] = e.what();
    code = 2;
  }
  s["exit_code"] = code;
  std::cout << s.dump(2) << "\n";
  return code;
}
