// subw: command-line front end. Exit status 0 ok, 1 UNSAT or a false verdict, 2 usage or
// input errors, 3 a cap or resource limit, 4 an internal consistency failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "subw/csp.hpp"
#include "subw/decomposition.hpp"
#include "subw/errors.hpp"
#include "subw/fractional.hpp"
#include "subw/hypergraph.hpp"
#include "subw/reductions.hpp"
#include "subw/submodular.hpp"
#include "subw/suites.hpp"
#include "subw/uniform.hpp"

using namespace subw;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;
constexpr int kInternal = 4;

struct Global {
  std::string format = "human";
  std::uint64_t seed = 1;
  int jobs = 1;
  bool json() const { return format == "json"; }
};

// Collects both renderings; only the selected one is printed.
struct Output {
  Json j = Json::object();
  std::ostringstream text;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << content;
}

bool looks_like_json(const std::string& text) {
  auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && text[p] == '{';
}

CspInstance load_csp(const std::string& path) {
  std::string text = read_file(path);
  return looks_like_json(text) ? CspInstance::from_json(text).pruned() : CspInstance::parse(text);
}

// Vertex names separated by spaces or commas.
VertexSet parse_set(const Hypergraph& h, const std::string& spec) {
  std::string s = spec;
  for (auto& ch : s) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(s);
  std::vector<std::string> names;
  for (std::string w; in >> w;) names.push_back(w);
  return h.set_of(names);
}

// `name value` lines.
VertexWeights load_weights(const std::string& path, const Hypergraph& h) {
  VertexWeights mu(static_cast<std::size_t>(h.universe_size()));
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name, value, extra;
    if (!(ls >> name)) continue;
    if (!(ls >> value) || (ls >> extra)) throw DomainError(path + ":" + std::to_string(lineno) + ": expected `name value`");
    mu[static_cast<std::size_t>(h.index_of(name))] = parse_rational(value);
  }
  return mu;
}

// `edge-key value` lines, the key being the comma-joined vertex names.
EdgeWeights load_edge_weights(const std::string& path, const Hypergraph& h) {
  EdgeWeights s(static_cast<std::size_t>(h.edge_count()));
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, value, extra;
    if (!(ls >> key)) continue;
    if (!(ls >> value) || (ls >> extra)) throw DomainError(path + ":" + std::to_string(lineno) + ": expected `edge value`");
    s[static_cast<std::size_t>(h.edge_by_key(key))] = parse_rational(value);
  }
  return s;
}

Json names_json(const Hypergraph& h, const VertexSet& s) {
  Json a = Json::array();
  s.for_each([&](int v) { a.push_back(h.name(v)); });
  return a;
}

std::string set_text(const std::vector<std::string>& names, const VertexSet& s) {
  std::string out = "{";
  s.for_each([&](int v) {
    if (out.size() > 1) out += ' ';
    out += names[static_cast<std::size_t>(v)];
  });
  return out + "}";
}

Json td_json(const TreeDecomposition& t, const std::vector<std::string>& names) {
  Json nodes = Json::array();
  for (int i = 0; i < t.size(); ++i) {
    Json n;
    n["id"] = i;
    n["parent"] = t.parent[static_cast<std::size_t>(i)] < 0 ? Json(nullptr) : Json(t.parent[static_cast<std::size_t>(i)]);
    Json bag = Json::array();
    t.bags[static_cast<std::size_t>(i)].for_each([&](int v) { bag.push_back(names[static_cast<std::size_t>(v)]); });
    n["bag"] = bag;
    nodes.push_back(n);
  }
  return nodes;
}

Json weights_json(const Hypergraph& h, const VertexWeights& mu) {
  Json out = Json::object();
  h.vertices().for_each([&](int v) {
    if (mu[static_cast<std::size_t>(v)] != 0) out[h.name(v)] = to_string(mu[static_cast<std::size_t>(v)]);
  });
  return out;
}

std::string weights_text(const Hypergraph& h, const VertexWeights& mu) {
  std::string out;
  h.vertices().for_each([&](int v) {
    if (mu[static_cast<std::size_t>(v)] != 0) out += h.name(v) + " " + to_string(mu[static_cast<std::size_t>(v)]) + "\n";
  });
  return out;
}

Json path_json(const Hypergraph& h, const Path& p) {
  Json a = Json::array();
  for (int v : p.vertices) a.push_back(h.name(v));
  return a;
}

std::string path_text(const Hypergraph& h, const Path& p) {
  std::string out;
  for (int v : p.vertices) out += (out.empty() ? "" : " ") + h.name(v);
  return out;
}

Json flow_json(const Hypergraph& h, const Flow& f) {
  Json a = Json::array();
  for (std::size_t i = 0; i < f.paths.size(); ++i) {
    a.push_back({{"path", path_json(h, f.paths[i])}, {"weight", to_string(f.weights[i])}});
  }
  return a;
}

std::string flow_text(const Hypergraph& h, const Flow& f) {
  std::string out;
  for (std::size_t i = 0; i < f.paths.size(); ++i) {
    out += "path " + path_text(h, f.paths[i]) + " weight " + to_string(f.weights[i]) + "\n";
  }
  return out;
}

Json depths_json(const DepthReport& d) {
  return {{"vertex_depth", d.vertex_depth}, {"edge_depth", d.edge_depth}, {"weak_edge_depth", d.weak_edge_depth}};
}

std::string depths_text(const DepthReport& d) {
  return "vertex-depth " + std::to_string(d.vertex_depth) + "\nedge-depth " + std::to_string(d.edge_depth) +
         "\nweak-edge-depth " + std::to_string(d.weak_edge_depth) + "\n";
}

// Stable 64-bit FNV-1a, for cache keys.
std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

// ---------------------------------------------------------------- commands

struct WidthArgs {
  std::string file, measure = "tw", weights, oracle;
  int max_vertices = 16;
};

int cmd_width(const WidthArgs& a, Output& out) {
  Hypergraph h = Hypergraph::load(a.file);
  WidthOptions opts;
  opts.max_vertices = a.max_vertices;
  std::string extra;
  if (a.measure == "mu") {
    if (a.weights.empty()) throw DomainError("--measure mu needs --weights");
    extra = read_file(a.weights);
  }
  if (a.measure == "b") {
    if (a.oracle.empty()) throw DomainError("--measure b needs --oracle");
    extra = read_file(a.oracle);
  }
  // results depend only on the canonical hypergraph, the measure and its input file
  const char* cache_dir = std::getenv("SUBW_CACHE_DIR");
  std::string cache_path;
  if (cache_dir && *cache_dir) {
    const std::string key =
        a.measure + "\n" + std::to_string(a.max_vertices) + "\n" + h.to_text() + "\n" + extra;
    cache_path = (std::filesystem::path(cache_dir) / ("width-" + fnv1a(key) + ".json")).string();
    std::ifstream in(cache_path);
    if (in) {
      std::ostringstream s;
      s << in.rdbuf();
      try {
        out.j = Json::parse(s.str());
      } catch (const Json::exception&) {
        out.j = Json::object();
      }
    }
  }
  if (out.j.empty()) {
    std::string width;
    TreeDecomposition td;
    if (a.measure == "tw") {
      auto r = treewidth(h, opts);
      width = std::to_string(r.width);
      td = r.decomposition;
    } else if (a.measure == "ghw") {
      auto r = generalized_hypertree_width(h, opts);
      width = std::to_string(r.width);
      td = r.decomposition;
    } else if (a.measure == "fhw") {
      auto r = fractional_hypertree_width(h, opts);
      width = to_string(r.width);
      td = r.decomposition;
    } else if (a.measure == "mu") {
      VertexWeights mu = load_weights(a.weights, h);
      if (!is_fractional_independent_set(h, mu)) throw DomainError("weights are not a fractional independent set");
      auto r = mu_width(h, mu, opts);
      width = to_string(r.width);
      td = r.decomposition;
    } else {
      auto b = SetFunctionOracle::load(a.oracle, h);
      auto r = b_width(h, b.as_bag_cost(), opts);
      width = to_string(r.width);
      td = r.decomposition;
    }
    out.j["measure"] = a.measure;
    out.j["width"] = width;
    out.j["decomposition"] = td_json(td, h.names());
    if (!cache_path.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(cache_dir, ec);
      std::ofstream c(cache_path);
      if (c) c << out.j.dump() << "\n";
    }
  }
  out.text << "measure " << out.j["measure"].get<std::string>() << "\n";
  out.text << "width " << out.j["width"].get<std::string>() << "\n";
  for (const auto& n : out.j["decomposition"]) {
    out.text << "node " << n["id"].get<int>() << " parent "
             << (n["parent"].is_null() ? std::string("-") : std::to_string(n["parent"].get<int>())) << " bag";
    for (const auto& v : n["bag"]) out.text << ' ' << v.get<std::string>();
    out.text << "\n";
  }
  return kOk;
}

struct SolveArgs {
  std::string file, c0 = "auto-fhw";
  int max_split_nodes = 200000;
};

int cmd_solve(const SolveArgs& a, Output& out) {
  CspInstance inst = load_csp(a.file);
  Rational c0 = a.c0 == "auto-fhw" ? fractional_hypertree_width(inst.hypergraph()).width : parse_rational(a.c0);
  FptOptions opts;
  opts.split.max_nodes = a.max_split_nodes;
  auto r = solve_fpt(inst, c0, opts);
  const std::string verdict = to_string(r.verdict);
  out.j["verdict"] = verdict;
  out.j["c0"] = to_string(c0);
  out.j["method"] = r.method;
  out.j["N"] = r.n;
  out.j["c"] = to_string(r.c);
  out.j["eps"] = to_string(r.eps);
  out.j["M"] = r.m;
  out.j["outputs"] = r.outputs;
  out.text << "verdict " << verdict << "\nc0 " << to_string(c0) << "\nmethod " << r.method << "\nN " << r.n << "\nc "
           << to_string(r.c) << "\neps " << to_string(r.eps) << "\nM " << r.m << "\noutputs " << r.outputs << "\n";
  if (r.b_width) {
    out.j["b_width"] = r.b_width->to_string();
    out.text << "b-width " << r.b_width->to_string() << "\n";
  }
  if (r.verdict == FptResult::Verdict::Sat) {
    Json as = Json::object();
    inst.variables().for_each([&](int v) {
      const std::string& value = inst.domain()[static_cast<std::size_t>(r.assignment[static_cast<std::size_t>(v)])];
      as[inst.name(v)] = value;
      out.text << "assign " << inst.name(v) << " " << value << "\n";
    });
    out.j["assignment"] = as;
    return kOk;
  }
  if (r.verdict == FptResult::Verdict::BoundViolated) {
    out.j["violation"] = r.violation;
    out.text << "violation " << r.violation << "\n";
  }
  return kFalse;
}

struct SplitArgs {
  std::string file, out_dir, n, c = "1", eps;
  int max_nodes = 200000;
};

int cmd_split(const SplitArgs& a, Output& out) {
  CspInstance inst = load_csp(a.file);
  const std::uint64_t n =
      a.n.empty() ? std::max<std::uint64_t>(2, inst.max_relation_size()) : std::stoull(a.n);
  const Rational c = parse_rational(a.c);
  Rational eps;
  if (a.eps.empty()) {
    Rational e = frac(1, std::max(1, inst.variable_count()));
    eps = e * e * e;
  } else {
    eps = parse_rational(a.eps);
  }
  SplitOptions opts;
  opts.max_nodes = a.max_nodes;
  auto r = split_uniform(inst, n, c, eps, opts);
  std::filesystem::create_directories(a.out_dir);
  Json files = Json::array();
  out.text << "N " << n << "\nc " << to_string(c) << "\neps " << to_string(eps) << "\nM " << r.trace.m << "\n";
  for (std::size_t i = 0; i < r.outputs.size(); ++i) {
    const auto path = (std::filesystem::path(a.out_dir) / ("output-" + std::to_string(i + 1) + ".csp")).string();
    write_file(path, r.outputs[i].to_text());
    files.push_back(path);
    out.text << "output " << path << "\n";
  }
  const auto trace = (std::filesystem::path(a.out_dir) / "trace.txt").string();
  write_file(trace, r.trace.to_text(inst));
  long splits = 0;
  for (const auto& node : r.trace.nodes) splits += node.outcome == SplitNode::Outcome::Split;
  out.text << "trace " << trace << "\nsplits " << splits << "\n";
  out.j["N"] = n;
  out.j["c"] = to_string(c);
  out.j["eps"] = to_string(eps);
  out.j["M"] = r.trace.m;
  out.j["outputs"] = files;
  out.j["trace"] = trace;
  out.j["splits"] = splits;
  return kOk;
}

struct ConsistencyArgs {
  std::string file, out_file;
  std::uint64_t m = 1;
  bool check = false;
};

int cmd_consistency(const ConsistencyArgs& a, Output& out) {
  CspInstance inst = load_csp(a.file);
  out.j["M"] = a.m;
  if (a.check) {
    auto small = enumerate_M_small(inst, a.m);
    auto v = find_consistency_violation(inst, small);
    out.j["consistent"] = !v.has_value();
    out.text << "consistent " << (v ? "no" : "yes") << "\n";
    if (v) {
      out.j["violation"] = {{"B", set_text(inst.names(), v->b)}, {"A", set_text(inst.names(), v->a)},
                            {"unextendable", v->unextendable.size()}};
      out.text << "violation B " << set_text(inst.names(), v->b) << " A " << set_text(inst.names(), v->a) << " unextendable "
               << v->unextendable.size() << "\n";
    }
    return v ? kFalse : kOk;
  }
  auto r = make_M_consistent(inst, a.m);
  out.j["constraints_added"] = r.constraints_added;
  if (!a.out_file.empty()) {
    write_file(a.out_file, r.instance.to_text());
    out.j["instance_file"] = a.out_file;
    out.text << "constraints-added " << r.constraints_added << "\ninstance " << a.out_file << "\n";
  } else {
    out.j["instance"] = Json::parse(r.instance.to_json());
    out.text << "# constraints added: " << r.constraints_added << "\n" << r.instance.to_text();
  }
  return kOk;
}

struct SmallSetsArgs {
  std::string file;
  std::uint64_t m = 1;
};

int cmd_small_sets(const SmallSetsArgs& a, Output& out) {
  CspInstance inst = load_csp(a.file);
  auto small = enumerate_M_small(inst, a.m);
  Json sets = Json::array();
  for (const auto& [s, sol] : small.sets) {
    Json names = Json::array();
    s.for_each([&](int v) { names.push_back(inst.name(v)); });
    sets.push_back({{"set", names}, {"solutions", sol.size()}});
    out.text << set_text(inst.names(), s) << " " << sol.size() << "\n";
  }
  out.j["M"] = a.m;
  out.j["sets"] = sets;
  return kOk;
}

struct PairArgs {
  std::string file, from, to;
};

int cmd_separator(const PairArgs& a, Output& out) {
  Hypergraph h = Hypergraph::load(a.file);
  auto r = min_fractional_separator(h, parse_set(h, a.from), parse_set(h, a.to));
  out.j["weight"] = to_string(r.weight);
  Json edges = Json::object();
  out.text << "weight " << to_string(r.weight) << "\n";
  for (int e = 0; e < h.edge_count(); ++e) {
    if (r.s[static_cast<std::size_t>(e)] == 0) continue;
    edges[h.edge_key(e)] = to_string(r.s[static_cast<std::size_t>(e)]);
    out.text << "edge " << h.edge_key(e) << " " << to_string(r.s[static_cast<std::size_t>(e)]) << "\n";
  }
  out.j["edges"] = edges;
  return kOk;
}

int cmd_flow(const PairArgs& a, Output& out) {
  Hypergraph h = Hypergraph::load(a.file);
  auto r = max_flow(h, parse_set(h, a.from), parse_set(h, a.to));
  out.j["value"] = to_string(r.value);
  out.j["paths"] = flow_json(h, r.flow);
  out.text << "value " << to_string(r.value) << "\n" << flow_text(h, r.flow);
  return kOk;
}

struct ConcurrentArgs {
  std::string file;
  std::vector<std::string> parts;
};

int cmd_concurrent_flow(const ConcurrentArgs& a, Output& out) {
  Hypergraph h = Hypergraph::load(a.file);
  std::vector<VertexSet> parts;
  for (const auto& p : a.parts) parts.push_back(parse_set(h, p));
  auto r = max_uniform_concurrent_flow(h, parts);
  out.j["epsilon"] = to_string(r.epsilon);
  out.text << "epsilon " << to_string(r.epsilon) << "\n";
  Json commodities = Json::array();
  for (std::size_t k = 0; k < r.pairs.size(); ++k) {
    auto [i, j] = r.pairs[k];
    commodities.push_back({{"pair", {i, j}}, {"paths", flow_json(h, r.flows[k])}});
    out.text << "pair " << i << " " << j << "\n" << flow_text(h, r.flows[k]);
  }
  out.j["commodities"] = commodities;
  Json duals = Json::object();
  for (int e = 0; e < h.edge_count(); ++e) {
    if (r.edge_duals[static_cast<std::size_t>(e)] == 0) continue;
    duals[h.edge_key(e)] = to_string(r.edge_duals[static_cast<std::size_t>(e)]);
    out.text << "dual " << h.edge_key(e) << " " << to_string(r.edge_duals[static_cast<std::size_t>(e)]) << "\n";
  }
  out.j["edge_duals"] = duals;
  return kOk;
}

struct RoundArgs {
  std::string file, from, to, oracle, separator;
};

int cmd_round_separator(const RoundArgs& a, Output& out) {
  Hypergraph h = Hypergraph::load(a.file);
  VertexSet x = parse_set(h, a.from), y = parse_set(h, a.to);
  auto b = SetFunctionOracle::load(a.oracle, h);
  EdgeWeights s = a.separator.empty() ? min_fractional_separator(h, x, y).s : load_edge_weights(a.separator, h);
  auto r = round_fractional_separator(h, x, y, s, b);
  out.j["separator"] = names_json(h, r.separator);
  out.j["cost"] = to_string(r.cost);
  out.j["b"] = to_string(r.b_value);
  out.j["weight"] = to_string(r.weight);
  out.j["threshold"] = to_string(r.threshold);
  out.text << "separator " << h.format(r.separator) << "\ncost " << to_string(r.cost) << "\nb " << to_string(r.b_value)
           << "\nweight " << to_string(r.weight) << "\nthreshold " << to_string(r.threshold) << "\n";
  return kOk;
}

struct BStarArgs {
  std::string file, oracle, set;
};

int cmd_bstar(const BStarArgs& a, Output& out) {
  Hypergraph h = Hypergraph::load(a.file);
  auto b = SetFunctionOracle::load(a.oracle, h);
  VertexSet z = a.set.empty() ? h.vertices() : parse_set(h, a.set);
  auto r = b_star(b, h, z);
  Json order = Json::array();
  std::string order_text;
  for (int v : r.ordering) {
    order.push_back(h.name(v));
    order_text += (order_text.empty() ? "" : " ") + h.name(v);
  }
  out.j["set"] = names_json(h, z);
  out.j["b"] = to_string(b(z));
  out.j["bstar"] = to_string(r.value);
  out.j["ordering"] = order;
  out.text << "set " << h.format(z) << "\nb " << to_string(b(z)) << "\nbstar " << to_string(r.value) << "\nordering "
           << order_text << "\n";
  return kOk;
}

struct DecomposeArgs {
  std::string file, oracle, w, lambda = "1/1000";
};

int cmd_decompose(const DecomposeArgs& a, const Global& g, Output& out) {
  Hypergraph h = Hypergraph::load(a.file);
  auto b = SetFunctionOracle::load(a.oracle, h);
  DecomposeOptions opts;
  opts.lambda = parse_rational(a.lambda);
  opts.connectivity.jobs = g.jobs;
  auto r = decompose_or_highly_connected(h, b, parse_rational(a.w), opts);
  if (r.decomposed) {
    out.j["outcome"] = "decomposition";
    out.j["width"] = to_string(r.width);
    out.j["decomposition"] = td_json(r.decomposition, h.names());
    out.text << "outcome decomposition\nwidth " << to_string(r.width) << "\n" << r.decomposition.to_text(h.names());
  } else {
    out.j["outcome"] = "connected";
    out.j["W"] = names_json(h, r.w);
    out.j["mu"] = weights_json(h, r.mu);
    out.j["lambda"] = to_string(opts.lambda);
    out.text << "outcome connected\nW " << h.format(r.w) << "\nlambda " << to_string(opts.lambda) << "\n"
             << weights_text(h, r.mu);
  }
  return kOk;
}

struct Sat2CspArgs {
  std::string file, out_file;
};

int cmd_sat2csp(const Sat2CspArgs& a, Output& out) {
  auto phi = CnfFormula::load_dimacs(a.file);
  auto csp = sat_to_csp(phi);
  if (!a.out_file.empty()) {
    const bool as_json = std::filesystem::path(a.out_file).extension() == ".json";
    write_file(a.out_file, as_json ? csp.to_json() + "\n" : csp.to_text());
    out.j["instance_file"] = a.out_file;
    out.text << "instance " << a.out_file << "\n";
  } else {
    out.j["instance"] = Json::parse(csp.to_json());
    out.text << csp.to_text();
  }
  out.j["variables"] = csp.variable_count();
  out.j["constraints"] = csp.constraints().size();
  return kOk;
}

struct EmbedArgs {
  std::string g_file, h_file, check, lambda = "1/2";
  int max_cliques = 6;
  bool no_trim = false;
};

int cmd_embed(const EmbedArgs& a, const Global& gl, Output& out) {
  Graph g = primal_graph(Hypergraph::load(a.g_file));
  Hypergraph h = Hypergraph::load(a.h_file);
  if (!a.check.empty()) {
    auto psi = Embedding::parse(read_file(a.check), g, h);
    auto rep = validate_embedding(g, h, psi);
    out.j["valid"] = rep.valid;
    out.text << "valid " << (rep.valid ? "yes" : "no") << "\n";
    if (!rep.valid) {
      out.j["violation"] = rep.violation;
      out.text << "violation " << rep.violation << "\n";
    }
    out.j["depths"] = depths_json(rep.depths);
    out.text << depths_text(rep.depths);
    return rep.valid ? kOk : kFalse;
  }
  ConstructOptions opts;
  opts.max_cliques = a.max_cliques;
  opts.trim = !a.no_trim;
  opts.line.jobs = gl.jobs;
  auto r = construct_embedding(g, h, parse_rational(a.lambda), opts);
  Json cliques = Json::array();
  for (const auto& c : r.cliques) cliques.push_back(names_json(h, c));
  out.j["embedding"] = r.embedding.to_text(g, h.names());
  out.j["depths"] = depths_json(r.depths);
  out.j["untrimmed_depths"] = depths_json(r.untrimmed);
  out.j["harvest"] = r.harvest;
  out.j["cliques"] = cliques;
  out.j["epsilon"] = to_string(r.epsilon);
  out.j["q"] = r.q;
  out.text << r.embedding.to_text(g, h.names()) << "# harvest " << r.harvest << "\n# cliques " << r.cliques.size()
           << "\n# epsilon " << to_string(r.epsilon) << "\n# q " << r.q << "\n";
  std::istringstream d(depths_text(r.depths));
  for (std::string line; std::getline(d, line);) out.text << "# " << line << "\n";
  return kOk;
}

struct SimulateArgs {
  std::string csp_file, h_file, psi_file, out_file;
};

int cmd_simulate(const SimulateArgs& a, Output& out) {
  CspInstance i1 = load_csp(a.csp_file);
  Hypergraph h = Hypergraph::load(a.h_file);
  Graph g = primal_graph(i1.hypergraph());
  auto psi = Embedding::parse(read_file(a.psi_file), g, h);
  auto sim = simulate_csp_via_embedding(i1, h, psi);
  Json sizes = Json::array();
  for (auto s : sim.relation_sizes) sizes.push_back(s);
  out.j["depths"] = depths_json(sim.depths);
  out.j["d1"] = sim.d1;
  out.j["relation_sizes"] = sizes;
  if (!a.out_file.empty()) {
    write_file(a.out_file, sim.instance.to_text());
    out.j["instance_file"] = a.out_file;
    out.text << "instance " << a.out_file << "\n" << depths_text(sim.depths) << "domain " << sim.instance.domain_size()
             << "\n";
  } else {
    out.j["instance"] = Json::parse(sim.instance.to_json());
    out.text << sim.instance.to_text();
  }
  return kOk;
}

struct TransferArgs {
  std::string g_file, h_file, psi_file, td_file;
};

int cmd_transfer(const TransferArgs& a, Output& out) {
  Graph g = primal_graph(Hypergraph::load(a.g_file));
  Hypergraph h = Hypergraph::load(a.h_file);
  auto psi = Embedding::parse(read_file(a.psi_file), g, h);
  auto t = TreeDecomposition::parse(read_file(a.td_file), h.names());
  auto rep = validate_decomposition(h, t);
  if (!rep.valid) throw DomainError("input decomposition invalid: " + rep.violation);
  auto moved = transfer_decomposition(g, h, psi, t);
  auto check = validate_decomposition(g, moved);
  const int q = embedding_depths(h, psi).edge_depth;
  auto mu = depth_weights(h, psi);
  Rational w;
  for (const auto& bag : t.bags) w = std::max(w, total(mu, bag));
  int widest = 0;
  for (const auto& bag : moved.bags) widest = std::max(widest, bag.size());
  out.j["valid"] = check.valid;
  out.j["q"] = q;
  out.j["mu_width"] = to_string(w);
  out.j["max_bag"] = widest;
  out.j["decomposition"] = td_json(moved, g.names);
  out.text << moved.to_text(g.names) << "# valid " << (check.valid ? "yes" : "no") << "\n# q " << q << "\n# mu-width "
           << to_string(w) << "\n# max-bag " << widest << "\n";
  return check.valid ? kOk : kFalse;
}

struct CheckArgs {
  std::string suite;
  int cases = 0;
};

int cmd_check(const CheckArgs& a, const Global& g, Output& out) {
  std::vector<std::string> names;
  if (a.suite == "all") {
    for (const auto& s : suite_catalog()) names.push_back(s.name);
  } else {
    names.push_back(suite_info(a.suite).name);
  }
  SuiteOptions opts;
  opts.seed = g.seed;
  opts.jobs = g.jobs;
  opts.cases = a.cases;
  bool all = true;
  Json reports = Json::array();
  for (const auto& name : names) {
    auto r = run_suite(name, opts);
    all &= r.passed();
    Json counters = Json::object();
    for (const auto& [k, v] : r.counters) counters[k] = v;
    reports.push_back({{"suite", r.name},
                       {"criterion", r.criterion},
                       {"title", r.title},
                       {"seed", r.seed},
                       {"passed", r.passed()},
                       {"cases", r.cases},
                       {"checks", r.checks},
                       {"failures", r.failures},
                       {"counters", counters},
                       {"messages", r.messages}});
    out.text << "suite " << r.name << " " << (r.passed() ? "PASS" : "FAIL") << " cases " << r.cases << " checks "
             << r.checks << " failures " << r.failures << "\n";
    for (const auto& [k, v] : r.counters) out.text << "  " << k << " " << v << "\n";
    for (const auto& m : r.messages) out.text << "  ! " << m << "\n";
  }
  out.j["passed"] = all;
  out.j["suites"] = reports;
  return all ? kOk : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subw: widths, submodular separators, uniform CSP splitting and reductions"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"human", "json"}));
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--jobs", g.jobs, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.fallthrough();

  WidthArgs width;
  auto* c_width = app.add_subcommand("width", "Width of a hypergraph with an optimal decomposition");
  c_width->add_option("hypergraph", width.file)->required();
  c_width->add_option("--measure", width.measure)->check(CLI::IsMember({"tw", "ghw", "fhw", "mu", "b"}));
  c_width->add_option("--weights", width.weights, "mu weights, `name value` lines");
  c_width->add_option("--oracle", width.oracle, "set-function spec for --measure b");
  c_width->add_option("--max-vertices", width.max_vertices);

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Decide a CSP given a bound c0 on subw");
  c_solve->add_option("csp", solve.file)->required();
  c_solve->add_option("--c0", solve.c0, "rational, or auto-fhw");
  c_solve->add_option("--max-split-nodes", solve.max_split_nodes);

  SplitArgs split;
  auto* c_split = app.add_subcommand("split", "Split a CSP into uniform refinements");
  c_split->add_option("csp", split.file)->required();
  c_split->add_option("--out-dir", split.out_dir)->required();
  c_split->add_option("--N", split.n, "default: largest relation (at least 2)");
  c_split->add_option("--c", split.c);
  c_split->add_option("--eps", split.eps, "default: 1/|V|^3");
  c_split->add_option("--max-nodes", split.max_nodes);

  ConsistencyArgs cons;
  auto* c_cons = app.add_subcommand("consistency", "Make a CSP M-consistent, or check it");
  c_cons->add_option("csp", cons.file)->required();
  c_cons->add_option("--M", cons.m)->required();
  c_cons->add_flag("--check", cons.check, "only report whether the instance is M-consistent");
  c_cons->add_option("--out", cons.out_file);

  SmallSetsArgs small;
  auto* c_small = app.add_subcommand("small-sets", "List the M-small variable sets");
  c_small->add_option("csp", small.file)->required();
  c_small->add_option("--M", small.m)->required();

  PairArgs sep;
  auto* c_sep = app.add_subcommand("separator", "Minimum fractional (X,Y)-separator");
  c_sep->add_option("hypergraph", sep.file)->required();
  c_sep->add_option("--from", sep.from)->required();
  c_sep->add_option("--to", sep.to)->required();

  PairArgs flow;
  auto* c_flow = app.add_subcommand("flow", "Maximum (X,Y)-flow");
  c_flow->add_option("hypergraph", flow.file)->required();
  c_flow->add_option("--from", flow.from)->required();
  c_flow->add_option("--to", flow.to)->required();

  ConcurrentArgs conc;
  auto* c_conc = app.add_subcommand("concurrent-flow", "Uniform concurrent flow between parts");
  c_conc->add_option("hypergraph", conc.file)->required();
  c_conc->add_option("--part", conc.parts, "repeat for each part")->required();

  RoundArgs round;
  auto* c_round = app.add_subcommand("round-separator", "Round a fractional separator into a vertex separator");
  c_round->add_option("hypergraph", round.file)->required();
  c_round->add_option("--from", round.from)->required();
  c_round->add_option("--to", round.to)->required();
  c_round->add_option("--oracle", round.oracle)->required();
  c_round->add_option("--separator", round.separator, "edge weights; default: a minimum fractional separator");

  BStarArgs bstar;
  auto* c_bstar = app.add_subcommand("bstar", "b* of a vertex set with an attaining ordering");
  c_bstar->add_option("hypergraph", bstar.file)->required();
  c_bstar->add_option("--oracle", bstar.oracle)->required();
  c_bstar->add_option("--set", bstar.set, "default: all vertices");

  DecomposeArgs dec;
  auto* c_dec = app.add_subcommand("decompose-or-connected", "Decomposition of small b*-width or a highly connected set");
  c_dec->add_option("hypergraph", dec.file)->required();
  c_dec->add_option("--oracle", dec.oracle)->required();
  c_dec->add_option("--w", dec.w)->required();
  c_dec->add_option("--lambda", dec.lambda);

  Sat2CspArgs s2c;
  auto* c_s2c = app.add_subcommand("sat2csp", "Binary CSP from a DIMACS 3-CNF formula");
  c_s2c->add_option("cnf", s2c.file)->required();
  c_s2c->add_option("--out", s2c.out_file);

  EmbedArgs embed;
  auto* c_embed = app.add_subcommand("embed", "Embed the primal graph of G into H, or check a given embedding");
  c_embed->add_option("graph", embed.g_file)->required();
  c_embed->add_option("hypergraph", embed.h_file)->required();
  c_embed->add_option("--check", embed.check, "embedding file to validate instead");
  c_embed->add_option("--lambda", embed.lambda);
  c_embed->add_option("--max-cliques", embed.max_cliques);
  c_embed->add_flag("--no-trim", embed.no_trim);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate a binary CSP on H through an embedding");
  c_sim->add_option("csp", sim.csp_file)->required();
  c_sim->add_option("hypergraph", sim.h_file)->required();
  c_sim->add_option("embedding", sim.psi_file)->required();
  c_sim->add_option("--out", sim.out_file);

  TransferArgs tr;
  auto* c_tr = app.add_subcommand("transfer", "Pull a decomposition of H back to G along an embedding");
  c_tr->add_option("graph", tr.g_file)->required();
  c_tr->add_option("hypergraph", tr.h_file)->required();
  c_tr->add_option("embedding", tr.psi_file)->required();
  c_tr->add_option("decomposition", tr.td_file)->required();

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Run a verification suite");
  std::vector<std::string> suites{"all"};
  for (const auto& s : suite_catalog()) suites.push_back(s.name);
  c_check->add_option("--suite", check.suite)->required()->check(CLI::IsMember(suites));
  c_check->add_option("--cases", check.cases, "case count (default: the suite's own)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Output out;
  int code = kOk;
  try {
    if (*c_width) code = cmd_width(width, out);
    else if (*c_solve) code = cmd_solve(solve, out);
    else if (*c_split) code = cmd_split(split, out);
    else if (*c_cons) code = cmd_consistency(cons, out);
    else if (*c_small) code = cmd_small_sets(small, out);
    else if (*c_sep) code = cmd_separator(sep, out);
    else if (*c_flow) code = cmd_flow(flow, out);
    else if (*c_conc) code = cmd_concurrent_flow(conc, out);
    else if (*c_round) code = cmd_round_separator(round, out);
    else if (*c_bstar) code = cmd_bstar(bstar, out);
    else if (*c_dec) code = cmd_decompose(dec, g, out);
    else if (*c_s2c) code = cmd_sat2csp(s2c, out);
    else if (*c_embed) code = cmd_embed(embed, g, out);
    else if (*c_sim) code = cmd_simulate(sim, out);
    else if (*c_tr) code = cmd_transfer(tr, out);
    else if (*c_check) code = cmd_check(check, g, out);
  } catch (const std::exception& e) {
    // message on stderr; JSON mode also gets a result object on stdout
    int failed = kUsage;
    std::string kind = "domain";
    std::string prefix = "subw: ";
    if (dynamic_cast<const ResourceError*>(&e)) {
      failed = kResource;
      kind = "resource";
      prefix = "subw: resource limit: ";
    } else if (dynamic_cast<const InternalError*>(&e)) {
      failed = kInternal;
      kind = "internal";
      prefix = "subw: internal error: ";
    }
    std::cerr << prefix << e.what() << "\n";
    if (g.json()) {
      Json err = Json::object();
      err["error"] = e.what();
      err["kind"] = kind;
      err["exit"] = failed;
      std::cout << err.dump(2) << "\n";
    }
    return failed;
  }
  if (g.json()) {
    out.j["exit"] = code;
    std::cout << out.j.dump(2) << "\n";
  } else {
    std::cout << out.text.str();
  }
  return code;
}
