#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "subw/csp.hpp"
#include "subw/decomposition.hpp"
#include "subw/reductions.hpp"

using namespace subw;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(SUBW_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(SUBW_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("subw-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string file(const std::string& name, const std::string& content) const {
    auto p = (path_ / name).string();
    std::ofstream(p) << content;
    return p;
  }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

// Reads `name value` lines after a given key.
std::string field(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  }
  return "";
}

}  // namespace

TEST(Cli, SingleEdgeTreewidthIsSizeMinusOne) {
  TempDir tmp;
  for (int r = 1; r <= 6; ++r) {
    std::string edge;
    for (int i = 0; i < r; ++i) edge += "u" + std::to_string(i) + " ";
    auto file = tmp.file("e" + std::to_string(r) + ".hg", edge + "\n");
    auto res = run("width " + file + " --measure tw");
    EXPECT_EQ(res.code, 0);
    EXPECT_EQ(field(res.out, "width"), std::to_string(r - 1));
  }
  EXPECT_EQ(field(run("width " + data("single-edge-3.hg")).out, "width"), "2");
}

TEST(Cli, WidthMeasuresOnFixtures) {
  EXPECT_EQ(field(run("width " + data("q1.hg") + " --measure ghw").out, "width"), "1");
  EXPECT_EQ(field(run("width " + data("q1.hg") + " --measure fhw").out, "width"), "1");
  EXPECT_EQ(field(run("width " + data("k4.hg") + " --measure tw").out, "width"), "3");
  EXPECT_EQ(field(run("width " + data("k4.hg") + " --measure fhw").out, "width"), "2");
  EXPECT_EQ(field(run("width " + data("fano.hg") + " --measure fhw").out, "width"), "7/3");
  EXPECT_EQ(field(run("width " + data("k4.hg") + " --measure mu --weights " + data("k4-mu.txt")).out, "width"), "2");
  EXPECT_EQ(field(run("width " + data("fano.hg") + " --measure b --oracle " + data("fano-modular.oracle")).out, "width"),
            "7/3");
  EXPECT_EQ(run("width " + data("k4.hg") + " --measure mu").code, 2);
}

TEST(Cli, WidthJsonDecompositionValidates) {
  auto res = run("--format json width " + data("grid3.hg") + " --measure tw");
  ASSERT_EQ(res.code, 0);
  auto j = nlohmann::json::parse(res.out);
  EXPECT_EQ(j["width"], "3");
  EXPECT_EQ(j["exit"], 0);
  Hypergraph h = Hypergraph::load(data("grid3.hg"));
  TreeDecomposition t;
  for (const auto& n : j["decomposition"]) {
    std::vector<std::string> bag = n["bag"];
    t.add_node(n["parent"].is_null() ? -1 : n["parent"].get<int>(), h.set_of(bag));
  }
  EXPECT_TRUE(validate_decomposition(h, t).valid);
  // the human form is the TD text format
  auto text = run("width " + data("grid3.hg") + " --measure tw").out;
  auto body = text.substr(text.find("node"));
  EXPECT_TRUE(validate_decomposition(h, TreeDecomposition::parse(body, h.names())).valid);
}

TEST(Cli, SolveVerdictsAndExitCodes) {
  auto unsat = run("solve " + data("csp-unsat.csp"));
  EXPECT_EQ(unsat.code, 1);
  EXPECT_EQ(field(unsat.out, "verdict"), "UNSAT");
  auto sat = run("solve " + data("csp-sat.csp") + " --c0 auto-fhw");
  EXPECT_EQ(sat.code, 0);
  EXPECT_EQ(field(sat.out, "verdict"), "SAT");
  auto inst = CspInstance::load(data("csp-sat.csp"));
  Assignment a(static_cast<std::size_t>(inst.universe_size()), kUnassigned);
  std::istringstream in(sat.out);
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    std::string key, var, value;
    ls >> key >> var >> value;
    if (key == "assign") a[static_cast<std::size_t>(inst.index_of(var))] = inst.value_index(value);
  }
  EXPECT_TRUE(inst.satisfies(a));
  EXPECT_EQ(run("solve " + data("csp-sat.csp") + " --c0 nonsense").code, 2);
}

TEST(Cli, UsageAndResourceErrors) {
  EXPECT_EQ(run("width " + data("k4.hg") + " --bogus").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("width /nonexistent/file.hg").code, 2);
  EXPECT_EQ(run("width " + data("k4.hg") + " --measure xx").code, 2);
  EXPECT_EQ(run("check --suite nope").code, 2);
  EXPECT_EQ(run("width " + data("k4.hg") + " --max-vertices 2").code, 3);
  EXPECT_EQ(run("--help").code, 0);
  for (const char* sub : {"width", "solve", "split", "consistency", "small-sets", "separator", "flow", "concurrent-flow",
                          "round-separator", "bstar", "decompose-or-connected", "sat2csp", "embed", "simulate",
                          "transfer", "check"}) {
    EXPECT_EQ(run(std::string(sub) + " --help").code, 0) << sub;
  }
}

TEST(Cli, JsonErrorsCarryKindAndExit) {
  auto res = run("--format json width " + data("k4.hg") + " --max-vertices 2");
  EXPECT_EQ(res.code, 3);
  auto j = nlohmann::json::parse(res.out);
  EXPECT_EQ(j["kind"], "resource");
  EXPECT_EQ(j["exit"], 3);
  auto missing = nlohmann::json::parse(run("--format json solve /nonexistent.csp").out);
  EXPECT_EQ(missing["kind"], "domain");
  EXPECT_EQ(missing["exit"], 2);
}

TEST(Cli, CheckSuiteTallyIsDeterministic) {
  auto a = run("--format json check --suite prop5.2 --cases 4 --seed 11");
  ASSERT_EQ(a.code, 0);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  ASSERT_EQ(j["suites"].size(), 1U);
  EXPECT_EQ(j["suites"][0]["failures"], 0);
  EXPECT_EQ(j["suites"][0]["cases"], 4);
  EXPECT_GT(j["suites"][0]["checks"].get<long>(), 0);
  auto b = run("--format json --jobs 3 check --suite prop5.2 --cases 4 --seed 11");
  EXPECT_EQ(a.out, b.out);
  auto c = run("--format json check --suite prop5.2 --cases 4 --seed 12");
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, EverySuitePassesAtDefaultSize) {
  // prop5.2 is exercised above; the rest are quick at their catalog sizes
  for (const char* s : {"widths", "duality", "rho-star", "rounding", "split", "uniform-b", "fpt", "decompose",
                        "sat-sim", "transfer"}) {
    auto r = run(std::string("check --suite ") + s + " --seed 3");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.rfind(std::string("suite ") + s + " PASS", 0), 0U) << r.out;
  }
}

TEST(Cli, SplitWritesNumberedOutputsAndTrace) {
  TempDir tmp;
  auto csp = tmp.file("skewed.csp", "var x y\ndomain 0 1 2 3\nconstraint x y\n  0 0\n  0 1\n  0 2\n  0 3\n  1 0\n  2 0\n  3 0\nend\n");
  auto res = run("split " + csp + " --out-dir " + (tmp / "out") + " --N 7 --c 1 --eps 1/4");
  ASSERT_EQ(res.code, 0);
  auto inst = CspInstance::load(csp);
  std::vector<Tuple> all;
  int k = 0;
  while (fs::exists(tmp / ("out/output-" + std::to_string(k + 1) + ".csp"))) {
    ++k;
    auto o = CspInstance::load(tmp / ("out/output-" + std::to_string(k) + ".csp"));
    // output files name the same variables and values
    for (const auto& t : all_solutions(o).tuples) {
      Tuple named;
      for (int v : t) named.push_back(inst.value_index(o.domain()[static_cast<std::size_t>(v)]));
      all.push_back(named);
    }
  }
  EXPECT_GE(k, 2);
  EXPECT_EQ(field(res.out, "splits") != "0", true);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, all_solutions(inst).tuples);
  auto trace = slurp(tmp / "out/trace.txt");
  EXPECT_NE(trace.find("split node 0"), std::string::npos);
}

TEST(Cli, ConsistencyAndSmallSets) {
  auto check = run("consistency " + data("csp-sat.csp") + " --M 2 --check");
  EXPECT_EQ(check.code, 1);
  EXPECT_EQ(field(check.out, "consistent"), "no");
  TempDir tmp;
  auto made = run("consistency " + data("csp-sat.csp") + " --M 2 --out " + (tmp / "c.csp"));
  EXPECT_EQ(made.code, 0);
  EXPECT_EQ(run("consistency " + (tmp / "c.csp") + " --M 2 --check").code, 0);
  auto small = run("small-sets " + data("csp-sat.csp") + " --M 1");
  EXPECT_EQ(small.code, 0);
  EXPECT_NE(small.out.find("{x1} 1"), std::string::npos);
  EXPECT_EQ(small.out.find("{x2}"), std::string::npos);
}

TEST(Cli, FlowEqualsSeparator) {
  for (const auto& [file, from, to] : std::vector<std::tuple<std::string, std::string, std::string>>{
           {"grid3.hg", "a1", "c3"}, {"k4.hg", "A", "D"}, {"q1.hg", "A,B", "I"}, {"fano.hg", "1", "7"}}) {
    auto f = nlohmann::json::parse(run("--format json flow " + data(file) + " --from " + from + " --to " + to).out);
    auto s = nlohmann::json::parse(run("--format json separator " + data(file) + " --from " + from + " --to " + to).out);
    EXPECT_EQ(f["value"], s["weight"]) << file;
  }
}

TEST(Cli, SubmodularCommands) {
  auto cf = run("concurrent-flow " + data("k4.hg") + " --part A --part B --part C");
  EXPECT_EQ(field(cf.out, "epsilon"), "1/3");
  auto rs = nlohmann::json::parse(
      run("--format json round-separator " + data("path4.hg") + " --from A --to D --oracle " + data("path4-coverage.oracle"))
          .out);
  Rational cost(rs["cost"].get<std::string>()), weight(rs["weight"].get<std::string>());
  EXPECT_LE(cost, 31 * weight);
  auto bs = run("bstar " + data("path4.hg") + " --oracle " + data("path4-coverage.oracle") + " --set A,C");
  EXPECT_EQ(field(bs.out, "bstar"), "3/2");
  auto dc = run("decompose-or-connected " + data("fano.hg") + " --oracle " + data("fano-modular.oracle") + " --w 1/2");
  EXPECT_EQ(dc.code, 0);
  EXPECT_EQ(field(dc.out, "outcome"), "connected");
  auto dd = run("decompose-or-connected " + data("path4.hg") + " --oracle " + data("path4-coverage.oracle") + " --w 1");
  EXPECT_EQ(field(dd.out, "outcome"), "decomposition");
}

TEST(Cli, Sat2CspJsonRoundTrips) {
  auto res = run("--format json sat2csp " + data("sat.cnf"));
  ASSERT_EQ(res.code, 0);
  auto j = nlohmann::json::parse(res.out);
  auto inst = CspInstance::from_json(j["instance"].dump());
  EXPECT_EQ(inst, sat_to_csp(CnfFormula::load_dimacs(data("sat.cnf"))));
  TempDir tmp;
  ASSERT_EQ(run("sat2csp " + data("sat.cnf") + " --out " + (tmp / "s.json")).code, 0);
  EXPECT_EQ(run("solve " + (tmp / "s.json")).code, 0);
  ASSERT_EQ(run("sat2csp " + data("unsat.cnf") + " --out " + (tmp / "u.csp")).code, 0);
  EXPECT_EQ(run("solve " + (tmp / "u.csp")).code, 1);
}

TEST(Cli, EmbedSimulateTransferPipeline) {
  const std::string g = data("sim-triangle.hg"), h = data("grid3.hg"), psi = data("sim-triangle-grid3.emb");
  auto chk = run("embed " + g + " " + h + " --check " + psi);
  EXPECT_EQ(chk.code, 0);
  EXPECT_EQ(field(chk.out, "valid"), "yes");
  TempDir tmp;
  auto bad = tmp.file("bad.emb", "vertex: g1 -> {a1}\nvertex: g2 -> {c3}\nvertex: g3 -> {a1}\n");
  EXPECT_EQ(run("embed " + g + " " + h + " --check " + bad).code, 1);

  auto built = run("embed " + g + " " + h);
  ASSERT_EQ(built.code, 0);
  auto emb = tmp.file("built.emb", built.out);
  EXPECT_EQ(run("embed " + g + " " + h + " --check " + emb).code, 0);

  ASSERT_EQ(run("simulate " + data("sim-triangle.csp") + " " + h + " " + psi + " --out " + (tmp / "i2.csp")).code, 0);
  EXPECT_EQ(run("solve " + (tmp / "i2.csp")).code, 0);
  // two colours cannot colour a triangle, before or after simulation
  auto two = tmp.file("two.csp",
                      "var g1 g2 g3\ndomain 0 1\nconstraint g1 g2\n  0 1\n  1 0\nend\nconstraint g2 g3\n  0 1\n  1 0\nend\n"
                      "constraint g1 g3\n  0 1\n  1 0\nend\n");
  ASSERT_EQ(run("simulate " + two + " " + h + " " + psi + " --out " + (tmp / "i2u.csp")).code, 0);
  EXPECT_EQ(run("solve " + (tmp / "i2u.csp")).code, 1);

  auto tr = nlohmann::json::parse(run("--format json transfer " + g + " " + h + " " + psi + " " + data("grid3.td")).out);
  EXPECT_TRUE(tr["valid"].get<bool>());
  EXPECT_LE(Rational(tr["max_bag"].get<int>()), tr["q"].get<int>() * Rational(tr["mu_width"].get<std::string>()));
}

TEST(Cli, OutputsAreByteIdentical) {
  for (const std::string& args : std::vector<std::string>{
           "width " + data("fano.hg") + " --measure fhw", "solve " + data("csp-sat.csp"),
        "--format json embed " + data("sim-triangle.hg") + " " + data("grid3.hg"),
        "--format json check --suite sat-sim --cases 40 --seed 5"}) {
    auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, CacheDirectoryReusesWidthResults) {
  TempDir tmp;
  const std::string env = "SUBW_CACHE_DIR=" + (tmp / "cache");
  auto first = run("width " + data("fano.hg") + " --measure fhw", env);
  ASSERT_EQ(first.code, 0);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(tmp / "cache")) ++files;
  EXPECT_EQ(files, 1U);
  auto second = run("width " + data("fano.hg") + " --measure fhw", env);
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(first.out, run("width " + data("fano.hg") + " --measure fhw").out);
}
