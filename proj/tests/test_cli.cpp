#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

const std::string cli = COEXIST_CLI_PATH;
const std::string spec_dir = COEXIST_SPEC_DIR;

struct RunResult {
  int code = -1;
  std::string out, err;
};

fs::path fresh_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("coexist-cli-" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run(const std::string& args, const fs::path& dir) {
  const fs::path so = dir / "stdout.txt", se = dir / "stderr.txt";
  const std::string cmd =
      cli + " " + args + " > " + so.string() + " 2> " + se.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(so);
  r.err = slurp(se);
  return r;
}

ojson read_report(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE_MESSAGE(bool(in), p.string());
  return ojson::parse(in);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// loads a bundled spec, lets the caller tweak it, and writes it to dir
fs::path mutate_spec(const std::string& base, const fs::path& dir,
                     const std::string& name,
                     const std::function<void(ojson&)>& tweak) {
  std::ifstream in(spec_dir + "/" + base);
  ojson j = ojson::parse(in);
  tweak(j);
  const fs::path p = dir / name;
  write_file(p, j.dump(2));
  return p;
}

bool notes_mention(const ojson& report, const std::string& needle) {
  for (const auto& n : report.at("notes"))
    if (n.get<std::string>().find(needle) != std::string::npos) return true;
  return false;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("unusable flags and specs exit with code 1") {
  const fs::path d = fresh_dir("errors");

  CHECK(run("", d).code == 1);                      // missing subcommand
  CHECK(run("frobnicate x.json", d).code == 1);     // unknown subcommand
  CHECK(run("solve", d).code == 1);                 // missing spec argument
  CHECK(run("certify " + (d / "missing.json").string(), d).code == 1);
  CHECK(run("certify " + (d / "missing.json").string(), d).err.find("cannot load") !=
        std::string::npos);

  write_file(d / "broken.json", "{ not json");
  const RunResult broken = run("certify " + (d / "broken.json").string(), d);
  CHECK(broken.code == 1);
  CHECK(broken.err.find("parse error") != std::string::npos);

  // several problems are reported together, not one at a time
  write_file(d / "multi.json",
             R"({"kind": "hammerstein", "bogus": 1,
                 "kernels": [{"kind": "dirichlet", "window": [0.8, 0.2]}],
                 "f": ["x1 + ("]})");
  const RunResult multi = run("certify " + (d / "multi.json").string(), d);
  CHECK(multi.code == 1);
  CHECK(multi.err.find("unknown field 'bogus'") != std::string::npos);
  CHECK(multi.err.find("'window' must satisfy") != std::string::npos);
  CHECK(multi.err.find("f[0]") != std::string::npos);

  // radius orderings are validated before any computation
  const fs::path bad_r = mutate_spec("hammerstein_system.json", d, "bad_r.json",
                                     [](ojson& j) { j["r"] = {16, 16}; });
  const RunResult ordered = run("certify " + bad_r.string(), d);
  CHECK(ordered.code == 1);
  CHECK(ordered.err.find("halfsum") != std::string::npos);

  // grid overrides are validated per problem kind
  CHECK(run("certify " + spec_dir + "/planar_annulus.json --grid 65", d).code == 1);
  CHECK(run("solve " + spec_dir + "/hammerstein_scalar.json --grid 64", d).code == 1);
  CHECK(run("solve " + spec_dir + "/philap_powers.json --grid 20", d).code == 1);

  // no report is written when the spec never loads
  CHECK(!fs::exists(d / "broken-report.json"));
}

TEST_CASE("version and help exit cleanly") {
  const fs::path d = fresh_dir("meta");
  const RunResult ver = run("--version", d);
  CHECK(ver.code == 0);
  CHECK(ver.out.find("0.1.0") != std::string::npos);
  const RunResult help = run("--help", d);
  CHECK(help.code == 0);
  CHECK(help.out.find("constants") != std::string::npos);
  CHECK(help.out.find("asymptotics") != std::string::npos);
}

TEST_CASE("constants: report schema, overrides, reference comparison") {
  const fs::path d = fresh_dir("constants");
  const RunResult r = run("constants " + spec_dir + "/hammerstein_system.json --out " +
                              d.string() + " --grid 129 --seed 11",
                          d);
  CHECK(r.code == 0);
  CHECK(r.out.find("d=8") != std::string::npos);

  const ojson rep = read_report(d / "hammerstein_system-report.json");
  CHECK(rep.at("tool").at("name") == "coexist");
  CHECK(rep.at("command") == "constants");
  CHECK(rep.at("spec-file") == "hammerstein_system.json");
  CHECK(rep.at("config").at("grid") == 129);   // override lands in the config echo
  CHECK(rep.at("config").at("seed") == 11);
  CHECK(rep.at("content-hash").get<std::string>().rfind("fnv1a:", 0) == 0);
  CHECK(rep.contains("timings-ms"));

  const ojson& kernels = rep.at("results").at("kernels");
  REQUIRE(kernels.size() == 2);
  CHECK(kernels[0].at("constants").at("d").get<double>() == doctest::Approx(8.0));
  CHECK(kernels[0].at("constants").at("nodes") == 129);
  CHECK(kernels[0].at("bounds").at("pass") == true);
  CHECK(kernels[0].at("reference-agrees") == true);

  // the second kernel's shipped S / Sc values disagree with the computed
  // integrals; the report must say so rather than silently pick one
  CHECK(kernels[1].at("reference-agrees") == false);
  CHECK(kernels[1].at("constants").at("S").get<double>() == doctest::Approx(0.25));
  bool s_flagged = false;
  for (const auto& row : kernels[1].at("reference-comparison"))
    if (row.at("name") == "S") {
      CHECK(row.at("reference").get<double>() == doctest::Approx(0.6875));
      CHECK(row.at("agrees") == false);
      s_flagged = true;
    }
  CHECK(s_flagged);
  CHECK(notes_mention(rep, "disagree"));
}

TEST_CASE("stable report form is byte-identical across runs") {
  const fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
  CHECK(run("certify " + spec_dir + "/planar_annulus.json --out " + d1.string(), d1).code == 0);
  CHECK(run("certify " + spec_dir + "/planar_annulus.json --out " + d2.string(), d2).code == 0);

  ojson r1 = read_report(d1 / "planar_annulus-report.json");
  ojson r2 = read_report(d2 / "planar_annulus-report.json");
  CHECK(r1.at("content-hash") == r2.at("content-hash"));
  r1.erase("timings-ms");
  r2.erase("timings-ms");
  CHECK(r1.dump(2) == r2.dump(2));
}

TEST_CASE("hammerstein certify reports the failing checks and exits 2") {
  const fs::path d = fresh_dir("certify");
  const RunResult r =
      run("certify " + spec_dir + "/hammerstein_system.json --out " + d.string(), d);
  CHECK(r.code == 2);
  CHECK(r.out.find("verdict: FAIL") != std::string::npos);

  const ojson rep = read_report(d / "hammerstein_system-report.json");
  const ojson& cert = rep.at("results").at("certificate");
  CHECK(cert.at("verdict") == "fail");
  CHECK(cert.at("checks").size() == 14);
  int fails = 0;
  for (const auto& ch : cert.at("checks")) {
    if (ch.at("pass") == true) continue;
    ++fails;
    const std::string name = ch.at("name").get<std::string>();
    CHECK((name == "M<=BR:J[2]" || name == "f>=0[2]"));
  }
  CHECK(fails == 2);
  CHECK(rep.at("results").at("predicted-index") == 1);
  const ojson pattern = rep.at("results").at("condition-pattern");
  CHECK(pattern[0] == "compress");
  CHECK(pattern[1] == "compress");
}

TEST_CASE("solve writes a localized solution, CSV and SVG") {
  const fs::path d = fresh_dir("solve");
  const RunResult r = run("solve " + spec_dir + "/hammerstein_system.json --out " +
                              d.string() + " --grid 129 --svg",
                          d);
  CHECK(r.code == 0);
  CHECK(r.out.find("converged") != std::string::npos);

  const ojson rep = read_report(d / "hammerstein_system-report.json");
  const ojson& solve = rep.at("results").at("solve");
  CHECK(solve.at("converged") == true);
  CHECK(solve.at("localized") == true);
  CHECK(solve.at("trivial")[0] == false);
  CHECK(solve.at("trivial")[1] == false);
  const double sup1 = solve.at("sup-norm")[0].get<double>();
  CHECK(sup1 > 2.5);
  CHECK(sup1 < 2.9);
  REQUIRE(solve.at("localization").size() == 4);
  CHECK(solve.at("localization")[0].at("name") == "halfsum>r[1]");

  const auto lines = split_lines(slurp(d / "hammerstein_system-solution.csv"));
  REQUIRE(lines.size() == 130);  // header + one row per node
  CHECK(lines[0] == "t,x1,x2");
  // values survive a text round trip exactly (17 significant digits)
  CHECK(std::strtod(lines[2].c_str(), nullptr) == 1.0 / 128);
  for (const auto& line : lines)
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
  // the Dirichlet component vanishes at both ends
  const auto x1_of = [](const std::string& line) {
    return std::strtod(line.c_str() + line.find(',') + 1, nullptr);
  };
  CHECK(x1_of(lines[1]) == 0.0);
  CHECK(x1_of(lines.back()) == 0.0);

  const std::string svg = slurp(d / "hammerstein_system-solution.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("scalar specs carry the single-component note") {
  const fs::path d = fresh_dir("scalar");
  const RunResult r = run("solve " + spec_dir + "/hammerstein_scalar.json --out " +
                              d.string() + " --grid 65",
                          d);
  CHECK(r.code == 0);

  const ojson rep = read_report(d / "hammerstein_scalar-report.json");
  CHECK(notes_mention(rep, "single-component"));
  CHECK(rep.at("results").at("solve").at("trivial")[1] == true);

  const auto lines = split_lines(slurp(d / "hammerstein_scalar-solution.csv"));
  REQUIRE(lines.size() == 66);
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto second_comma = lines[i].rfind(',');
    CHECK(std::strtod(lines[i].substr(second_comma + 1).c_str(), nullptr) == 0.0);
  }
}

TEST_CASE("numerical failures exit with code 3") {
  const fs::path d = fresh_dir("numfail");

  const fs::path stalled = mutate_spec(
      "hammerstein_system.json", d, "stalled.json",
      [](ojson& j) { j["solver"] = ojson{{"max-iter", 2}}; });
  const RunResult r1 = run("solve " + stalled.string() + " --out " + d.string() +
                               " --grid 65",
                           d);
  CHECK(r1.code == 3);
  CHECK(r1.out.find("NOT CONVERGED") != std::string::npos);
  CHECK(read_report(d / "stalled-report.json").at("results").at("solve").at("converged") ==
        false);

  write_file(d / "wild.json",
             R"json({"kind": "philap", "grid": 65,
                 "phi": [{"kind": "p-laplacian", "p": 1.5},
                         {"kind": "p-laplacian", "p": 1.5}],
                 "f": ["50 * (x1 + x2)", "50 * (x1 + x2)"]})json");
  const RunResult r2 = run("solve " + (d / "wild.json").string() + " --out " + d.string(), d);
  CHECK(r2.code == 3);
  const ojson rep = read_report(d / "wild-report.json");
  CHECK(rep.at("results").at("error").get<std::string>().find("diverged") !=
        std::string::npos);
}

TEST_CASE("asymptotics verdicts set the exit code") {
  const fs::path d = fresh_dir("asym");
  const RunResult good =
      run("asymptotics " + spec_dir + "/philap_powers.json --out " + d.string(), d);
  CHECK(good.code == 0);
  const ojson rep = read_report(d / "philap_powers-report.json");
  CHECK(rep.at("results").at("asymptotics").at("ratios-bounded") == true);
  CHECK(rep.at("results").at("asymptotics").at("diverges") == true);
  CHECK(rep.at("results").at("asymptotics").at("label") ==
        "numerical evidence, not a proof");

  const fs::path linear = mutate_spec(
      "philap_powers.json", d, "linear.json", [](ojson& j) {
        j["f"] = {"0.5 * (x1 + x2)", "0.5 * (x1 + x2)"};
        j.erase("search-small-r");
      });
  const RunResult bad = run("asymptotics " + linear.string() + " --out " + d.string(), d);
  CHECK(bad.code == 2);
  CHECK(read_report(d / "linear-report.json")
            .at("results")
            .at("asymptotics")
            .at("diverges") == false);
}

TEST_CASE("index reports the condition pattern and its sign") {
  const fs::path d = fresh_dir("index");
  const RunResult r =
      run("index " + spec_dir + "/hammerstein_system.json --out " + d.string(), d);
  CHECK(r.code == 0);
  const ojson rep = read_report(d / "hammerstein_system-report.json");
  CHECK(rep.at("results").at("predicted-index") == 1);
  CHECK(rep.at("results").at("expansive-count") == 0);
  CHECK(notes_mention(rep, "surrogate"));

  const fs::path mixed = mutate_spec("hammerstein_system.json", d, "mixed.json",
                                     [](ojson& j) { j["theorem"] = "mixed"; });
  const RunResult rm = run("index " + mixed.string() + " --out " + d.string(), d);
  CHECK(rm.code == 0);
  const ojson mrep = read_report(d / "mixed-report.json");
  CHECK(mrep.at("results").at("predicted-index") == -1);
  CHECK(mrep.at("results").at("expansive-count") == 1);
  CHECK(mrep.at("results").at("condition-pattern")[1] == "expand");

  const RunResult rp =
      run("index " + spec_dir + "/planar_annulus.json --out " + d.string(), d);
  CHECK(rp.code == 0);
  const ojson prep = read_report(d / "planar_annulus-report.json");
  CHECK(prep.at("results").at("per-component-index")[0] == 1);
  CHECK(prep.at("results").at("product-index") == 1);
  CHECK(prep.at("results").at("bump").at("component-index").at("degree") == 1);
}

TEST_CASE("philap solve runs the small-radius search first") {
  const fs::path d = fresh_dir("philap-solve");
  const RunResult r = run("solve " + spec_dir + "/philap_powers.json --out " +
                              d.string() + " --grid 129",
                          d);
  CHECK(r.code == 0);
  CHECK(r.out.find("small-radius search") != std::string::npos);

  const ojson rep = read_report(d / "philap_powers-report.json");
  CHECK(rep.at("results").at("small-r-search").at("found") == true);
  CHECK(rep.at("results").at("small-r-search").at("r").get<double>() == 0.015625);
  const ojson& solve = rep.at("results").at("solve");
  CHECK(solve.at("converged") == true);
  CHECK(solve.at("localized") == true);
  CHECK(solve.at("localization")[0].at("name") == "gamma>r[1]");

  const auto lines = split_lines(slurp(d / "philap_powers-solution.csv"));
  CHECK(lines.size() == 130);
}

TEST_CASE("full philap report includes refinement ratios near 4") {
  const fs::path d = fresh_dir("philap-report");
  const RunResult r = run("report " + spec_dir + "/philap_powers.json --out " +
                              d.string() + " --grid 257",
                          d);
  CHECK(r.code == 0);

  const ojson rep = read_report(d / "philap_powers-report.json");
  const ojson& ref = rep.at("results").at("refinement");
  CHECK(ref.at("grids")[0] == 65);
  CHECK(ref.at("grids")[2] == 257);
  for (int j = 0; j < 2; ++j) {
    const double ratio = ref.at("gamma-ratios")[j].get<double>();
    CAPTURE(j);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
  CHECK(rep.at("results").at("predicted-index") == 1);
  CHECK(notes_mention(rep, "surrogate"));
}
