#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("entrodim_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }
  // stdout only; stderr goes to err.txt
  Run run(const std::string& args) const {
    std::string cmd = std::string(ENTRODIM_CLI_PATH) + " " + args + " 2>" + (dir / "err.txt").string();
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }
  std::string err() const {
    std::ifstream in(dir / "err.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

const char* kGolden = R"({"alphabet": 2, "transitions": [[1, 1], [1, 0]]})";

}  // namespace

TEST_CASE("cli: entropy envelope and determinism") {
  Sandbox sb;
  auto sys = sb.write("gm.json", kGolden);
  auto a = sb.run("entropy --system " + sys + " --depth 14");
  REQUIRE(a.code == 0);
  auto j = json::parse(a.out);
  CHECK(j["tool"] == "entrodim");
  CHECK(j["command"] == "entropy");
  CHECK(j["config"]["depth"] == 14);
  CHECK(std::abs(j["result"]["s_star"].get<double>() - std::log((1 + std::sqrt(5.0)) / 2)) < 0.05);
  auto b = sb.run("entropy --system " + sys + " --depth 14");
  CHECK(a.out == b.out);

  auto csv = sb.run("entropy --system " + sys + " --depth 10 --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("# entrodim ", 0) == 0);
  CHECK(csv.out.find("\n# config {") != std::string::npos);
  CHECK(csv.out.find("N,D,s_star,delta\n5,10,") != std::string::npos);
}

TEST_CASE("cli: config files and overrides") {
  Sandbox sb;
  auto sys = sb.write("gm.json", kGolden);
  auto cfg = sb.write("cfg.json", R"({"depth": 8, "kind": "spanning"})");
  auto r = sb.run("entropy --system " + sys + " --config " + cfg);
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["config"]["depth"] == 8);
  CHECK(j["config"]["kind"] == "spanning");
  // The command line wins over the file.
  auto o = sb.run("entropy --system " + sys + " --config " + cfg + " --depth 12");
  CHECK(json::parse(o.out)["config"]["depth"] == 12);
  auto bad = sb.write("bad.json", R"({"depth": 8, "colour": 1})");
  CHECK(sb.run("entropy --system " + sys + " --config " + bad).code == 2);
  CHECK(sb.err().find("bad.json:$.colour: unknown key") != std::string::npos);
}

TEST_CASE("cli: validation errors exit 2 with a path") {
  Sandbox sb;
  auto sys = sb.write("bad.json", R"({"alphabet": 2, "transitions": [[1, 1], [1, 3]]})");
  CHECK(sb.run("entropy --system " + sys).code == 2);
  CHECK(sb.err().find("bad.json:$.transitions[1][1]") != std::string::npos);
  CHECK(sb.run("entropy --system " + (sb.dir / "missing.json").string()).code == 2);
  auto junk = sb.write("junk.json", "{not json");
  CHECK(sb.run("entropy --system " + junk).code == 2);
  CHECK(sb.run("entropy --depth -3 --system " + sb.write("gm.json", kGolden)).code == 2);
  CHECK(sb.run("nosuchcommand").code == 2);
}

TEST_CASE("cli: vitali output is a fixed point") {
  Sandbox sb;
  auto sys = sb.write("gm.json", kGolden);
  auto fam = sb.write("fam.json",
                      R"({"balls": [{"center": [0, 1, 0], "order": 3}, {"center": [0, 1], "order": 1},
                                    {"center": [1, 0, 1], "order": 2}, {"center": [1, 0, 0], "order": 3}]})");
  auto first = sb.run("vitali --system " + sys + " --family " + fam);
  REQUIRE(first.code == 0);
  auto out = sb.write("v1.json", first.out);
  auto second = sb.run("vitali --system " + sys + " --family " + out);
  REQUIRE(second.code == 0);
  CHECK(json::parse(first.out)["result"] == json::parse(second.out)["result"]);
  CHECK(json::parse(first.out)["result"]["balls"].size() == 2);
}

TEST_CASE("cli: output file") {
  Sandbox sb;
  auto sys = sb.write("gm.json", kGolden);
  auto path = (sb.dir / "res.json").string();
  auto r = sb.run("entropy --system " + sys + " --depth 8 --out " + path);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  json j = json::parse(in);
  CHECK(j["command"] == "entropy");
}
