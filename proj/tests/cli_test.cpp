#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "redstate/cli.hpp"
#include "redstate/io.hpp"
#include "test_support.hpp"

using namespace redstate;
using namespace redstate::testing;
using io::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  Json doc() const { return Json::parse(out); }
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / "redstate_cli_test") {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const Json& doc) const {
    io::write_file(file(name), doc);
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST_CASE("feasible") {
  const auto r = call({"feasible", "--r", "3", "--m", "2"});
  CHECK(r.code == 0);
  CHECK(r.doc() == Json{{"k_min", 2}, {"k_max", 6}});
  CHECK(call({"feasible", "--r", "3", "--m", "2", "--extreme"}).doc() == Json{{"k_min", 2}, {"k_max", 3}});
  CHECK(call({"feasible", "--r", "3", "--m", "2", "--k", "7"}).code == 1);
  CHECK(call({"feasible", "--r", "3", "--m", "2", "--k", "6"}).code == 0);
  CHECK(call({"feasible", "--r", "0", "--m", "2"}).code == 2);
  CHECK(call({"feasible", "--m", "2"}).code == 2);
}

TEST_CASE("compat selects the decisive test by dimensions") {
  const auto bad = call({"compat", "--lambda", "1/3,1/3,1/3", "--mu", "0.5,0.1,0.1,0.1,0.1,0.1"});
  CHECK(bad.code == 1);
  CHECK(bad.doc()["method"] == "2x3");
  CHECK(bad.doc()["holds"] == false);
  CHECK(bad.doc()["necessary"]["holds"] == true);

  const auto two = call({"compat", "--lambda", "0.5,0.5", "--mu", "0.25,0.25,0.25,0.25"});
  CHECK(two.code == 0);
  CHECK(two.doc()["method"] == "2x2");
  CHECK(call({"compat", "--lambda", "1,0", "--mu", "0.25,0.25,0.25,0.25"}).code == 1);

  const auto wide = call({"compat", "--lambda", "0.5,0.5", "--mu", "0.3,0.3,0.1,0.1,0.1,0.1"});
  CHECK(wide.doc()["method"] == "necessary");
  CHECK(wide.doc()["m"] == 3);
  CHECK(wide.doc()["decisive"] == true);

  CHECK(call({"compat", "--lambda", "0.5,0.5", "--mu", "0.2,0.2,0.2,0.2,0.2"}).code == 2);
  CHECK(call({"compat", "--lambda", "0.5,x", "--mu", "0.5,0.5,0,0"}).code == 2);
}

TEST_CASE("approx reproduces the residual spectrum") {
  TempDir tmp;
  const auto sigma = tmp.write("sigma.json", io::matrix_to_json(diag({0.4, 0.3, 0.2, 0.1})));
  const auto r = call({"approx", sigma, "--k", "1", "--m", "2", "--emit-curve", tmp.file("curve.tsv")});
  REQUIRE(r.code == 0);
  const Json doc = r.doc();
  check_close(doc["residual_spectrum"].get<std::vector<double>>(), {0.2, 0.1, -0.15, -0.15}, 1e-12);
  CHECK(doc["norms"][2]["p"] == "inf");
  CHECK(doc["norms"][0]["value"].get<double>() == doctest::Approx(0.6));
  CHECK(std::filesystem::exists(tmp.file("curve.tsv")));
}

TEST_CASE("emitted matrices re-validate") {
  TempDir tmp;
  const auto sigma = tmp.write("sigma.json", io::matrix_to_json(identity(3) / 3.0));
  const std::vector<std::vector<std::string>> producers{
      {"purify", sigma, "--m", "3"},
      {"construct", sigma, "--m", "2", "--k", "4"},
      {"spectra-construct", "--lambda", "0.5,0.5", "--mu", "0.4,0.3,0.2,0.1"},
      {"construct23", "--lambda", "0.5,0.3,0.2", "--mu", "0.4,0.3,0.2,0.1,0,0"},
      {"ptrace", sigma, "--m", "1", "--side", "second"},
  };
  int i = 0;
  for (auto args : producers) {
    const std::string out = tmp.file("out" + std::to_string(i++) + ".json");
    args.insert(args.end(), {"-o", out});
    INFO(args[0]);
    REQUIRE(call(args).code == 0);
    const auto v = call({"validate", out});
    CHECK(v.code == 0);
    CHECK(v.doc()["valid"] == true);
  }
}

TEST_CASE("extreme and split") {
  TempDir tmp;
  const auto mixed = tmp.write("mixed.json", io::state_to_json(BipartiteState::from(identity(6) / 6.0, 2, 3)));
  const auto rep = call({"extreme", mixed, "--certificate", tmp.file("cert.json")});
  CHECK(rep.code == 0);
  CHECK(rep.doc()["is_extreme"] == false);
  const auto split = call({"split", mixed, "--certificate", tmp.file("cert.json")});
  REQUIRE(split.code == 0);
  const auto ranks = split.doc()["ranks"];
  CHECK(ranks[1].get<int>() < ranks[0].get<int>());
  CHECK(call({"split", mixed}).code == 0);

  const auto bad = tmp.write("bad.json", io::matrix_to_json(identity(6)));
  CHECK(call({"split", mixed, "--certificate", bad}).code == 3);

  const auto pure = tmp.write("pure.json", io::matrix_to_json(diag({1, 0, 0, 0})));
  CHECK(call({"extreme", pure, "--m", "2"}).doc()["is_extreme"] == true);
  CHECK(call({"split", pure, "--m", "2"}).code == 1);
}

TEST_CASE("validation failures exit 3 with an error object") {
  TempDir tmp;
  const auto neg = tmp.write("neg.json", io::matrix_to_json(diag({1.5, -0.5})));
  const auto r = call({"validate", neg});
  CHECK(r.code == 3);
  CHECK(r.out.empty());
  CHECK(Json::parse(r.err)["error"] == "not-psd");
  const auto trace = tmp.write("trace.json", io::matrix_to_json(diag({0.5, 0.2})));
  CHECK(call({"validate", trace}).code == 3);
  CHECK(call({"validate", tmp.file("missing.json")}).code == 2);
  CHECK(call({"validate", neg, "--m", "3"}).code == 3);
}

TEST_CASE("usage errors") {
  CHECK(call({}).code == 2);
  CHECK(call({"nonsense"}).code == 2);
  CHECK(call({"construct"}).code == 2);
  const auto help = call({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("demo-s5") != std::string::npos);
}

TEST_CASE("spectra from files and fractions") {
  TempDir tmp;
  const auto mu = tmp.write("mu.json", io::spectrum_to_json(std::vector{1. / 6, 1. / 6, 1. / 6, 1. / 6, 1. / 6, 1. / 6}));
  CHECK(call({"compat", "--lambda", "1/3, 1/3, 1/3", "--mu", "@" + mu}).code == 0);
  CHECK(call({"spectra-construct", "--lambda", "0.5,0.3,0.2", "--mu", "@" + mu}).code == 1);
}

TEST_CASE("sample and search are deterministic across job counts") {
  TempDir tmp;
  const auto sigma = tmp.write("sigma.json", io::matrix_to_json(identity(3) / 3.0));
  const auto a = call({"sample", sigma, "--m", "2", "--seed", "5", "--trials", "4"});
  const auto b = call({"sample", sigma, "--m", "2", "--seed", "5", "--trials", "4", "--jobs", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.doc()["samples"].size() == 4);
  for (const auto& s : a.doc()["samples"]) {
    const auto doc = io::document_from_json(s);
    CHECK(dist(partial_trace_first(doc.matrix, 2, 3), identity(3) / 3.0) <= 1e-9);
  }

  const auto diag4 = tmp.write("d.json", io::matrix_to_json(diag({0.4, 0.3, 0.2, 0.1})));
  const auto s1 = call({"search", diag4, "--m", "2", "--k", "1", "--seed", "1", "--trials", "3000"});
  const auto s2 = call({"search", diag4, "--m", "2", "--k", "1", "--seed", "1", "--trials", "3000", "--jobs", "2"});
  CHECK(s1.out == s2.out);
  CHECK(s1.doc()["min_norm"].get<double>() >= 0.6 - 1e-9);
}

TEST_CASE("seed defaults to the environment") {
  TempDir tmp;
  const auto sigma = tmp.write("sigma.json", io::matrix_to_json(identity(2) / 2.0));
  setenv("REDUCED_STATE_SEED", "11", 1);
  const auto env = call({"sample", sigma, "--m", "2"});
  unsetenv("REDUCED_STATE_SEED");
  const auto flag = call({"sample", sigma, "--m", "2", "--seed", "11"});
  CHECK(env.out == flag.out);
  CHECK(env.doc()["seed"] == 11);
  setenv("REDUCED_STATE_SEED", "abc", 1);
  CHECK(call({"sample", sigma, "--m", "2"}).code == 2);
  CHECK(call({"sample", sigma, "--m", "2", "--seed", "1"}).code == 0);
  unsetenv("REDUCED_STATE_SEED");
}

TEST_CASE("demo-s5") {
  const auto r = call({"demo-s5"});
  REQUIRE(r.code == 0);
  const Json doc = r.doc();
  CHECK(doc["spectra"]["predicate"] == "a2+a3 >= 1/3 >= a4+a5");
  for (const auto& ex : doc["spectra"]["examples"]) CHECK(ex["predicate"] == ex["compat_2x3"]);
  CHECK(doc["element_ranks"] == Json{{"k_min", 2}, {"k_max", 6}, {"verified", true}});
  CHECK(doc["extreme_ranks"] == Json{{"k_min", 2}, {"k_max", 3}, {"verified", true}});
}
