#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "elmlab/scenario.hpp"

using namespace elmlab;

namespace {

int run(const std::string& args, const std::string& env = "")
{
  const std::string cmd = env + " " + ELM_LAB_BIN + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_tiny_scenario(const std::string& path, int max_iter = 2000)
{
  Scenario s = builtin_scenario("binary-05");
  s.id = "tiny";
  s.n_values = {10};
  s.lambda_values = {0.0};
  s.runs = 1;
  s.optimizer.starts = 2;
  s.optimizer.max_iterations = static_cast<std::size_t>(max_iter);
  std::ofstream(path) << to_json(s).dump(2);
}

}  // namespace

TEST_CASE("usage errors exit 1")
{
  CHECK(run("") == 1);
  CHECK(run("--bogus") == 1);
  CHECK(run("table --builtin binary-05") == 1);  // missing --out
  CHECK(run("frobnicate") == 1);
  CHECK(run("builtin no-such-thing") == 1);
  CHECK(run("table --builtin no-such-thing --out x.csv") == 1);
  CHECK(run("table --out x.csv") == 1);
  CHECK(run("table --builtin binary-05 --out x.csv --format xml") == 1);
}

TEST_CASE("builtin prints the documented scenario")
{
  CHECK(run("builtin binary-05") == 0);
  CHECK(nlohmann::json::parse(slurp("cli_stdout.txt")) == nlohmann::json::parse(to_json(builtin_scenario("binary-05")).dump()));
  CHECK(run("builtin figure1-right --out fig.json") == 0);
  CHECK(nlohmann::json::parse(slurp("fig.json")) == nlohmann::json::parse(to_json(builtin_curve("figure1-right")).dump()));
}

TEST_CASE("schema violations exit 1 with the field named")
{
  std::ofstream("bad.json") << R"({"k": 2, "theta_star": [0.5, 0.7]})";
  CHECK(run("table --scenario bad.json --out x.csv") == 1);
  CHECK(slurp("cli_stderr.txt").find("theta_star") != std::string::npos);
}

TEST_CASE("table runs report cells on stderr and write only the file")
{
  write_tiny_scenario("tiny.json");
  CHECK(run("table --scenario tiny.json --out tiny.csv") == 0);
  CHECK(slurp("cli_stdout.txt").empty());
  CHECK(slurp("cli_stderr.txt").find("N=10") != std::string::npos);
  const std::string csv = slurp("tiny.csv");
  CHECK(csv.rfind("scenario_id,lambda,N,", 0) == 0);
  CHECK(csv.find("tiny,0,10,1,") != std::string::npos);
}

TEST_CASE("seed precedence: flag over environment over file")
{
  write_tiny_scenario("tiny.json");
  auto seed_in = [](const std::string& path) { return nlohmann::json::parse(slurp(path))["scenario"]["seed"].get<int>(); };
  CHECK(run("table --scenario tiny.json --out a.json") == 0);
  CHECK(seed_in("a.json") == 7);
  CHECK(run("table --scenario tiny.json --out b.json", "ELM_LAB_SEED=11") == 0);
  CHECK(seed_in("b.json") == 11);
  CHECK(run("--seed 13 table --scenario tiny.json --out c.json", "ELM_LAB_SEED=11") == 0);
  CHECK(seed_in("c.json") == 13);
  CHECK(run("table --scenario tiny.json --out d.json --seed 17") == 0);
  CHECK(seed_in("d.json") == 17);
  CHECK(run("table --scenario tiny.json --out e.json", "ELM_LAB_SEED=abc") == 1);
}

TEST_CASE("runtime failures exit 2")
{
  write_tiny_scenario("starved.json", 2);
  CHECK(run("table --scenario starved.json --out s.csv") == 2);
  CHECK(slurp("cli_stderr.txt").find("lambda=0") != std::string::npos);
  write_tiny_scenario("tiny.json");
  CHECK(run("table --scenario tiny.json --out no_such_dir/t.csv") == 2);
}

TEST_CASE("curve subcommand")
{
  CHECK(run("curve --builtin figure1-left --out c.csv") == 0);
  const std::string csv = slurp("c.csv");
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 1 + 5 * 201);
  CHECK(run("curve --theta-star 0.3,0.7 --lambdas 0,1 --shape 3,7 --c-steps 11 --out c2.json") == 0);
  const auto j = nlohmann::json::parse(slurp("c2.json"));
  CHECK(j["series"].size() == 2);
  CHECK(j["c_grid"].size() == 11);
  CHECK(run("curve --theta-star 0.3,0.7 --lambdas 0,1 --shape 3 --out c3.csv") == 1);
}

TEST_CASE("audit subcommand")
{
  write_tiny_scenario("tiny.json");
  CHECK(run("audit --scenario tiny.json --out audit.json") == 0);
  const auto j = nlohmann::json::parse(slurp("audit.json"));
  CHECK(j["lambdas"][0].contains("a1_pass"));
}
