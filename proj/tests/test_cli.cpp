#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sigmak_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(SIGMAK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

}  // namespace

TEST_CASE("profile command writes its tables") {
  const fs::path dir = scratch("profile");
  CHECK(run("--out " + dir.string() + " --n 2 --k 1 profile") == 0);
  const std::string checks = slurp(dir / "profile_checks.csv");
  CHECK(checks.rfind("check,value,bound,status\r\n", 0) == 0);
  CHECK(checks.find("first_integral_residual") != std::string::npos);
  CHECK(checks.find(",fail") == std::string::npos);
  CHECK(fs::exists(dir / "profile.csv"));
  CHECK(fs::exists(dir / "config.json"));
}

TEST_CASE("configuration errors exit with 2") {
  const fs::path dir = scratch("config");
  write(dir / "bad.json", "{\"n\": 2,");
  CHECK(run("--config " + (dir / "bad.json").string() + " --out " + dir.string() + " profile") == 2);
  write(dir / "unknown.json", "{\"nn\": 2}");
  CHECK(run("--config " + (dir / "unknown.json").string() + " --out " + dir.string() + " profile") == 2);
  write(dir / "type.json", "{\"n\": \"two\"}");
  CHECK(run("--config " + (dir / "type.json").string() + " --out " + dir.string() + " profile") == 2);
  CHECK(run("--out " + dir.string() + " --k 5 profile") == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("--config " + (dir / "missing.json").string() + " profile") == 2);
}

TEST_CASE("verify-all on a single criterion") {
  const fs::path dir = scratch("verify");
  CHECK(run("--out " + dir.string() + " verify-all --only 3") == 0);
  const std::string v = slurp(dir / "verify.json");
  CHECK(v.find("PASS") != std::string::npos);
}

TEST_CASE("plain cap-list form of F") {
  const fs::path dir = scratch("caps");
  write(dir / "caps.json",
        "{\"F\": {\"n\": 2, \"delta0\": 0.3, \"caps\": [{\"center\": [1, 0], \"radius\": 1.5707963267948966}]}}");
  CHECK(run("--config " + (dir / "caps.json").string() + " --out " + dir.string() + " semitrough") == 0);
  write(dir / "mismatch.json", "{\"F\": {\"n\": 3, \"delta0\": 0.3, \"caps\": [{\"center\": [1, 0, 0], \"radius\": 1.0}]}}");
  CHECK(run("--config " + (dir / "mismatch.json").string() + " --out " + dir.string() + " semitrough") == 2);
}
