#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "fex/certificate.hpp"
#include "fex/io.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(FEX_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

// minimal JSON-schema subset: type / required / properties / items
bool validates(const nlohmann::json& value, const nlohmann::json& schema);

bool type_matches(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "number") return v.is_number();
  if (t == "integer") return v.is_number_integer();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

bool validates(const nlohmann::json& value, const nlohmann::json& schema) {
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    if (t.is_string()) {
      if (!type_matches(value, t.get<std::string>())) return false;
    } else {
      bool any = false;
      for (const auto& alt : t)
        if (type_matches(value, alt.get<std::string>())) any = true;
      if (!any) return false;
    }
  }
  if (schema.contains("required"))
    for (const auto& k : schema["required"])
      if (!value.contains(k.get<std::string>())) return false;
  if (schema.contains("properties") && value.is_object())
    for (const auto& [k, sub] : schema["properties"].items())
      if (value.contains(k) && !validates(value[k], sub)) return false;
  if (schema.contains("items") && value.is_array())
    for (const auto& item : value)
      if (!validates(item, schema["items"])) return false;
  return true;
}

nlohmann::json load_schema(const std::string& name) {
  return nlohmann::json::parse(
      fex::read_file(std::string(FEX_SOURCE_DIR) + "/schemas/" + name));
}

}  // namespace

TEST_CASE("cli constant: covered case, unknown case, determinism, schema") {
  RunResult ok = run_cli("constant --alpha 2 --beta 1 --dim 1");
  CHECK(ok.exit_code == 0);
  auto j = nlohmann::json::parse(ok.out);
  CHECK(j["value"].get<double>() == doctest::Approx(8.44343e-3).epsilon(1e-5));
  CHECK(j["cross_check"]["rel_discrepancy"].get<double>() < 1e-8);
  CHECK(validates(j, load_schema("constant.schema.json")));

  RunResult again = run_cli("constant --alpha 2 --beta 1 --dim 1");
  CHECK(ok.out == again.out);  // byte-identical output

  RunResult unknown = run_cli("constant --alpha 1 --beta 3 --dim 1");
  CHECK(unknown.exit_code == 2);
  auto ju = nlohmann::json::parse(unknown.out);
  CHECK(ju["source"] == "Unknown");

  RunResult sphere = run_cli("constant --alpha 2 --beta 0.5 --dim 3");
  CHECK(sphere.exit_code == 0);
  auto js = nlohmann::json::parse(sphere.out);
  CHECK(js["lambda_beta"].get<double>() == doctest::Approx(0.18550482).epsilon(1e-6));

  CHECK(run_cli("constant --alpha -1 --beta 1 --dim 1").exit_code == 1);
  CHECK(run_cli("bogus-subcommand").exit_code == 1);
}

TEST_CASE("cli lambda: value and schema") {
  RunResult r = run_cli("lambda --beta 0.5");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["lambda"].get<double>() == doctest::Approx(0.18550482410).epsilon(1e-9));
  CHECK(j["residual_tan_form"].get<double>() < 1e-12);
  CHECK(validates(j, load_schema("lambda.schema.json")));
}

TEST_CASE("cli verify: bundled pairs and exit codes") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "fex_cli_test";
  fs::create_directories(dir);
  auto cert_path = (dir / "psi2.cert.json").string();
  auto tri_path = (dir / "triangle.measure.json").string();
  auto box_path = (dir / "box.measure.json").string();
  fex::write_file(cert_path, fex::certificate_to_json(fex::build_psi2()));
  fex::write_file(tri_path,
                  fex::measure_to_json(fex::RadialMeasure::exemplar(fex::Exemplar::Triangle)));
  fex::write_file(box_path,
                  fex::measure_to_json(fex::RadialMeasure::exemplar(fex::Exemplar::Box)));

  RunResult good = run_cli("verify --cert " + cert_path + " --measure " + tri_path +
                           " --alpha 1 --beta 2");
  CHECK(good.exit_code == 0);
  auto j = nlohmann::json::parse(good.out);
  CHECK(j["pass"].get<bool>());
  CHECK(validates(j, load_schema("verify.schema.json")));

  RunResult bad = run_cli("verify --cert " + cert_path + " --measure " + box_path +
                          " --alpha 1 --beta 2");
  CHECK(bad.exit_code == 4);

  auto broken_path = (dir / "broken.json").string();
  fex::write_file(broken_path, "{\"dim\": 1,,,");
  RunResult parse_fail = run_cli("verify --cert " + cert_path + " --measure " +
                                 broken_path + " --alpha 1 --beta 2");
  CHECK(parse_fail.exit_code == 1);
}

TEST_CASE("cli solve: small run emits a valid report") {
  RunResult r = run_cli(
      "solve --alpha 2 --beta 0.5 --dim 3 --n-radii 201 --max-cut-rounds 4");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "optimal");
  CHECK(j["constant_estimate"].get<double>() == doctest::Approx(0.11533).epsilon(0.02));
  CHECK(j["diagnostics"]["duality_pass"].get<bool>());
  CHECK(validates(j, load_schema("solve.schema.json")));
}

TEST_CASE("cli fourier and demo-signed emit CSV") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "fex_cli_test";
  fs::create_directories(dir);
  auto m_path = (dir / "sphere.measure.json").string();
  fex::write_file(m_path,
                  fex::measure_to_json(fex::RadialMeasure::exemplar(fex::Exemplar::UnitSphere3D)));
  RunResult r = run_cli("fourier --measure " + m_path + " --t-max 2 --points 8 --beta 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("freq,transform,weighted", 0) == 0);

  RunResult d = run_cli("demo-signed --beta 0.4 --modes 1 --trials 3 --seed 5");
  CHECK(d.exit_code == 0);
  // single mode: the ratio column is constant
  std::istringstream ss(d.out);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "num_modes,trial,ratio");
  std::vector<std::string> ratios;
  while (std::getline(ss, line)) ratios.push_back(line.substr(line.rfind(',') + 1));
  REQUIRE(ratios.size() == 3);
  CHECK(ratios[0] == ratios[1]);
  CHECK(ratios[1] == ratios[2]);
}

TEST_CASE("cli trig: all inequality checks pass and the report validates") {
  RunResult r = run_cli("trig");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["all_pass"].get<bool>());
  CHECK(j["g_beta1"].size() == 3);
  CHECK(j["g_general"].size() == 12);
  CHECK(validates(j, load_schema("trig.schema.json")));
}

TEST_CASE("cli config file: flags take precedence") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "fex_cli_test";
  fs::create_directories(dir);
  auto cfg = (dir / "lambda.cfg").string();
  std::ofstream(cfg) << "beta=0.25\n";
  RunResult from_cfg = run_cli("lambda --config " + cfg);
  CHECK(from_cfg.exit_code == 0);
  CHECK(nlohmann::json::parse(from_cfg.out)["beta"].get<double>() == 0.25);
  RunResult overridden = run_cli("lambda --config " + cfg + " --beta 0.75");
  CHECK(nlohmann::json::parse(overridden.out)["beta"].get<double>() == 0.75);
}
