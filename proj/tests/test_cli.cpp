#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hydroham/cli/commands.hpp"

namespace cli = hydroham::cli;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string spec(const char* name) { return std::string(HYDROHAM_SPEC_DIR) + "/" + name; }

}  // namespace

TEST(CliExitCodes, SpecFiles) {
  const std::pair<const char*, int> cases[] = {
      {"nutku_h1.json", cli::kExitPass},          {"nutku_h1_mutated.json", cli::kExitFail},
      {"nutku_pencil_h1_h2.json", cli::kExitPass}, {"h2_hat.json", cli::kExitPass},
      {"nonsquare_metric.json", cli::kExitInvalid}, {"degenerate_metric.json", cli::kExitInvalid},
      {"misspelled_field.json", cli::kExitInvalid}, {"bad_expression.json", cli::kExitInvalid},
  };
  for (const auto& [file, code] : cases) {
    const Outcome o = run({"check", spec(file)});
    EXPECT_EQ(o.code, code) << file << "\n" << o.out << o.err;
  }
  EXPECT_EQ(run({"check", spec("does_not_exist.json")}).code, cli::kExitInvalid);
}

TEST(CliExitCodes, ReciprocalSpecs) {
  EXPECT_EQ(run({"reciprocal", spec("remark_reciprocal.json")}).code, cli::kExitPass);
  EXPECT_EQ(run({"reciprocal", spec("identity_currents.json")}).code, cli::kExitPass);
  const Outcome bad = run({"reciprocal", spec("nonconserved.json")});
  EXPECT_EQ(bad.code, cli::kExitFail);
  EXPECT_NE((bad.out + bad.err).find("is not conserved"), std::string::npos);
}

TEST(CliExitCodes, MisspelledFieldIsNamed) {
  const Outcome o = run({"check", spec("misspelled_field.json")});
  EXPECT_NE(o.err.find("sead"), std::string::npos) << o.err;
}

TEST(CliExitCodes, EveryPresetRuns) {
  for (const auto& name : cli::preset_names()) {
    const Outcome o = run({"preset", name, "--samples", "20"});
    const int expected = name == "remark-ops" ? cli::kExitFail : cli::kExitPass;
    EXPECT_EQ(o.code, expected) << name << "\n" << o.out << o.err;
  }
  EXPECT_EQ(run({"preset", "remark-ops", "--variant", "corrected", "--samples", "20"}).code, cli::kExitPass);
}

TEST(CliExitCodes, BadParameters) {
  EXPECT_EQ(run({"preset", "kg-family", "--k", "1/2"}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"preset", "kg-family", "--printed-exponent"}).code, cli::kExitFail);
  EXPECT_EQ(run({"preset", "h2-hat", "--c", "1,1,1"}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"preset", "h2-hat", "--b3", "0,0,0"}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"preset", "h2-hat", "--c", "3,4"}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"preset", "no-such-preset"}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"--help"}).code, cli::kExitPass);
}

TEST(CliJson, DocumentShape) {
  const Outcome o = run({"check", spec("nutku_h1.json"), "--json", "--samples", "30"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json doc = json::parse(o.out);
  for (const char* key : {"tool", "version", "command", "spec", "checks", "output", "passed", "wall_time_s"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["tool"], "hydroham-cli");
  EXPECT_EQ(doc["command"], "check");
  EXPECT_EQ(doc["spec"]["sample_plan"]["count"], 30);
  ASSERT_FALSE(doc["checks"].empty());
  for (const auto& c : doc["checks"]) {
    for (const char* key : {"name", "subject", "passed", "plan", "conditions"}) EXPECT_TRUE(c.contains(key)) << key;
    for (const auto& cond : c["conditions"]) {
      EXPECT_TRUE(cond["witness"].is_null() || cond["witness"].is_array());
      EXPECT_TRUE(cond["max_residual"].is_number());
    }
  }
}

TEST(CliJson, FailureCarriesWitness) {
  const Outcome o = run({"check", spec("nutku_h1_mutated.json"), "--json"});
  ASSERT_EQ(o.code, cli::kExitFail);
  const json doc = json::parse(o.out);
  EXPECT_FALSE(doc["passed"].get<bool>());
  bool seen = false;
  for (const auto& c : doc["checks"]) {
    for (const auto& cond : c["conditions"]) {
      if (!cond["passed"].get<bool>() && cond["evaluated"].get<bool>()) {
        seen = true;
        EXPECT_EQ(cond["witness"].size(), 2u);
        EXPECT_GE(cond["max_residual"].get<double>(), 1e-3);
      }
    }
  }
  EXPECT_TRUE(seen);
}

TEST(CliJson, EchoedSpecReproducesTheReport) {
  for (const char* file : {"nutku_h1.json", "h2_hat.json", "nutku_pencil_h1_h2.json"}) {
    const Outcome first = run({"check", spec(file), "--json", "--seed", "99", "--samples", "40"});
    const json doc = json::parse(first.out);
    const auto path = std::filesystem::temp_directory_path() / ("hydroham_echo_" + std::string(file));
    std::ofstream(path) << doc["spec"].dump(2);
    const Outcome second = run({"check", path.string(), "--json"});
    std::filesystem::remove(path);
    EXPECT_EQ(second.code, first.code) << file;
    EXPECT_EQ(json::parse(second.out)["checks"].dump(), doc["checks"].dump()) << file;
  }
}

TEST(CliJson, PresetEcho) {
  const Outcome o = run({"preset", "h1-theta", "--theta", "exp(r3)", "--json", "--samples", "10"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json doc = json::parse(o.out);
  EXPECT_EQ(doc["spec"]["preset"], "h1-theta");
  EXPECT_EQ(doc["spec"]["params"]["theta"], "exp(r3)");
  EXPECT_TRUE(doc["spec"].contains("plan"));
}

TEST(CliHuman, Format) {
  const Outcome o = run({"check", spec("nutku_h1_mutated.json")});
  EXPECT_NE(o.out.find("FAIL ["), std::string::npos);
  EXPECT_NE(o.out.find("overall: FAIL"), std::string::npos);
  EXPECT_EQ(o.out.find("\x1b["), std::string::npos);  // no color into a string stream
  const Outcome ok = run({"check", spec("nutku_h1.json")});
  EXPECT_NE(ok.out.find("PASS ["), std::string::npos);
  EXPECT_NE(ok.out.find("overall: PASS"), std::string::npos);
}

TEST(CliHuman, ReciprocalPrintsSpeeds) {
  const Outcome o = run({"preset", "reciprocal-remark", "--samples", "20"});
  ASSERT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("matches_expected"), std::string::npos);
}

TEST(CliJson, Deterministic) {
  auto once = [] {
    json doc = json::parse(run({"preset", "h2-hat", "--samples", "25", "--json"}).out);
    doc.erase("wall_time_s");
    return doc.dump();
  };
  EXPECT_EQ(once(), once());
}
