#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace cli = bjkit::cli;
using bjkit::Certificate;
using nlohmann::json;

namespace {

std::vector<std::string> read_lines(const std::string& name) {
  std::ifstream f(std::string(BJKIT_FIXTURE_DIR) + "/" + name);
  REQUIRE(f.good());
  std::vector<std::string> out;
  for (std::string line; std::getline(f, line);) out.push_back(line);
  return out;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "bjkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

json first_response(const Run& r) { return json::parse(r.out.substr(0, r.out.find('\n'))); }

// the response minus its wall-clock timing
json stable(json r) {
  r.erase("timing_ms");
  return r;
}

}  // namespace

TEST_CASE("documented single requests") {
  SUBCASE("check on an orthonormal pair") {
    const Run r = invoke({"check"}, R"({"command":"check","space":{"kind":"lp","p":2.0,"dim":2,"field":"real"},"x":[1,0],"y":[0,1]})");
    CHECK(r.code == 0);
    const json j = first_response(r);
    CHECK(j["status"] == "ok");
    CHECK(j["payload"]["margin"].get<double>() == 0.0);
    CHECK(j.contains("tool_version"));
    CHECK(j.contains("timing_ms"));
  }
  SUBCASE("certify on a parallel pair") {
    const Run r = invoke({"certify"}, R"({"command":"certify","space":{"kind":"lp","p":2.0,"dim":2,"field":"real"},"x":[1,0],"y":[1,0]})");
    CHECK(r.code == 1);
    const json j = first_response(r);
    CHECK(j["status"] == "not_orthogonal");
    // real space, so lambda* is a plain number
    CHECK(j["payload"]["direct"]["lambda_star"].is_number());
  }
  SUBCASE("witness for I and diag(1,-1)") {
    const Run r = invoke({"witness"},
                         R"({"command":"witness","space":{"kind":"spectral","n":2,"field":"complex"},"S":[[1,0],[0,1]],"T":[[1,0],[0,-1]]})");
    CHECK(r.code == 0);
    const json j = first_response(r);
    CHECK(j["status"] == "ok");
    const json h = j["payload"]["h"];
    REQUIRE(h.size() == 2);
    for (const json& z : h) {
      const double re = z.is_array() ? z[0].get<double>() : z.get<double>();
      const double im = z.is_array() ? z[1].get<double>() : 0.0;
      CHECK(std::hypot(re, im) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    }
  }
}

TEST_CASE("the command can come from the argument alone") {
  const Run r = invoke({"check"}, R"({"space":{"kind":"lp","p":"inf","dim":2,"field":"real"},"x":[1,1],"y":[1,-1]})");
  CHECK(r.code == 0);
  const Run bad = invoke({"certify"}, R"({"command":"check","space":{"kind":"lp","p":2,"dim":2,"field":"real"},"x":[1,0],"y":[0,1]})");
  CHECK(bad.code == 3);
}

TEST_CASE("errors exit with code 3") {
  SUBCASE("malformed JSON reports line and column") {
    const Run r = invoke({"check"}, "{\"command\":\"check\",\n \"x\": [1, 0,,]}");
    CHECK(r.code == 3);
    const json j = first_response(r);
    CHECK(j["status"] == "error");
    const std::string msg = j["payload"]["message"];
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
    CHECK_FALSE(r.err.empty());
  }
  SUBCASE("dimension mismatch") {
    const Run r = invoke({"check"}, R"({"space":{"kind":"lp","p":2,"dim":3,"field":"real"},"x":[1,0],"y":[0,1]})");
    CHECK(r.code == 3);
  }
  SUBCASE("unknown field") {
    const Run r = invoke({"check"}, R"({"space":{"kind":"lp","p":2,"dim":2,"field":"real"},"x":[1,0],"y":[0,1],"z":1})");
    CHECK(r.code == 3);
  }
  SUBCASE("x = 0") {
    const Run r = invoke({"check"}, R"({"space":{"kind":"lp","p":2,"dim":2,"field":"real"},"x":[0,0],"y":[0,1]})");
    CHECK(r.code == 3);
  }
  SUBCASE("unreadable batch file") {
    const Run r = invoke({"batch", "--input", "/nonexistent/requests.jsonl"});
    CHECK(r.code == 3);
  }
  SUBCASE("unknown command") { CHECK(invoke({"frobnicate"}).code == 3); }
}

TEST_CASE("exit codes follow the status") {
  CHECK(cli::exit_code("ok") == 0);
  CHECK(cli::exit_code("not_orthogonal") == 1);
  CHECK(cli::exit_code("inconclusive") == 2);
  CHECK(cli::exit_code("error") == 3);
}

TEST_CASE("fixture requests round-trip through decode and encode") {
  const auto lines = read_lines("requests.jsonl");
  REQUIRE(lines.size() >= 10);
  for (const std::string& line : lines) {
    const json j = json::parse(line);
    CHECK(bjkit::json::encode_request(bjkit::json::decode_request(j)) == j);
  }
}

TEST_CASE("fixture requests run with the expected statuses") {
  const auto lines = read_lines("requests.jsonl");
  const std::vector<std::string> want = {"ok", "not_orthogonal", "ok", "not_orthogonal", "ok",
                                         "not_orthogonal", "ok", "not_orthogonal", "ok", "not_orthogonal",
                                         "ok", "not_orthogonal", "ok", "ok"};
  REQUIRE(lines.size() == want.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const cli::Response r = cli::run_text(lines[i], "", {});
    INFO(lines[i]);
    CHECK(r.status == want[i]);
  }
}

TEST_CASE("ids are echoed") {
  const auto lines = read_lines("requests.jsonl");
  const json a = cli::encode(cli::run_text(lines[2], "", {}));
  CHECK(a["id"] == "l1-flat");
  const json b = cli::encode(cli::run_text(lines[5], "", {}));
  CHECK(b["id"] == 7);
}

TEST_CASE("payloads are deterministic for a fixed seed") {
  for (const std::string& line : read_lines("requests.jsonl")) {
    const std::string a = cli::encode(cli::run_text(line, "", {}))["payload"].dump();
    const std::string b = cli::encode(cli::run_text(line, "", {}))["payload"].dump();
    CHECK(a == b);
  }
}

TEST_CASE("certificates round-trip through their encoding") {
  const auto lines = read_lines("requests.jsonl");
  const json j = cli::encode(cli::run_text(lines[4], "", {}));
  REQUIRE(j["payload"]["found"] == true);
  const json cert = j["payload"]["certificate"];
  const Certificate c = bjkit::json::decode_certificate(cert);
  CHECK(bjkit::json::encode(c) == cert);
  CHECK(bjkit::json::encode(c).dump() == cert.dump());
}

TEST_CASE("a certificate from certify passes verify through the CLI") {
  const auto lines = read_lines("requests.jsonl");
  const json req = json::parse(lines[4]);
  const json cert = cli::encode(cli::run_text(lines[4], "", {}))["payload"]["certificate"];
  json v = {{"command", "verify"}, {"space", req["space"]}, {"G", cert["G"]}, {"x", req["x"]}, {"y", req["y"]}};
  const cli::Response r = cli::run_text(v.dump(), "", {});
  CHECK(r.status == "ok");
  CHECK(r.payload["pass"] == true);
}

TEST_CASE("batch keeps order and isolates failures") {
  const std::string path = std::string(BJKIT_FIXTURE_DIR) + "/batch_mixed.jsonl";
  for (const char* par : {"1", "3"}) {
    const Run r = invoke({"batch", "--input", path, "--parallel", par});
    CHECK(r.code == 0);
    std::istringstream ls(r.out);
    std::vector<json> out;
    for (std::string line; std::getline(ls, line);) out.push_back(json::parse(line));
    REQUIRE(out.size() == 3);
    CHECK(out[0]["status"] == "ok");
    CHECK(out[1]["status"] == "error");
    CHECK(out[2]["status"] == "not_orthogonal");
  }
}

TEST_CASE("parallel batch matches serial batch") {
  const auto lines = read_lines("requests.jsonl");
  const auto serial = cli::batch(lines, {}, 1);
  const auto parallel = cli::batch(lines, {}, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(stable(json::parse(serial[i])) == stable(json::parse(parallel[i])));
  }
}

TEST_CASE("empty batch file") {
  const Run r = invoke({"batch", "--input", std::string(BJKIT_FIXTURE_DIR) + "/empty.jsonl"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
}

TEST_CASE("flags set defaults and request options override them") {
  const std::string req = R"({"space":{"kind":"lp","p":2,"dim":2,"field":"real"},"x":[1,0],"y":[1e-3,1]})";
  // the margin is about -5e-7: orthogonal at tol 1e-6, not at 1e-8
  CHECK(invoke({"check", "--tol", "1e-6"}, req).code == 0);
  CHECK(invoke({"check", "--tol", "1e-8"}, req).code == 1);
  const std::string with_opt = R"({"space":{"kind":"lp","p":2,"dim":2,"field":"real"},"x":[1,0],"y":[1e-3,1],"options":{"tol":1e-6}})";
  CHECK(invoke({"check", "--tol", "1e-8"}, with_opt).code == 0);
}

TEST_CASE("version flag") {
  const Run r = invoke({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find(BJKIT_VERSION) != std::string::npos);
}
