#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "bjkit/bs_witness.hpp"
#include "bjkit/certificate.hpp"
#include "bjkit/cstar.hpp"
#include "bjkit/error.hpp"
#include "bjkit/linalg.hpp"
#include "bjkit/ptp.hpp"

namespace bjkit::cli {
namespace {

using bjkit::json::Operand;
using bjkit::json::Request;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::invalid_argument, what); }

const Operand& operand(const Request& r, const char* key) {
  auto it = r.operands.find(key);
  if (it == r.operands.end()) fail(std::string("request is missing \"") + key + "\"");
  return it->second;
}

const SpaceSpec& space_of(const Request& r) {
  if (!r.space) fail("request is missing \"space\"");
  return *r.space;
}

Vec vec(const Request& r, const char* key) {
  const SpaceSpec& s = space_of(r);
  return Vec(s, operand(r, key).values);
}

struct Effective {
  double tol;
  std::uint64_t seed;
  int restarts;
  std::optional<int> rank_cap;
};

Effective effective(const Request& r, const Defaults& d) {
  Effective e{r.options.tol.value_or(d.tol), r.options.seed.value_or(d.seed), r.options.restarts.value_or(d.restarts),
              r.options.rank_cap ? r.options.rank_cap : d.rank_cap};
  if (!(e.tol > 0.0)) fail("tol must be positive");
  if (e.restarts < 0) fail("restarts must be nonnegative");
  return e;
}

Response dispatch(const Request& r, const Defaults& d) {
  const Effective opt = effective(r, d);
  Response out;
  const std::string& c = r.command;

  if (c == "check") {
    const Vec x = vec(r, "x"), y = vec(r, "y");
    const Verdict v = bj_margin(x, y, opt.tol);
    out.status = v.orthogonal ? "ok" : "not_orthogonal";
    out.payload = bjkit::json::encode(v, x.space.field());
    return out;
  }

  if (c == "witness") {
    const CMatrix s = operand(r, "S").matrix(), t = operand(r, "T").matrix();
    if (r.space) {
      if (!r.space->is_spectral() || r.space->n() != s.rows()) fail("witness needs a spectral space matching S and T");
      if (r.space->field() == Field::real && !(s.is_real() && t.is_real())) fail("complex matrices in a real space");
    }
    const BSChecked res = bs_witness_checked(s, t, opt.tol, opt.tol);
    out.status = res.result.witness ? "ok" : "not_orthogonal";
    out.payload = bjkit::json::encode(res.result);
    out.payload["direct"] = bjkit::json::encode(res.verdict, s.is_real() && t.is_real() ? Field::real : Field::complex);
    return out;
  }

  if (c == "certify") {
    const Vec x = vec(r, "x"), y = vec(r, "y");
    const CertifyResult res = certify(x, y, {opt.tol, opt.restarts, opt.seed});
    out.status = res.certificate ? "ok" : (res.inconsistency ? "inconclusive" : "not_orthogonal");
    out.payload = bjkit::json::encode(res, x.space.field());
    return out;
  }

  if (c == "verify") {
    const Vec x = vec(r, "x"), y = vec(r, "y");
    CMatrix g = operand(r, "G").matrix();
    const VerifyReport rep = verify_certificate(g, x, y, opt.tol, opt.restarts, opt.seed);
    out.status = rep.pass ? "ok" : "not_orthogonal";
    out.payload = bjkit::json::encode(rep);
    return out;
  }

  if (c == "cstar") {
    const Vec a = vec(r, "a"), b = vec(r, "b");
    const CStarResult res = cstar_certify(a, b, {opt.tol, opt.restarts, opt.seed});
    out.status = res.witness ? "ok" : (res.certify.inconsistency ? "inconclusive" : "not_orthogonal");
    out.payload = bjkit::json::encode(res);
    return out;
  }

  if (c == "pinorm") {
    if (!r.left || !r.right) fail("pinorm needs \"left\" and \"right\" spaces");
    CMatrix coeff = operand(r, "U").matrix();
    if (r.left->field() == Field::complex) coeff.set_field(Field::complex);
    const TensorElem u(*r.left, *r.right, std::move(coeff));
    const int cap = opt.rank_cap.value_or(static_cast<int>(u.coeff.rows() * u.coeff.cols()));
    const PiBounds b = pi_bounds(u, cap, opt.restarts, opt.seed);
    out.status = "ok";
    out.payload = bjkit::json::encode(b, u.left.field());
    return out;
  }

  fail(c.empty() ? std::string("request has no command") : "unknown command \"" + c + "\"");
}

Response error_response(const std::string& code, const std::string& message) {
  Response r;
  r.status = code == "inconclusive" ? "inconclusive" : "error";
  r.payload = {{"error", code}, {"message", message}};
  return r;
}

}  // namespace

int exit_code(const std::string& status) {
  if (status == "ok") return 0;
  if (status == "not_orthogonal") return 1;
  if (status == "inconclusive") return 2;
  return 3;
}

json encode(const Response& r) {
  json j = {{"status", r.status}, {"payload", r.payload}, {"timing_ms", r.timing_ms}, {"tool_version", BJKIT_VERSION}};
  if (r.id) j["id"] = *r.id;
  return j;
}

Response run(const Request& req, const Defaults& d) {
  const auto t0 = std::chrono::steady_clock::now();
  Response r;
  try {
    r = dispatch(req, d);
  } catch (const Error& e) {
    r = error_response(to_string(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    r = error_response("invalid_argument", e.what());
  }
  r.id = req.id;
  r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Response run_text(const std::string& text, const std::string& command, const Defaults& d) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = bjkit::json::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    return error_response("parse_error", "malformed JSON at line " + std::to_string(line) + ", column " +
                                             std::to_string(col) + ": " + e.what());
  }
  Request req;
  try {
    req = bjkit::json::decode_request(j);
  } catch (const Error& e) {
    return error_response(to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    return error_response("invalid_argument", e.what());
  }
  if (!command.empty()) {
    if (req.command.empty()) {
      req.command = command;
    } else if (req.command != command) {
      Response r = error_response("invalid_argument",
                                  "request command \"" + req.command + "\" differs from \"" + command + "\"");
      r.id = req.id;
      return r;
    }
  }
  return run(req, d);
}

std::vector<std::string> batch(const std::vector<std::string>& lines, const Defaults& d, int parallel) {
  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t\r") != std::string::npos) work.push_back(i);
  }
  std::vector<std::string> out(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < work.size(); k = next++) {
      out[k] = encode(run_text(lines[work[k]], "", d)).dump();
    }
  };
  const int n = std::max(1, std::min<int>(parallel, static_cast<int>(work.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

int main_entry(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Birkhoff-James orthogonality checks, witnesses and certificates"};
  std::string command, input = "-";
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts, rank_cap;
  int parallel = 1;
  app.add_option("command", command, "check | witness | certify | verify | cstar | pinorm | batch")
      ->required()
      ->check(CLI::IsMember({"check", "witness", "certify", "verify", "cstar", "pinorm", "batch"}));
  app.add_option("--input", input, "request file, or - for stdin");
  app.add_option("--tol", tol, "decision tolerance (default 1e-8)");
  app.add_option("--seed", seed, "random seed (default 0, or BJKIT_SEED)");
  app.add_option("--restarts", restarts, "multi-start count (default 64)");
  app.add_option("--rank-cap", rank_cap, "terms in tensor decompositions");
  app.add_option("--parallel", parallel, "batch workers")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", std::string(BJKIT_VERSION));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 3;
  }

  Defaults d;
  if (const char* env = std::getenv("BJKIT_SEED")) {
    try {
      d.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "bjkit: ignoring BJKIT_SEED=" << env << " (not an integer)\n";
    }
  }
  if (tol) d.tol = *tol;
  if (seed) d.seed = *seed;
  if (restarts) d.restarts = *restarts;
  d.rank_cap = rank_cap;

  std::string text;
  if (input == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(input, std::ios::binary);
    if (!f) {
      err << "bjkit: cannot read " << input << "\n";
      return 3;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }

  if (command == "batch") {
    std::vector<std::string> lines;
    std::istringstream ls(text);
    for (std::string line; std::getline(ls, line);) lines.push_back(line);
    for (const std::string& r : batch(lines, d, parallel)) out << r << '\n';
    return 0;
  }

  const Response r = run_text(text, command, d);
  if (r.status == "error") err << "bjkit: " << r.payload.value("message", std::string("error")) << "\n";
  out << encode(r).dump() << '\n';
  return exit_code(r.status);
}

}  // namespace bjkit::cli
