#pragma once

// Command-line front end: JSON requests in, one JSON response per line out.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bjkit/json_io.hpp"

namespace bjkit::cli {

using nlohmann::json;

struct Defaults {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int restarts = 64;
  std::optional<int> rank_cap;
};

struct Response {
  std::string status;  // ok | not_orthogonal | inconclusive | error
  json payload;
  double timing_ms = 0.0;
  std::optional<json> id;
};

int exit_code(const std::string& status);
json encode(const Response& r);

Response run(const bjkit::json::Request& req, const Defaults& d);
/// Parses one request (malformed JSON becomes an error response with a
/// line/column diagnostic) and runs it. A non-empty `command` must agree with
/// the request's own command field, or fills it in when absent.
Response run_text(const std::string& text, const std::string& command, const Defaults& d);

/// Runs newline-delimited requests with up to `parallel` workers; blank lines
/// are skipped and the output order follows the input order.
std::vector<std::string> batch(const std::vector<std::string>& lines, const Defaults& d, int parallel);

/// Whole program, with streams injected for testing.
int main_entry(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace bjkit::cli
