#pragma once

// JSON encodings of spaces, operands and results.
//
// Scalars are plain numbers (real) or [re, im] pairs. Decoded operands keep
// a per-entry record of which form was used and whether they were written as
// a flat list or as nested rows, so requests re-encode to the same JSON value.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bjkit/bs_witness.hpp"
#include "bjkit/certificate.hpp"
#include "bjkit/cstar.hpp"
#include "bjkit/ortho.hpp"
#include "bjkit/ptp.hpp"
#include "bjkit/space.hpp"

namespace bjkit::json {

using nlohmann::json;

SpaceSpec decode_space(const json& j);
json encode_space(const SpaceSpec& s);

cplx decode_scalar(const json& j);
json encode_scalar(cplx z, Field field);

struct Operand {
  std::vector<cplx> values;  // row-major for nested operands
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool nested = false;
  std::vector<bool> pair_form;  // entry i was written as [re, im]

  CMatrix matrix() const;  // nested operands only; Field::real when every imaginary part is 0
};

/// matrix: nested rows expected. Otherwise a flat list is assumed unless the
/// entries are rows, with `expected` resolving the two-number-row ambiguity.
Operand decode_operand(const json& j, bool matrix, std::optional<std::size_t> expected = std::nullopt);
json encode_operand(const Operand& o);

json encode_vector(std::span<const cplx> v, Field field);
json encode_matrix(const CMatrix& m, Field field);
CMatrix decode_matrix(const json& j);

struct Options {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> rank_cap;
};

struct Request {
  std::string command;
  std::optional<json> id;
  std::optional<SpaceSpec> space;
  std::optional<SpaceSpec> left, right;  // pinorm factors
  std::map<std::string, Operand> operands;
  Options options;
  bool has_options = false;
};

/// Throws bjkit::Error (invalid_argument) on schema violations.
Request decode_request(const json& j);
json encode_request(const Request& r);

json encode(const Verdict& v, Field field);
json encode(const BSResult& r);
json encode(const Certificate& c);
Certificate decode_certificate(const json& j);
json encode(const CertifyResult& r, Field field);
json encode(const VerifyReport& r);
json encode(const CStarResult& r);
json encode(const PiBounds& b, Field field);

/// Line and column (1-based) of a byte offset in text.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset);

}  // namespace bjkit::json
