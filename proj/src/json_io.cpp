#include "bjkit/json_io.hpp"

#include <cmath>
#include <algorithm>
#include <limits>

#include "bjkit/error.hpp"

namespace bjkit::json {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::invalid_argument, what); }

Field decode_field(const json& j) {
  if (!j.contains("field")) return Field::real;
  const std::string f = j.at("field").get<std::string>();
  if (f == "real") return Field::real;
  if (f == "complex") return Field::complex;
  fail("field must be \"real\" or \"complex\", got \"" + f + "\"");
}

const char* field_name(Field f) { return f == Field::real ? "real" : "complex"; }

std::size_t positive(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() <= 0) {
    fail(std::string("space needs a positive integer \"") + key + "\"");
  }
  return j.at(key).get<std::size_t>();
}

bool is_pair(const json& j) { return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(); }

json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json encode_residuals(const CertificateResiduals& r) {
  return {{"hermitian_dev", number(r.hermitian_dev)},
          {"min_eig", number(r.min_eig)},
          {"norming_dev", number(r.norming_dev)},
          {"cross_dev", number(r.cross_dev)},
          {"bilinear_norm_lb", number(r.bilinear_norm_lb)},
          {"bilinear_norm_claimed", number(r.bilinear_norm_claimed)}};
}

double decode_number(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() && j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  fail(std::string(what) + " must be a number");
}

}  // namespace

SpaceSpec decode_space(const json& j) {
  if (!j.is_object() || !j.contains("kind")) fail("space must be an object with a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lp") {
    if (!j.contains("p")) fail("lp space needs \"p\"");
    const json& p = j.at("p");
    double pv = 0.0;
    if (p.is_string()) {
      if (p.get<std::string>() != "inf") fail("p must be a number >= 1 or \"inf\"");
      pv = std::numeric_limits<double>::infinity();
    } else if (p.is_number()) {
      pv = p.get<double>();
    } else {
      fail("p must be a number >= 1 or \"inf\"");
    }
    return SpaceSpec::lp(pv, positive(j, "dim"), decode_field(j));
  }
  if (kind == "spectral") return SpaceSpec::spectral(positive(j, "n"), j.contains("field") ? decode_field(j) : Field::complex);
  if (kind == "suminf") {
    if (!j.contains("left") || !j.contains("right")) fail("suminf space needs \"left\" and \"right\"");
    return SpaceSpec::sum_inf(decode_space(j.at("left")), decode_space(j.at("right")));
  }
  fail("unknown space kind \"" + kind + "\"");
}

json encode_space(const SpaceSpec& s) {
  switch (s.kind()) {
    case SpaceSpec::Kind::lp: {
      json p = std::isinf(s.p()) ? json("inf") : json(s.p());
      return {{"kind", "lp"}, {"p", p}, {"dim", s.dim()}, {"field", field_name(s.field())}};
    }
    case SpaceSpec::Kind::spectral:
      return {{"kind", "spectral"}, {"n", s.n()}, {"field", field_name(s.field())}};
    case SpaceSpec::Kind::suminf:
      return {{"kind", "suminf"}, {"left", encode_space(s.left())}, {"right", encode_space(s.right())}};
  }
  return nullptr;
}

cplx decode_scalar(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (is_pair(j)) return {j[0].get<double>(), j[1].get<double>()};
  fail("scalar must be a number or an [re, im] pair, got " + j.dump());
}

json encode_scalar(cplx z, Field field) {
  if (field == Field::real) return number(z.real());
  return json::array({number(z.real()), number(z.imag())});
}

Operand decode_operand(const json& j, bool matrix, std::optional<std::size_t> expected) {
  if (!j.is_array()) fail("operand must be an array");
  Operand o;
  auto push = [&](const json& e) {
    o.values.push_back(decode_scalar(e));
    o.pair_form.push_back(e.is_array());
  };
  // A list of two-number rows reads both as a matrix and as a list of
  // complex scalars; the expected coordinate count settles it.
  bool nested = matrix;
  if (!matrix && !j.empty() && j[0].is_array()) {
    nested = !is_pair(j[0]);
    if (!nested && expected && j.size() != *expected) {
      std::size_t count = 0;
      for (const json& row : j) count += row.is_array() ? row.size() : 1;
      nested = count == *expected;
    }
  }
  if (!nested) {
    for (const json& e : j) push(e);
    o.rows = o.values.size();
    o.cols = 1;
    return o;
  }
  o.nested = true;
  o.rows = j.size();
  o.cols = j.empty() ? 0 : j[0].size();
  for (const json& row : j) {
    if (!row.is_array() || row.size() != o.cols) fail("matrix rows must be arrays of equal length");
    for (const json& e : row) push(e);
  }
  return o;
}

json encode_operand(const Operand& o) {
  auto scalar = [&](std::size_t i) {
    return o.pair_form[i] ? json::array({number(o.values[i].real()), number(o.values[i].imag())})
                          : number(o.values[i].real());
  };
  json out = json::array();
  if (!o.nested) {
    for (std::size_t i = 0; i < o.values.size(); ++i) out.push_back(scalar(i));
    return out;
  }
  for (std::size_t r = 0; r < o.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < o.cols; ++c) row.push_back(scalar(r * o.cols + c));
    out.push_back(std::move(row));
  }
  return out;
}

CMatrix Operand::matrix() const {
  if (!nested) fail("expected a matrix given as nested rows");
  CMatrix m(rows, cols, values);
  if (m.is_real()) m.set_field(Field::real);
  return m;
}

json encode_vector(std::span<const cplx> v, Field field) {
  json out = json::array();
  for (const cplx& z : v) out.push_back(encode_scalar(z, field));
  return out;
}

json encode_matrix(const CMatrix& m, Field field) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(encode_vector(m.row(i), field));
  return out;
}

CMatrix decode_matrix(const json& j) { return decode_operand(j, true).matrix(); }

Request decode_request(const json& j) {
  if (!j.is_object()) fail("request must be a JSON object");
  Request r;
  if (j.contains("command")) r.command = j.at("command").get<std::string>();
  if (j.contains("id")) r.id = j.at("id");
  if (j.contains("space")) r.space = decode_space(j.at("space"));
  if (j.contains("left")) r.left = decode_space(j.at("left"));
  if (j.contains("right")) r.right = decode_space(j.at("right"));
  std::optional<std::size_t> dim;
  if (r.space) dim = r.space->dim();
  for (const char* key : {"x", "y", "a", "b"}) {
    if (j.contains(key)) r.operands.emplace(key, decode_operand(j.at(key), false, dim));
  }
  for (const char* key : {"S", "T", "G", "U"}) {
    if (j.contains(key)) r.operands.emplace(key, decode_operand(j.at(key), true));
  }
  if (j.contains("options")) {
    const json& o = j.at("options");
    if (!o.is_object()) fail("options must be an object");
    r.has_options = true;
    if (o.contains("tol")) r.options.tol = decode_number(o.at("tol"), "tol");
    if (o.contains("seed")) r.options.seed = o.at("seed").get<std::uint64_t>();
    if (o.contains("restarts")) r.options.restarts = o.at("restarts").get<int>();
    if (o.contains("rank_cap")) r.options.rank_cap = o.at("rank_cap").get<int>();
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const std::vector<std::string> known = {"command", "id", "space", "left", "right", "x", "y",
                                                   "a", "b", "S", "T", "G", "U", "options"};
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) fail("unknown request field \"" + it.key() + "\"");
  }
  return r;
}

json encode_request(const Request& r) {
  json j = json::object();
  if (!r.command.empty()) j["command"] = r.command;
  if (r.id) j["id"] = *r.id;
  if (r.space) j["space"] = encode_space(*r.space);
  if (r.left) j["left"] = encode_space(*r.left);
  if (r.right) j["right"] = encode_space(*r.right);
  for (const auto& [k, v] : r.operands) j[k] = encode_operand(v);
  if (r.has_options) {
    json o = json::object();
    if (r.options.tol) o["tol"] = *r.options.tol;
    if (r.options.seed) o["seed"] = *r.options.seed;
    if (r.options.restarts) o["restarts"] = *r.options.restarts;
    if (r.options.rank_cap) o["rank_cap"] = *r.options.rank_cap;
    j["options"] = o;
  }
  return j;
}

json encode(const Verdict& v, Field field) {
  return {{"orthogonal", v.orthogonal},
          {"borderline", v.borderline},
          {"margin", number(v.margin)},
          {"lambda_star", encode_scalar(v.lambda_star, field)},
          {"evaluations", v.evaluations},
          {"tol", number(v.tol)},
          {"norm_x", number(v.norm_x)}};
}

json encode(const BSResult& r) {
  json j = {{"exists", r.witness.has_value()},
            {"sigma_max", number(r.subspace.sigma_max)},
            {"subspace_dim", r.subspace.basis.cols()},
            {"gap", number(r.subspace.gap)},
            {"boundary_gap", number(r.range.boundary_gap)}};
  if (r.witness) {
    j["h"] = encode_vector(r.witness->h, Field::complex);
    j["attainment_residual"] = number(r.witness->attainment_residual);
    j["pairing_residual"] = number(r.witness->pairing_residual);
  }
  if (r.range.separating_angle) j["separating_angle"] = number(*r.range.separating_angle);
  return j;
}

json encode(const Certificate& c) {
  return {{"G", encode_matrix(c.g, c.space.field() == Field::real && c.g.is_real() ? Field::real : Field::complex)},
          {"space", encode_space(c.space)},
          {"residuals", encode_residuals(c.residuals)},
          {"stage", c.stage}};
}

Certificate decode_certificate(const json& j) {
  if (!j.is_object() || !j.contains("G") || !j.contains("space")) fail("certificate needs \"G\" and \"space\"");
  Certificate c{decode_matrix(j.at("G")), decode_space(j.at("space")), {}, "external"};
  if (j.contains("stage")) c.stage = j.at("stage").get<std::string>();
  if (j.contains("residuals")) {
    const json& r = j.at("residuals");
    auto get = [&](const char* k, double& dst) {
      if (r.contains(k)) dst = decode_number(r.at(k), k);
    };
    get("hermitian_dev", c.residuals.hermitian_dev);
    get("min_eig", c.residuals.min_eig);
    get("norming_dev", c.residuals.norming_dev);
    get("cross_dev", c.residuals.cross_dev);
    get("bilinear_norm_lb", c.residuals.bilinear_norm_lb);
    get("bilinear_norm_claimed", c.residuals.bilinear_norm_claimed);
  }
  return c;
}

json encode(const CertifyResult& r, Field field) {
  json j = {{"found", r.certificate.has_value()},
            {"search", to_string(r.search)},
            {"stages", r.stages_tried},
            {"direct", encode(r.verdict, field)}};
  if (r.certificate) j["certificate"] = encode(*r.certificate);
  if (r.inconsistency) j["inconsistency"] = *r.inconsistency;
  return j;
}

json encode(const VerifyReport& r) {
  json clauses = json::array();
  for (const Clause& c : r.clauses) {
    clauses.push_back({{"name", c.name}, {"pass", c.pass}, {"value", number(c.value)}, {"bound", number(c.bound)}});
  }
  json j = {{"pass", r.pass}, {"clauses", clauses}, {"norm_check", r.norm_check}};
  if (r.norm_upper) j["norm_upper"] = number(*r.norm_upper);
  if (r.implication) j["implication_margin"] = number(r.implication->margin);
  return j;
}

json encode(const CStarResult& r) {
  json j = {{"found", r.witness.has_value()}, {"direct", encode(r.certify.verdict, Field::complex)}};
  if (r.witness) {
    j["G"] = encode_matrix(r.witness->phi.g, Field::complex);
    j["space"] = encode_space(r.witness->phi.space);
    j["twist"] = "psi(u,v)=phi(u,v*)";
    j["residuals"] = {{"norming_dev", number(r.witness->residuals.norming_dev)},
                      {"cross_dev", number(r.witness->residuals.cross_dev)},
                      {"norm_lb", number(r.witness->residuals.norm_lb)}};
  }
  if (r.certify.inconsistency) j["inconsistency"] = *r.certify.inconsistency;
  return j;
}

json encode(const PiBounds& b, Field field) {
  json terms = json::array();
  for (const Term& t : b.decomposition) terms.push_back({{"x", encode_vector(t.x, field)}, {"y", encode_vector(t.y, field)}});
  return {{"lower", number(b.lower)},
          {"upper", number(b.upper)},
          {"decomposition", terms},
          {"dual_form", encode_matrix(b.dual_form, field)},
          {"upper_method", b.upper_method},
          {"lower_method", b.lower_method}};
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace bjkit::json
