#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "planelie/autmap.hpp"
#include "planelie/liestruct.hpp"

namespace planelie {

using Json = nlohmann::ordered_json;

inline Scalar parse_scalar(const std::string& text) {
  Scalar q;
  if (q.set_str(text, 10) != 0 || q.get_den() == 0)
    throw ParseError(0, "a rational n/d", text);
  q.canonicalize();
  return q;
}

inline Json fields_json(const std::vector<VectorField>& fields) {
  Json out = Json::array();
  for (const auto& d : fields) out.push_back(to_string(d));
  return out;
}

inline Json etale_json(const EtaleMap& a) {
  return {{"f", to_string(a.f())}, {"g", to_string(a.g())}, {"jac", to_string(a.jac())}};
}

inline Json report_json(const ClassificationReport& r) {
  return {{"closed", r.closed},
          {"dim", r.dim},
          {"type_tag", std::string(to_string(r.type_tag))},
          {"radical_basis", fields_json(r.radical_basis)},
          {"levi_basis", fields_json(r.levi_basis)},
          {"recovered_map", r.recovered_map ? etale_json(*r.recovered_map) : Json(nullptr)},
          {"diagnostics", r.diagnostics}};
}

inline Json factor_json(const ElementaryFactor& factor) {
  if (const auto* a = std::get_if<AffineFactor>(&factor)) {
    Json m = Json::array();
    for (const auto& row : a->matrix) m.push_back({to_string(row[0]), to_string(row[1])});
    return {{"type", "affine"},
            {"matrix", m},
            {"translation", {to_string(a->translation[0]), to_string(a->translation[1])}}};
  }
  const auto& t = std::get<TriangularFactor>(factor);
  return {{"type", "triangular"}, {"var", t.var == Var::X ? "x" : "y"}, {"poly", to_string(t.p)}};
}

inline Json factorization_json(const ElementaryFactorization& fac) {
  Json out = Json::array();
  for (const auto& f : fac.factors) out.push_back(factor_json(f));
  return out;
}

inline ElementaryFactorization factorization_from_json(const Json& j) {
  ElementaryFactorization fac;
  for (const auto& f : j) {
    const std::string type = f.at("type");
    if (type == "affine") {
      AffineFactor a;
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c)
          a.matrix[r][c] = parse_scalar(f.at("matrix").at(r).at(c).get<std::string>());
        a.translation[r] = parse_scalar(f.at("translation").at(r).get<std::string>());
      }
      fac.factors.push_back(a);
    } else if (type == "triangular") {
      const Var var = f.at("var").get<std::string>() == "x" ? Var::X : Var::Y;
      fac.factors.push_back(TriangularFactor{var, parse_poly(f.at("poly").get<std::string>())});
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown factor type '" + type + "'");
    }
  }
  return fac;
}

inline Json decision_json(const AutomorphismDecision& d) {
  Json out{{"verdict", std::string(to_string(d.verdict))}};
  if (d.verdict == Verdict::Automorphism) {
    out["factorization"] = factorization_json(d.factorization);
  } else {
    out["reason"] = d.reason;
    out["state"] = {{"f", to_string(d.state.f)}, {"g", to_string(d.state.g)}};
  }
  return out;
}

}  // namespace planelie
