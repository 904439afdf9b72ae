#ifndef NOVSYM_REPORT_HPP
#define NOVSYM_REPORT_HPP

#include <json.hpp>

#include <string>

namespace novsym {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Reports preserve insertion order so repeated runs serialize to
/// byte-identical payloads; no timestamps anywhere by design.
using Json = nlohmann::ordered_json;

struct Report {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  std::string status = "info";  // pass | fail | info

  Json to_json() const;
};

/// Evaluates a numeric initial-condition expression such as "2 + sin(x)" at
/// a point. Grammar: numbers, x, pi, + - * / ^, parentheses, and the
/// functions sin, cos, tan, exp, tanh, sqrt, abs, log.
double eval_field_expression(const std::string& text, double x);

}  // namespace novsym

#endif
