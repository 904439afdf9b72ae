#include "novsym/report.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace novsym {

Json Report::to_json() const {
  Json j = Json::object();
  j["command"] = command;
  j["inputs"] = inputs;
  j["results"] = results;
  j["status"] = status;
  j["artifact_version"] = kArtifactVersion;
  return j;
}

namespace {

class FieldParser {
 public:
  FieldParser(const std::string& text, double x) : text_(text), x_(x) {}

  double run() {
    double v = expr();
    skip();
    if (pos_ != text_.size())
      throw std::invalid_argument("trailing input in field expression at " +
                                  std::to_string(pos_));
    return v;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double expr() {
    double v = eat('-') ? -term() : term();
    while (true) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }

  double term() {
    double v = factor();
    while (true) {
      if (eat('*'))
        v *= factor();
      else if (eat('/'))
        v /= factor();
      else
        return v;
    }
  }

  double factor() {
    double base = primary();
    if (eat('^')) return std::pow(base, factor());
    return base;
  }

  double primary() {
    skip();
    if (pos_ >= text_.size()) throw std::invalid_argument("unexpected end of field expression");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      double v = std::stod(text_.substr(pos_), &used);
      pos_ += used;
      return v;
    }
    if (c == '(') {
      ++pos_;
      double v = expr();
      if (!eat(')')) throw std::invalid_argument("missing ')' in field expression");
      return v;
    }
    if (c == '-') {
      ++pos_;
      return -primary();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (name == "x") return x_;
      if (name == "pi") return EIGEN_PI_LOCAL();
      if (!eat('(')) throw std::invalid_argument("unknown name in field expression: " + name);
      double arg = expr();
      if (!eat(')')) throw std::invalid_argument("missing ')' after " + name);
      if (name == "sin") return std::sin(arg);
      if (name == "cos") return std::cos(arg);
      if (name == "tan") return std::tan(arg);
      if (name == "exp") return std::exp(arg);
      if (name == "tanh") return std::tanh(arg);
      if (name == "sqrt") return std::sqrt(arg);
      if (name == "abs") return std::abs(arg);
      if (name == "log") return std::log(arg);
      throw std::invalid_argument("unknown function in field expression: " + name);
    }
    throw std::invalid_argument("unexpected character in field expression at " +
                                std::to_string(pos_));
  }

  static double EIGEN_PI_LOCAL() { return 3.14159265358979323846; }

  const std::string& text_;
  double x_;
  size_t pos_ = 0;
};

}  // namespace

double eval_field_expression(const std::string& text, double x) {
  return FieldParser(text, x).run();
}

}  // namespace novsym
