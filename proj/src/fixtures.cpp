#include "novsym/fixtures.hpp"

#include "novsym/parser.hpp"

namespace novsym {

const Equation& novikov() {
  static const Equation eq = make_equation(
      "novikov", parse("u_t - u_txx + 4*u^2*u_x - 3*u*u_x*u_xx - u^2*u_xxx"),
      JetVar{"u", 1, 2});
  return eq;
}

const Equation& camassa_holm() {
  static const Equation eq = make_equation(
      "camassa-holm", parse("u_t + 2*kappa*u_x - u_txx + 3*u*u_x - 2*u_x*u_xx - u*u_xxx"),
      JetVar{"u", 1, 2});
  return eq;
}

const std::vector<VectorField>& novikov_basis() {
  static const std::vector<VectorField> basis = [] {
    std::vector<VectorField> b;
    b.push_back(make_vector_field("X1", parse("1"), parse("0"), parse("0")));
    b.push_back(make_vector_field("X2", parse("0"), parse("1"), parse("0")));
    b.push_back(make_vector_field("X3", parse("0"), parse("exp(2*x)"), parse("exp(2*x)*u")));
    b.push_back(make_vector_field("X4", parse("0"), parse("exp(-2*x)"), parse("-exp(-2*x)*u")));
    b.push_back(make_vector_field("X5", parse("-2*t"), parse("0"), parse("u")));
    return b;
  }();
  return basis;
}

const VectorField& scaling_u_field() {
  static const VectorField f = make_vector_field("u*d/du", parse("0"), parse("0"), parse("u"));
  return f;
}

}  // namespace novsym
