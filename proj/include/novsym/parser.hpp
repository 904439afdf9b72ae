#ifndef NOVSYM_PARSER_HPP
#define NOVSYM_PARSER_HPP

#include <string>

#include "novsym/expr.hpp"

namespace novsym {

struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(const std::string& msg, size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

struct ParseOptions {
  int max_jet_order = kDefaultMaxJetOrder;
};

/// Parses the expression grammar:
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' exponent)?
///   base   := number | ident | ident '(' args ')' | '(' expr ')' | 'exp' '(' expr ')'
/// Identifiers: jets u, u_t, u_txx, ... and v likewise; independent t, x, z, s;
/// named constants A, c1, c2, c, k, alpha, kappa; opaque functions phi(t),
/// psi(x), xi0(t,x,u) with primes (phi'(t)) or derivative suffixes (xi0_tu(t,x,u)).
/// The result is in canonical normal form; printing a normal form re-parses to
/// the identical value.
Expr parse(const std::string& text, const ParseOptions& opts = {});

}  // namespace novsym

#endif
