#pragma once

#include <set>
#include <string>
#include <string_view>

#include "ltpal/error.hpp"
#include "ltpal/formula.hpp"

namespace ltpal {

/// Lexical or syntax error at a 1-based line:column.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column, std::set<std::string> expected = {});

  int line() const { return line_; }
  int column() const { return column_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::set<std::string> expected_;
};

/// A temporal operator appeared inside K{...}, D{...} or [...] scope.
class LevelError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Concrete syntax, loosest to tightest:
//
//   f -> g            implication (right associative)
//   f | g             disjunction
//   f & g             conjunction
//   !f  K{a} f  D{a,b} f  [psi] f  X f  F f  G f      prefix operators
//   (f U g)  (f R g)  (f W g)  (f)                     parenthesised
//   x:Cat  p  $1  true  false                          leaves
//
// A bare identifier p abbreviates the atom p:p; $k is a template
// placeholder. Temporal operators may not occur inside epistemic or
// announcement scopes.
TemporalFormula parse_formula(std::string_view text);

/// Parses and requires a pure PAL formula.
PalFormula parse_pal(std::string_view text);

/// Parses a single atom (`x:Cat` or `p`).
Atom parse_atom(std::string_view text);

/// Canonical text with minimal parentheses; parse_formula(pretty(f)) == f.
std::string pretty(const TemporalFormula& f);
std::string pretty(const PalFormula& f);
std::string pretty(const Atom& a);

}  // namespace ltpal
