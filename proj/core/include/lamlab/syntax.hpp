#pragma once

// Concrete syntax for λ-terms.
//
//   term   := lambda | app
//   lambda := ("\" | "λ") ident+ "." term
//   app    := atom+ [lambda]          (left-associative)
//   atom   := ident | "(" term ")" | combinator-literal | natural
//   ident  := [a-z][a-zA-Z0-9_']*
//
// Combinator literals (I K K* S C B Y Theta omega Omega) and naturals
// (Church numerals) are expanded while parsing, so "omega" is never an
// identifier.

#include <string>
#include <string_view>

#include <json.hpp>

#include "lamlab/term.hpp"

namespace lamlab {

enum class TermFormat { Unicode, Ascii, Json };

struct PrintOptions {
  /// Print closed subterms α-equal to a combinator literal as that literal.
  bool fold_combinators = false;
};

/// Throws SyntaxError with the byte offset of the first offending token.
Term parse_term(std::string_view text);

std::string print_term(const Term& t, TermFormat format = TermFormat::Ascii, PrintOptions options = {});

/// Keys keep their documented order ("param" before "body").
nlohmann::ordered_json term_to_json(const Term& t);
/// Accepts {"var":s} | {"app":[t,t]} | {"abs":{"param":s,"body":t}}.
Term term_from_json(const nlohmann::ordered_json& j);
Term term_from_json(const nlohmann::json& j);

}  // namespace lamlab
