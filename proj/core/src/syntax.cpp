#include "lamlab/syntax.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "lamlab/combinators.hpp"
#include "lamlab/error.hpp"

namespace lamlab {

namespace {

constexpr std::uint64_t kMaxNumeral = 10'000;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Term parse() {
    skip_ws();
    Term t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    if (t.depth() > kMaxTermDepth) {
      pos_ = 0;
      fail("term nested deeper than " + std::to_string(kMaxTermDepth));
    }
    return t;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t nesting_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_lambda() const {
    if (pos_ < text_.size() && text_[pos_] == '\\') return true;
    return text_.substr(pos_, 2) == "\xCE\xBB";
  }

  bool at_atom_start() const {
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c == '(' || std::isalnum(static_cast<unsigned char>(c));
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  Term term() {
    if (++nesting_ > kMaxTermDepth) fail("term nested deeper than " + std::to_string(kMaxTermDepth));
    Term t = at_lambda() ? abstraction() : application();
    --nesting_;
    return t;
  }

  Term abstraction() {
    pos_ += text_[pos_] == '\\' ? 1 : 2;
    std::vector<std::string> params;
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '.') break;
      if (pos_ >= text_.size() || !std::islower(static_cast<unsigned char>(text_[pos_]))) {
        fail("expected a bound variable");
      }
      std::size_t start = pos_;
      std::string name = word();
      if (name == "omega") {
        pos_ = start;
        fail("'omega' is a combinator literal, not a variable");
      }
      params.push_back(std::move(name));
    }
    if (params.empty()) fail("abstraction binds no variable");
    ++pos_;  // '.'
    skip_ws();
    return lambda(params, term());
  }

  Term application() {
    if (!at_atom_start()) fail(pos_ >= text_.size() ? "unexpected end of input" : "expected a term");
    Term t = atom();
    for (;;) {
      skip_ws();
      if (at_lambda()) return Term::app(std::move(t), abstraction());
      if (!at_atom_start()) return t;
      t = Term::app(std::move(t), atom());
    }
  }

  std::string word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Term atom() {
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      skip_ws();
      Term t = term();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return t;
    }
    std::size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        n = n * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
        if (n > kMaxNumeral) {
          pos_ = start;
          fail("numeral literal too large");
        }
        ++pos_;
      }
      if (pos_ < text_.size() && ident_char(text_[pos_])) fail("malformed numeral");
      return church(n);
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string w = word();
      if (w == "K" && pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        w = "K*";
      }
      auto comb = combinator_from_literal(w);
      if (!comb) {
        pos_ = start;
        fail("unknown combinator literal '" + w + "'");
      }
      return combinator(*comb);
    }
    std::string w = word();
    if (auto comb = combinator_from_literal(w)) return combinator(*comb);
    return Term::var(w);
  }
};

class Printer {
 public:
  Printer(TermFormat format, PrintOptions options)
      : lambda_(format == TermFormat::Unicode ? "\xCE\xBB" : "\\"), options_(options) {}

  void term(const Term& t) {
    if (auto lit = folded(t)) {
      out_ += *lit;
      return;
    }
    switch (t.kind()) {
      case Term::Kind::Var:
        out_ += t.name();
        return;
      case Term::Kind::Abs: {
        out_ += lambda_;
        const Term* cur = &t;
        bool first = true;
        while (cur->is_abs() && (first || !folded(*cur))) {
          if (!first) out_ += ' ';
          out_ += cur->name();
          cur = &cur->body();
          first = false;
        }
        out_ += '.';
        term(*cur);
        return;
      }
      case Term::Kind::App:
        if (t.fun().is_abs() && !folded(t.fun())) {
          parens(t.fun());
        } else {
          term(t.fun());
        }
        out_ += ' ';
        if (atomic(t.arg())) {
          term(t.arg());
        } else {
          parens(t.arg());
        }
        return;
    }
  }

  std::string take() { return std::move(out_); }

 private:
  std::string_view lambda_;
  PrintOptions options_;
  std::string out_;

  std::optional<std::string_view> folded(const Term& t) const {
    if (!options_.fold_combinators || !is_closed(t)) return std::nullopt;
    for (auto c : kAllCombinators) {
      Term def = combinator(c);
      if (def.size() == t.size() && alpha_eq(def, t)) return literal(c);
    }
    return std::nullopt;
  }

  bool atomic(const Term& t) const { return t.is_var() || folded(t).has_value(); }

  void parens(const Term& t) {
    out_ += '(';
    term(t);
    out_ += ')';
  }
};

bool valid_identifier(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0])) || s == "omega") return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
  }
  return true;
}

}  // namespace

Term parse_term(std::string_view text) { return Parser(text).parse(); }

std::string print_term(const Term& t, TermFormat format, PrintOptions options) {
  if (format == TermFormat::Json) return term_to_json(t).dump();
  Printer p(format, options);
  p.term(t);
  return p.take();
}

nlohmann::ordered_json term_to_json(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return {{"var", t.name()}};
    case Term::Kind::App:
      return {{"app", nlohmann::ordered_json::array({term_to_json(t.fun()), term_to_json(t.arg())})}};
    case Term::Kind::Abs:
      return {{"abs", {{"param", t.name()}, {"body", term_to_json(t.body())}}}};
  }
  return nullptr;
}

namespace {

template <typename Json>
Term from_json(const Json& j, std::size_t depth) {
  auto bad = [](const std::string& msg) { return Error(ErrorKind::Syntax, "malformed term JSON: " + msg); };
  if (depth > kMaxTermDepth) throw bad("nested deeper than " + std::to_string(kMaxTermDepth));
  if (!j.is_object() || j.size() != 1) throw bad("expected an object with one key");
  if (auto it = j.find("var"); it != j.end()) {
    if (!it->is_string() || !valid_identifier(it->template get<std::string>())) throw bad("\"var\" must be an identifier");
    return Term::var(it->template get<std::string>());
  }
  if (auto it = j.find("app"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) throw bad("\"app\" must be a two-element array");
    return Term::app(from_json((*it)[0], depth + 1), from_json((*it)[1], depth + 1));
  }
  if (auto it = j.find("abs"); it != j.end()) {
    if (!it->is_object() || !it->contains("param") || !it->contains("body") || !(*it)["param"].is_string() ||
        !valid_identifier((*it)["param"].template get<std::string>())) {
      throw bad("\"abs\" needs \"param\" and \"body\"");
    }
    return Term::abs((*it)["param"].template get<std::string>(), from_json((*it)["body"], depth + 1));
  }
  throw bad("unknown node kind");
}

}  // namespace

Term term_from_json(const nlohmann::ordered_json& j) { return from_json(j, 1); }
Term term_from_json(const nlohmann::json& j) { return from_json(j, 1); }

}  // namespace lamlab
