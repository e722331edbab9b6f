#pragma once

// Combinatory logic over {K, S} and the parse-free translation into λ-terms.

#include <cstdint>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "lamlab/reduce.hpp"
#include "lamlab/term.hpp"

namespace lamlab {

class CLTerm {
 public:
  enum class Kind : std::uint8_t { K, S, App };

  static CLTerm k();
  static CLTerm s();
  static CLTerm app(CLTerm left, CLTerm right);

  Kind kind() const noexcept;
  bool is_app() const noexcept { return kind() == Kind::App; }
  const CLTerm& left() const noexcept;
  const CLTerm& right() const noexcept;
  /// Number of applications.
  std::size_t apps() const noexcept;
  /// Nodes on the longest root-to-leaf path.
  std::size_t depth() const noexcept;

  friend bool operator==(const CLTerm& a, const CLTerm& b);
  friend bool operator!=(const CLTerm& a, const CLTerm& b) { return !(a == b); }

 private:
  struct Node;
  explicit CLTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Strict syntax: term := "K" | "S" | "(" term term ")"; whitespace is ignored.
/// Throws SyntaxError otherwise (so "KS" without parentheses is rejected).
CLTerm parse_cl(std::string_view text);
/// The word over {K, S, (, )} spelling p, fully parenthesized.
std::string flatten(const CLTerm& p);

/// K -> λxy.x, S -> λxyz.xz(yz), (Q R) -> Q_λ R_λ.
Term cl_to_lambda(const CLTerm& p);

/// One leftmost-outermost weak step (KPQ -> P, SPQR -> PR(QR)).
std::optional<CLTerm> weak_step(const CLTerm& p);

struct WeakResult {
  CLTerm term;
  Status status;
  std::uint64_t steps;
};
/// Stops as FuelExhausted after `fuel` steps, or before a step that would
/// exceed kMaxTermDepth.
WeakResult weak_normalize(const CLTerm& p, std::uint64_t fuel = kDefaultFuel);

/// M ∘ N = λx.M(N x) and M ⋅̈ N = N ∘ M, built syntactically with x fresh.
Term compose(const Term& m, const Term& n);
Term rev_compose(const Term& m, const Term& n);

/// #( = B, #K = ⟨K⟩, #S = ⟨S⟩, #) = I. Throws SyntaxError for other symbols.
Term symbol_code(char a);

/// Left fold of symbol codes under ⋅̈, fed one symbol at a time. The builder
/// never looks back at earlier symbols or ahead at later ones.
class PhiBuilder {
 public:
  /// Throws Error(OutOfRange) once the result would exceed kMaxTermDepth.
  void push(char symbol);
  bool empty() const noexcept { return !acc_; }
  /// Throws Error(OutOfRange) when no symbol has been pushed.
  Term result() const;

 private:
  std::optional<Term> acc_;
};

/// φ(a1 ... an) = #a1 ⋅̈ ... ⋅̈ #an; whitespace symbols are skipped.
template <typename InputIt>
Term phi(InputIt first, InputIt last) {
  PhiBuilder b;
  for (; first != last; ++first) {
    char c = *first;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    b.push(c);
  }
  return b.result();
}
Term phi(std::string_view word);

/// Number of leftmost β-steps after which φ(flatten(p))·I becomes α-equal to
/// p_λ, or nullopt if that does not happen within fuel steps.
std::optional<std::uint64_t> phi_decoding_steps(const CLTerm& p, std::uint64_t fuel = kDefaultFuel);

/// CL term whose λ-translation is β-convertible to the closed term m, using
/// [x]x = SKK, [x]c = Kc (x not free in c), [x](MN) = S([x]M)([x]N); closed
/// subterms α-equal to K or S are mapped to K or S directly.
/// Throws Error(OpenTerm) if m has free variables.
CLTerm bracket_abstract(const Term& m);

}  // namespace lamlab
