#pragma once

// Untyped λ-terms: immutable, structurally shared trees with named binders.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lamlab {

/// Deepest term the library builds. Reduction that would go deeper stops as
/// if out of fuel, and parsers reject deeper input, so the recursive
/// traversals stay within a default thread stack.
inline constexpr std::size_t kMaxTermDepth = 12'000;

/// Interned identifier. Comparison is by id; the spelling lives in a
/// process-wide append-only table.
class Symbol {
 public:
  explicit Symbol(std::string_view name);

  const std::string& str() const;
  std::uint32_t id() const noexcept { return id_; }

  friend bool operator==(Symbol a, Symbol b) noexcept { return a.id_ == b.id_; }
  friend bool operator!=(Symbol a, Symbol b) noexcept { return a.id_ != b.id_; }

 private:
  std::uint32_t id_;
};

class Term {
 public:
  enum class Kind : std::uint8_t { Var, App, Abs };

  static Term var(std::string_view name);
  static Term var(Symbol name);
  static Term app(Term fun, Term arg);
  static Term abs(std::string_view param, Term body);
  static Term abs(Symbol param, Term body);

  Kind kind() const noexcept;
  bool is_var() const noexcept { return kind() == Kind::Var; }
  bool is_app() const noexcept { return kind() == Kind::App; }
  bool is_abs() const noexcept { return kind() == Kind::Abs; }

  /// Variable name (Var) or bound parameter (Abs).
  Symbol symbol() const noexcept;
  const std::string& name() const { return symbol().str(); }

  const Term& fun() const noexcept;   // App
  const Term& arg() const noexcept;   // App
  const Term& body() const noexcept;  // Abs

  /// Node count: every variable, application and abstraction counts one.
  std::size_t size() const noexcept;
  /// Nodes on the longest root-to-leaf path.
  std::size_t depth() const noexcept;

  /// Sorted ids of the free variables.
  const std::vector<std::uint32_t>& free_ids() const noexcept;

  bool same_node(const Term& other) const noexcept { return node_ == other.node_; }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Builds `f a1 ... an`.
Term apply_args(Term f, const std::vector<Term>& args);
/// Builds `\x1 ... xn. body`.
Term lambda(const std::vector<std::string>& params, Term body);

std::set<std::string> free_vars(const Term& t);
bool is_free_in(Symbol x, const Term& t);
bool is_closed(const Term& t) noexcept;
/// Every identifier occurring in t, free or bound.
std::set<std::string> all_names(const Term& t);

/// Primes `base` ("x" -> "x'") until it avoids every name in `avoid`.
std::string fresh_name(std::string base, const std::set<std::string>& avoid);

bool alpha_eq(const Term& a, const Term& b);
/// Hash invariant under α-conversion (consistent with alpha_eq).
std::size_t alpha_hash(const Term& t);

/// Capture-avoiding body[var := value]; bound variables that would capture
/// a free variable of `value` are renamed by priming.
Term substitute(const Term& body, std::string_view var, const Term& value);
Term substitute(const Term& body, Symbol var, const Term& value);

struct AlphaHash {
  std::size_t operator()(const Term& t) const { return alpha_hash(t); }
};
struct AlphaEq {
  bool operator()(const Term& a, const Term& b) const { return alpha_eq(a, b); }
};

}  // namespace lamlab
