#include "lamlab/combinators.hpp"

#include <string>

#include "lamlab/error.hpp"

namespace lamlab {

namespace {
Term v(std::string_view n) { return Term::var(n); }
Term ap(Term f, Term a) { return Term::app(std::move(f), std::move(a)); }

// λab.b(aab)
Term turing_half() { return lambda({"a", "b"}, ap(v("b"), ap(ap(v("a"), v("a")), v("b")))); }
// λx.f(xx)
Term curry_half() { return Term::abs("x", ap(v("f"), ap(v("x"), v("x")))); }
}  // namespace

std::string_view literal(Combinator c) noexcept {
  switch (c) {
    case Combinator::I: return "I";
    case Combinator::K: return "K";
    case Combinator::Kstar: return "K*";
    case Combinator::S: return "S";
    case Combinator::C: return "C";
    case Combinator::B: return "B";
    case Combinator::Y: return "Y";
    case Combinator::Theta: return "Theta";
    case Combinator::omega: return "omega";
    case Combinator::Omega: return "Omega";
  }
  return "?";
}

std::optional<Combinator> combinator_from_literal(std::string_view text) noexcept {
  for (auto c : kAllCombinators) {
    if (literal(c) == text) return c;
  }
  return std::nullopt;
}

Term combinator(Combinator c) {
  switch (c) {
    case Combinator::I:
      return Term::abs("x", v("x"));
    case Combinator::K:
      return lambda({"x", "y"}, v("x"));
    case Combinator::Kstar:
      return lambda({"x", "y"}, v("y"));
    case Combinator::S:
      return lambda({"x", "y", "z"}, ap(ap(v("x"), v("z")), ap(v("y"), v("z"))));
    case Combinator::C:
      return lambda({"x", "y", "z"}, ap(ap(v("x"), v("z")), v("y")));
    case Combinator::B:
      return lambda({"x", "y", "z"}, ap(v("x"), ap(v("y"), v("z"))));
    case Combinator::Y:
      return Term::abs("f", ap(curry_half(), curry_half()));
    case Combinator::Theta:
      return ap(turing_half(), turing_half());
    case Combinator::omega:
      return Term::abs("x", ap(v("x"), v("x")));
    case Combinator::Omega:
      return ap(combinator(Combinator::omega), combinator(Combinator::omega));
  }
  return v("x");
}

Term church(std::uint64_t n) {
  if (n > kMaxTermDepth - 3) {
    throw Error(ErrorKind::OutOfRange, "numeral " + std::to_string(n) + " exceeds the term depth limit");
  }
  Term body = v("x");
  for (std::uint64_t i = 0; i < n; ++i) body = ap(v("f"), std::move(body));
  return lambda({"f", "x"}, std::move(body));
}

std::optional<std::uint64_t> church_of(const Term& t) {
  if (!t.is_abs() || !t.body().is_abs()) return std::nullopt;
  Symbol f = t.symbol();
  Symbol x = t.body().symbol();
  if (f == x) return std::nullopt;
  std::uint64_t n = 0;
  const Term* cur = &t.body().body();
  while (cur->is_app()) {
    if (!cur->fun().is_var() || cur->fun().symbol() != f) return std::nullopt;
    ++n;
    cur = &cur->arg();
  }
  if (!cur->is_var() || cur->symbol() != x) return std::nullopt;
  return n;
}

Term tuple(const std::vector<Term>& components) {
  if (components.empty()) throw Error(ErrorKind::OutOfRange, "tuple needs at least one component");
  std::set<std::string> avoid;
  for (const auto& m : components) {
    for (auto& n : free_vars(m)) avoid.insert(n);
  }
  std::string z = fresh_name("z", avoid);
  return Term::abs(z, apply_args(v(z), components));
}

Term selector(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) {
    throw Error(ErrorKind::OutOfRange,
                "selector index " + std::to_string(k) + " outside 1.." + std::to_string(n));
  }
  std::vector<std::string> params;
  for (std::size_t i = 1; i <= n; ++i) params.push_back("x" + std::to_string(i));
  return lambda(params, v(params[k - 1]));
}

Term permutator(std::size_t k) {
  std::vector<std::string> params;
  std::vector<Term> args;
  for (std::size_t i = 1; i <= k; ++i) {
    params.push_back("a" + std::to_string(i));
    args.push_back(v(params.back()));
  }
  params.push_back("z");
  return lambda(params, apply_args(v("z"), args));
}

Term wrap(const Term& m) {
  std::string x = fresh_name("x", free_vars(m));
  return Term::abs(x, ap(v(x), m));
}

}  // namespace lamlab
