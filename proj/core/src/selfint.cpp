#include "lamlab/selfint.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

#include "lamlab/combinators.hpp"
#include "lamlab/error.hpp"

namespace lamlab {

namespace {

Term v(std::string_view n) { return Term::var(n); }
Term ap(Term f, Term a) { return Term::app(std::move(f), std::move(a)); }

// Index i when name is "x" followed by a canonical decimal number.
std::optional<Natural> canonical_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x') return std::nullopt;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
  }
  if (name.size() > 2 && name[1] == '0') return std::nullopt;
  return Natural(name.substr(1));
}

class GodelEncoder {
 public:
  explicit GodelEncoder(const Term& m) {
    Natural next = 0;
    std::vector<std::string> order;  // free variables by first occurrence
    collect_free(m, {}, order);
    for (const auto& name : order) {
      if (auto i = canonical_index(name)) {
        free_.emplace(name, *i);
        if (*i + 1 > next) next = *i + 1;
      }
    }
    for (const auto& name : order) {
      if (!free_.count(name)) free_.emplace(name, next++);
    }
    base_ = next;
  }

  Natural encode(const Term& t) {
    std::vector<std::pair<Symbol, Natural>> binders;
    return go(t, binders);
  }

 private:
  std::map<std::string, Natural> free_;
  Natural base_;

  static void collect_free(const Term& t, std::vector<Symbol> bound, std::vector<std::string>& order) {
    switch (t.kind()) {
      case Term::Kind::Var:
        for (auto b : bound) {
          if (b == t.symbol()) return;
        }
        if (std::find(order.begin(), order.end(), t.name()) == order.end()) order.push_back(t.name());
        return;
      case Term::Kind::App:
        collect_free(t.fun(), bound, order);
        collect_free(t.arg(), bound, order);
        return;
      case Term::Kind::Abs:
        bound.push_back(t.symbol());
        collect_free(t.body(), bound, order);
        return;
    }
  }

  Natural go(const Term& t, std::vector<std::pair<Symbol, Natural>>& binders) {
    switch (t.kind()) {
      case Term::Kind::Var: {
        for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
          if (it->first == t.symbol()) return 3 * it->second;
        }
        return 3 * free_.at(t.name());
      }
      case Term::Kind::App:
        return 3 * cantor_pair(go(t.fun(), binders), go(t.arg(), binders)) + 1;
      case Term::Kind::Abs: {
        Natural index = base_ + binders.size();
        binders.emplace_back(t.symbol(), index);
        Natural body = go(t.body(), binders);
        binders.pop_back();
        return 3 * cantor_pair(index, body) + 2;
      }
    }
    return 0;
  }
};

Term decode(const Natural& n) {
  Natural q = n / 3;
  int tag = static_cast<int>(n % 3);
  if (tag == 0) return Term::var("x" + q.str());
  auto [a, b] = cantor_unpair(q);
  if (tag == 1) return ap(decode(a), decode(b));
  return Term::abs("x" + a.str(), decode(b));
}

Term mogensen(const Term& t, const std::string& a, const std::string& b, const std::string& c) {
  auto ctor = [&](Term body) { return lambda({a, b, c}, std::move(body)); };
  switch (t.kind()) {
    case Term::Kind::Var:
      return ctor(ap(v(a), t));
    case Term::Kind::App:
      return ctor(ap(ap(v(b), mogensen(t.fun(), a, b, c)), mogensen(t.arg(), a, b, c)));
    case Term::Kind::Abs:
      return ctor(ap(v(c), Term::abs(t.symbol(), mogensen(t.body(), a, b, c))));
  }
  return t;
}

Term berarducci_boehm(const Term& t, const std::string& e) {
  auto ctor = [&](std::size_t k, std::vector<Term> fields) {
    Term body = ap(v(e), selector(3, k));
    for (auto& f : fields) body = ap(std::move(body), std::move(f));
    return Term::abs(e, ap(std::move(body), v(e)));
  };
  switch (t.kind()) {
    case Term::Kind::Var:
      return ctor(1, {t});
    case Term::Kind::App:
      return ctor(2, {berarducci_boehm(t.fun(), e), berarducci_boehm(t.arg(), e)});
    case Term::Kind::Abs:
      return ctor(3, {Term::abs(t.symbol(), berarducci_boehm(t.body(), e))});
  }
  return t;
}

}  // namespace

const char* to_string(EncodingScheme s) noexcept {
  switch (s) {
    case EncodingScheme::Godel: return "godel";
    case EncodingScheme::Mogensen: return "mogensen";
    case EncodingScheme::BerarducciBoehm: return "bb";
  }
  return "?";
}

EncodingScheme scheme_from_string(std::string_view name) {
  if (name == "godel") return EncodingScheme::Godel;
  if (name == "mogensen") return EncodingScheme::Mogensen;
  if (name == "bb") return EncodingScheme::BerarducciBoehm;
  throw Error(ErrorKind::OutOfRange, "unknown encoding scheme '" + std::string(name) + "' (godel, mogensen, bb)");
}

Natural cantor_pair(const Natural& a, const Natural& b) {
  Natural s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<Natural, Natural> cantor_unpair(const Natural& z) {
  Natural disc = 8 * z + 1;
  Natural w = (boost::multiprecision::sqrt(disc) - 1) / 2;
  Natural t = w * (w + 1) / 2;
  Natural b = z - t;
  return {w - b, b};
}

GodelCode godel_encode(const Term& m) { return {GodelEncoder(m).encode(m)}; }

Term godel_decode(const GodelCode& g) {
  if (g.value < 0) throw Error(ErrorKind::MalformedCode, "codes are natural numbers");
  Term t = decode(g.value);
  if (godel_encode(t).value != g.value) {
    throw Error(ErrorKind::MalformedCode, g.value.str() + " is not the code of any term");
  }
  return t;
}

Term church_code(const Term& m) {
  Natural code = godel_encode(m).value;
  if (code > kMaxChurchCode) {
    throw Error(ErrorKind::OutOfRange,
                "code " + code.str() + " exceeds the numeral limit " + std::to_string(kMaxChurchCode));
  }
  return church(static_cast<std::uint64_t>(code));
}

namespace {

Term within_depth(Term code) {
  if (code.depth() > kMaxTermDepth) throw Error(ErrorKind::OutOfRange, "code exceeds the term depth limit");
  return code;
}

}  // namespace

Term mogensen_encode(const Term& m) {
  auto names = all_names(m);
  std::string a = fresh_name("a", names);
  names.insert(a);
  std::string b = fresh_name("b", names);
  names.insert(b);
  std::string c = fresh_name("c", names);
  return within_depth(mogensen(m, a, b, c));
}

Term mogensen_evaluator() {
  // B_ev = λepq.ep(eq), C_ev = λezx.e(zx)
  Term b_ev = lambda({"e", "p", "q"}, ap(ap(v("e"), v("p")), ap(v("e"), v("q"))));
  Term c_ev = lambda({"e", "z", "x"}, ap(v("e"), ap(v("z"), v("x"))));
  Term body = ap(ap(ap(v("m"), combinator(Combinator::I)), ap(b_ev, v("e"))), ap(c_ev, v("e")));
  return ap(combinator(Combinator::Theta), lambda({"e", "m"}, body));
}

Term bb_encode(const Term& m) { return within_depth(berarducci_boehm(m, fresh_name("e", all_names(m)))); }

Term bb_evaluator() {
  Term inner = Term::abs("z'", apply_args(v("z'"), {combinator(Combinator::K), combinator(Combinator::S),
                                                     combinator(Combinator::C)}));
  return Term::abs("z", ap(v("z"), inner));
}

Term encode(EncodingScheme scheme, const Term& m) {
  switch (scheme) {
    case EncodingScheme::Godel: return church_code(m);
    case EncodingScheme::Mogensen: return mogensen_encode(m);
    case EncodingScheme::BerarducciBoehm: return bb_encode(m);
  }
  return m;
}

Term evaluator(EncodingScheme scheme) {
  switch (scheme) {
    case EncodingScheme::Mogensen: return mogensen_evaluator();
    case EncodingScheme::BerarducciBoehm: return bb_evaluator();
    case EncodingScheme::Godel: break;
  }
  throw Error(ErrorKind::OutOfRange, "no evaluator is provided for Gödel codes");
}

Term self_evaluate(EncodingScheme scheme, const Term& m, std::uint64_t fuel) {
  return normal_form(ap(evaluator(scheme), encode(scheme, m)), Mode::Beta, fuel);
}

bool self_eval_check(EncodingScheme scheme, const Term& m, std::uint64_t fuel) {
  Term expected = normal_form(m, Mode::Beta, fuel);
  return alpha_eq(self_evaluate(scheme, m, fuel), expected);
}

}  // namespace lamlab
