#include <doctest.h>

#include <random>

#include <json.hpp>

#include "lamlab/combinators.hpp"
#include "lamlab/error.hpp"
#include "lamlab/reduce.hpp"
#include "lamlab/syntax.hpp"
#include "oracles.hpp"

using namespace lamlab;
using lamlab::testing::de_bruijn;

namespace {

Term P(const char* s) { return parse_term(s); }
Term V(const char* s) { return Term::var(s); }

// Random-redex reduction; returns the number of steps, or nullopt when
// `fuel` steps did not reach a β-normal form.
std::optional<std::pair<Term, std::uint64_t>> random_normalize(Term t, std::mt19937_64& rng, std::uint64_t fuel) {
  for (std::uint64_t n = 0; n <= fuel; ++n) {
    auto next = step_random(t, rng);
    if (!next) return std::make_pair(t, n);
    t = next->first;
  }
  return std::nullopt;
}

}  // namespace

TEST_SUITE("parse and print") {
  TEST_CASE("identity") {
    Term t = P("\\x.x");
    REQUIRE(t.is_abs());
    CHECK(t.name() == "x");
    CHECK(t.body().is_var());
    CHECK(t.body().name() == "x");
    CHECK(alpha_eq(P("λx.x"), t));
  }

  TEST_CASE("combinator literals expand") {
    CHECK(de_bruijn(P("K")) == de_bruijn(lambda({"x", "y"}, V("x"))));
    CHECK(de_bruijn(P("K*")) == de_bruijn(lambda({"x", "y"}, V("y"))));
    CHECK(de_bruijn(P("Y")) == de_bruijn(P("\\f.(\\x.f (x x)) (\\x.f (x x))")));
    CHECK(de_bruijn(P("Theta")) == de_bruijn(P("(\\a b.b (a a b)) (\\a b.b (a a b))")));
    CHECK(de_bruijn(P("S")) == de_bruijn(P("\\x y z.x z (y z)")));
    CHECK(de_bruijn(P("C")) == de_bruijn(P("\\x y z.x z y")));
    CHECK(de_bruijn(P("B")) == de_bruijn(P("\\x y z.x (y z)")));
    CHECK(de_bruijn(P("Omega")) == de_bruijn(P("(\\x.x x) (\\x.x x)")));
    CHECK(de_bruijn(P("omega")) == de_bruijn(P("\\x.x x")));
  }

  TEST_CASE("numeral literal") {
    Term two = Term::abs("f", Term::abs("x", Term::app(V("f"), Term::app(V("f"), V("x")))));
    CHECK(de_bruijn(P("2")) == de_bruijn(two));
  }

  TEST_CASE("printing") {
    CHECK(print_term(P("\\x.x")) == "\\x.x");
    CHECK(print_term(Term::app(V("x"), Term::app(V("y"), V("z")))) == "x (y z)");
    CHECK(print_term(P("\\x.x"), TermFormat::Json) == R"({"abs":{"param":"x","body":{"var":"x"}}})");
    CHECK(print_term(P("(\\x.x) y")) == "(\\x.x) y");
    CHECK(print_term(P("\\x.\\y.x")) == "\\x y.x");
    CHECK(print_term(P("\\x.x"), TermFormat::Unicode) == "λx.x");
    CHECK(print_term(P("\\z.z (\\w.w K S C)"), TermFormat::Ascii, {true}) == "\\z.z (\\w.w K S C)");
  }

  TEST_CASE("syntax errors carry a position") {
    for (const char* bad : {"", "\\.x", "(x", "x)", "\\x x", "Foo", "\\omega.x", "1a", "10001"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(P(bad), SyntaxError);
    }
    try {
      P("x )");
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.position() == 2);
    }
  }

  TEST_CASE("json round trip and validation") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      Term t = lamlab::testing::random_term(rng, 1 + i % 15);
      auto j = term_to_json(t);
      Term back = term_from_json(j);
      CHECK(term_to_json(back) == j);
    }
    CHECK_THROWS_AS(term_from_json(nlohmann::json::parse(R"({"var":""})")), Error);
    CHECK_THROWS_AS(term_from_json(nlohmann::json::parse(R"({"app":[{"var":"x"}]})")), Error);
    CHECK_THROWS_AS(term_from_json(nlohmann::json::parse(R"({"lam":1})")), Error);
  }

  TEST_CASE("property: text round trip") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
      Term t = lamlab::testing::random_term(rng, 1 + i % 25);
      for (auto fmt : {TermFormat::Ascii, TermFormat::Unicode}) {
        Term back = P(print_term(t, fmt).c_str());
        CHECK(alpha_eq(back, t));
      }
      Term folded = P(print_term(t, TermFormat::Ascii, {true}).c_str());
      CHECK(alpha_eq(folded, t));
    }
  }
}

TEST_CASE("depth is tracked and bounded at construction") {
  CHECK(P("x").depth() == 1);
  CHECK(P("\\x.x (y z)").depth() == 4);
  std::string deep(kMaxTermDepth + 1, '(');
  deep += "x" + std::string(kMaxTermDepth + 1, ')');
  CHECK_THROWS_AS(P(deep.c_str()), SyntaxError);
  std::string json;
  for (std::size_t i = 0; i <= kMaxTermDepth; ++i) json += R"({"abs":{"param":"x","body":)";
  json += R"({"var":"x"})" + std::string(2 * (kMaxTermDepth + 1), '}');
  CHECK_THROWS_AS(term_from_json(nlohmann::json::parse(json)), Error);
  CHECK(church(kMaxTermDepth - 3).depth() == kMaxTermDepth);
  CHECK_THROWS_AS(church(kMaxTermDepth - 2), Error);
}

TEST_SUITE("alpha and substitution") {
  TEST_CASE("alpha_eq examples") {
    CHECK(alpha_eq(P("\\x.x"), P("\\y.y")));
    CHECK_FALSE(alpha_eq(P("\\x.\\y.x"), P("\\x.\\y.y")));
    CHECK(alpha_eq(P("\\x.x z"), P("\\y.y z")));
    CHECK(de_bruijn(P("\\x.x z")) == de_bruijn(P("\\y.y z")));
    CHECK_FALSE(alpha_eq(P("\\x.y"), P("\\y.y")));
    CHECK_FALSE(alpha_eq(P("x"), P("y")));
  }

  TEST_CASE("property: alpha_eq agrees with the nameless oracle") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 3000; ++i) {
      std::size_t n = 1 + i % 9;
      Term a = lamlab::testing::random_term(rng, n, {"a"});
      Term b = lamlab::testing::random_term(rng, n, {"a"});
      bool oracle = de_bruijn(a) == de_bruijn(b);
      CHECK(alpha_eq(a, b) == oracle);
      if (oracle) CHECK(alpha_hash(a) == alpha_hash(b));
    }
  }

  TEST_CASE("substitution examples") {
    CHECK(alpha_eq(substitute(V("x"), "x", P("\\y.y")), P("\\y.y")));
    Term r = substitute(P("\\y.x"), "x", V("y"));
    REQUIRE(r.is_abs());
    CHECK(r.name() == "y'");
    CHECK(free_vars(r) == std::set<std::string>{"y"});
    CHECK(alpha_eq(r, P("\\w.y")));
    CHECK(alpha_eq(substitute(P("\\x.x"), "x", V("z")), P("\\x.x")));
  }

  TEST_CASE("property: substitution never captures") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 3000; ++i) {
      Term m = lamlab::testing::random_term(rng, 1 + i % 14, {"x", "y", "z"});
      Term n = lamlab::testing::random_term(rng, 1 + i % 6, {"x", "y", "z"});
      const char* x = i % 2 ? "x" : "y";
      Term r = substitute(m, x, n);
      std::set<std::string> allowed = free_vars(m);
      allowed.erase(x);
      for (auto& v : free_vars(n)) allowed.insert(v);
      if (is_free_in(Symbol(x), m)) {
        CHECK(free_vars(r) == allowed);
      } else {
        CHECK(alpha_eq(r, m));
      }
    }
  }

  TEST_CASE("fresh names prime") {
    CHECK(fresh_name("x", {"x", "x'"}) == "x''");
    CHECK(fresh_name("x", {"y"}) == "x");
  }
}

TEST_SUITE("normalization") {
  TEST_CASE("Omega runs out of fuel") {
    auto tr = normalize(P("Omega"), Mode::Beta, 1000);
    CHECK(tr.status == Status::FuelExhausted);
    CHECK(tr.step_count == 1000);
    CHECK(tr.steps.size() == 1000);
    CHECK(alpha_eq(tr.final, P("Omega")));
  }

  TEST_CASE("growth past the depth limit stops as out of fuel") {
    Term t = P("\\x y.x Theta 3");
    auto tr = normalize(t, Mode::Beta, 1'000'000, false);
    CHECK(tr.status == Status::FuelExhausted);
    CHECK(tr.step_count < 1'000'000);
    CHECK(tr.final.depth() <= kMaxTermDepth);
    CHECK_THROWS_AS(normal_form(P("Theta (\\r a.r a a) z"), Mode::Beta, 1'000'000), Error);
  }

  TEST_CASE("single beta step") {
    auto tr = normalize(P("(\\x.x) K"));
    CHECK(tr.status == Status::NormalForm);
    CHECK(tr.step_count == 1);
    CHECK(alpha_eq(tr.final, P("K")));
    REQUIRE(tr.steps.size() == 1);
    CHECK(tr.steps[0].rule == Rule::Beta);
    CHECK(tr.steps[0].path.empty());
    CHECK(tr.steps[0].result_size == P("K").size());
  }

  TEST_CASE("eta after beta") {
    auto tr = normalize(P("\\x.K x"), Mode::BetaEta);
    CHECK(tr.status == Status::NormalForm);
    CHECK(alpha_eq(tr.final, P("K")));
    auto beta_only = normalize(P("\\x.K x"), Mode::Beta);
    CHECK(alpha_eq(beta_only.final, P("\\x y.x")));
    CHECK(alpha_eq(normal_form(P("\\x.y x"), Mode::BetaEta), V("y")));
    CHECK(alpha_eq(normal_form(P("\\x.x x"), Mode::BetaEta), P("\\x.x x")));
  }

  TEST_CASE("normal order escapes a divergent argument") {
    CHECK(alpha_eq(normal_form(P("K I Omega")), P("I")));
    CHECK_THROWS_AS(normal_form(P("Omega"), Mode::Beta, 50), Error);
  }

  TEST_CASE("fixed point combinators") {
    Term f = V("f");
    Term yf = Term::app(P("Y"), f);
    Term step = step_leftmost(yf)->first;
    // Y f → (λx.f(xx))(λx.f(xx)) → f((λx.f(xx))(λx.f(xx)))
    Term next = step_leftmost(step)->first;
    REQUIRE(next.is_app());
    CHECK(alpha_eq(next.fun(), f));
    CHECK(alpha_eq(next.arg(), step));
  }

  TEST_CASE("paths point at redexes and replay reproduces the result") {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int i = 0; i < 1500; ++i) {
      Term t = lamlab::testing::random_term(rng, 3 + i % 20);
      auto tr = normalize(t, i % 2 ? Mode::Beta : Mode::BetaEta, 300);
      CHECK(tr.step_count == tr.steps.size());
      CHECK(alpha_eq(replay(tr), tr.final));
      if (tr.status == Status::NormalForm) {
        ++checked;
        CHECK(is_beta_normal(tr.final));
        if (i % 2 == 0) CHECK(is_beta_eta_normal(tr.final));
      }
    }
    CHECK(checked > 1000);
  }

  TEST_CASE("traced steps follow leftmost-outermost order") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 400; ++i) {
      Term t = lamlab::testing::random_term(rng, 4 + i % 16);
      auto tr = normalize(t, Mode::Beta, 100);
      Term cur = t;
      for (const auto& s : tr.steps) {
        auto lo = step_leftmost(cur);
        REQUIRE(lo);
        CHECK(lo->second.path == s.path);
        CHECK(lo->second.result_size == s.result_size);
        cur = lo->first;
      }
      CHECK(alpha_eq(cur, tr.final));
    }
  }

  TEST_CASE("property: confluence on small terms") {
    std::mt19937_64 rng(29);
    int both = 0;
    for (int i = 0; i < 2000; ++i) {
      Term t = lamlab::testing::random_term(rng, 2 + i % 11);
      auto lo = try_normalize(t, Mode::Beta, 500);
      auto rnd = random_normalize(t, rng, 500);
      if (lo && rnd) {
        ++both;
        CHECK(alpha_eq(*lo, rnd->first));
      }
    }
    CHECK(both > 1500);
  }

  TEST_CASE("property: standardization bound") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 2000; ++i) {
      Term t = lamlab::testing::random_term(rng, 2 + i % 14);
      auto rnd = random_normalize(t, rng, 200);
      if (!rnd) continue;
      std::uint64_t f = std::max<std::uint64_t>(rnd->second, 1);
      auto lo = normalize(t, Mode::Beta, 10 * f, false);
      CHECK(lo.status == Status::NormalForm);
    }
  }
}

TEST_SUITE("numerals and tuples") {
  TEST_CASE("church numerals") {
    CHECK(de_bruijn(church(0)) == de_bruijn(P("\\f.\\x.x")));
    CHECK(church_of(P("\\g.\\y.g (g y)")) == 2u);
    CHECK_FALSE(church_of(P("\\x.x")).has_value());
    CHECK_FALSE(church_of(P("\\f.\\f.f")).has_value());
    CHECK_FALSE(church_of(P("\\f x.x f")).has_value());
    for (std::uint64_t n = 0; n <= 1000; ++n) CHECK(church_of(church(n)) == n);
  }

  TEST_CASE("church arithmetic normalizes") {
    Term plus = P("\\m n f x.m f (n f x)");
    Term r = normal_form(apply_args(plus, {church(3), church(4)}));
    CHECK(church_of(r) == 7u);
  }

  TEST_CASE("tuples and selectors") {
    Term t = tuple({P("K"), P("S")});
    CHECK(alpha_eq(normal_form(Term::app(t, selector(2, 1))), P("K")));
    CHECK(de_bruijn(selector(3, 3)) == de_bruijn(P("\\a b c.c")));
    Term single = tuple({V("a")});
    REQUIRE(single.is_abs());
    CHECK(single.name() != "a");
    CHECK(free_vars(single) == std::set<std::string>{"a"});
    CHECK_THROWS_AS(selector(2, 3), Error);
    CHECK_THROWS_AS(selector(2, 0), Error);
    CHECK_THROWS_AS(tuple({}), Error);
  }

  TEST_CASE("property: projections recover components") {
    std::mt19937_64 rng(37);
    for (std::size_t n = 1; n <= 5; ++n) {
      for (int rep = 0; rep < 40; ++rep) {
        std::vector<Term> comps;
        for (std::size_t i = 0; i < n; ++i) {
          Term c = lamlab::testing::random_term(rng, 1 + rng() % 8, {"z", "x1", "q"});
          auto nf = try_normalize(c, Mode::Beta, 1000);
          comps.push_back(nf ? *nf : Term::var("q"));
        }
        Term tup = tuple(comps);
        for (std::size_t k = 1; k <= n; ++k) {
          CHECK(alpha_eq(normal_form(Term::app(tup, selector(n, k))), comps[k - 1]));
        }
      }
    }
  }
}
