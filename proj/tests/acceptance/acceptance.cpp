// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lamlab/boehm.hpp"
#include "lamlab/bootcfg.hpp"
#include "lamlab/cl.hpp"
#include "lamlab/combinators.hpp"
#include "lamlab/degoto.hpp"
#include "lamlab/error.hpp"
#include "lamlab/reduce.hpp"
#include "lamlab/selfint.hpp"
#include "lamlab/syntax.hpp"
#include "oracles.hpp"

using namespace lamlab;
namespace t = lamlab::testing;

namespace {

Term P(const char* s) { return parse_term(s); }

// Counts checks and keeps the first few failures for the report.
struct Tally {
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> first;

  void check(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (ok) return;
    ++failures;
    if (first.size() < 3) first.push_back(what());
  }
};

const Term& k_true() {
  static const Term t = P("\\x y.x");
  return t;
}
const Term& k_false() {
  static const Term t = P("\\x y.y");
  return t;
}

bool reduces_to(const Term& m, const Term& want, std::uint64_t fuel) {
  auto nf = try_normalize(m, Mode::Beta, fuel);
  return nf && alpha_eq(*nf, want);
}

std::vector<Term> closed_normal_forms(std::size_t max_size) {
  std::vector<Term> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    for (auto& m : t::closed_terms_of_size(n)) {
      if (is_beta_eta_normal(m)) out.push_back(m);
    }
  }
  return out;
}

void separate_pair(Tally& tl, const Term& m0, const Term& m1) {
  constexpr std::uint64_t kFuel = 1'000'000;
  try {
    Term f = separator(m0, m1, kFuel);
    tl.check(reduces_to(Term::app(f, m0), k_true(), kFuel) && reduces_to(Term::app(f, m1), k_false(), kFuel),
             [&] { return print_term(m0) + " vs " + print_term(m1); });
  } catch (const Error& e) {
    tl.check(false, [&] { return print_term(m0) + " vs " + print_term(m1) + ": " + e.what(); });
  }
}

Tally boehm_out_soundness() {
  Tally tl;
  auto nfs = closed_normal_forms(9);
  for (std::size_t i = 0; i < nfs.size(); ++i) {
    for (std::size_t j = i + 1; j < nfs.size(); ++j) separate_pair(tl, nfs[i], nfs[j]);
  }

  std::mt19937_64 rng(20240611);
  auto random_nf = [&] {
    for (;;) {
      Term m = t::random_closed_term(rng, 2 + rng() % 11);
      auto nf = try_normalize(m, Mode::BetaEta, 10'000);
      if (nf && nf->size() <= 12) return *nf;
    }
  };
  for (int made = 0; made < 500;) {
    Term a = random_nf(), b = random_nf();
    if (alpha_eq(a, b)) continue;
    separate_pair(tl, a, b);
    ++made;
  }

  // I against λx.xx with targets c1 and c2: ⟨K*, K*, K c1, c2⟩.
  Term p0 = church(1), p1 = church(2);
  Certificate cert{{P("K*"), P("K*"), Term::app(P("K"), p0), p1}};
  tl.check(verify_certificate(P("I"), P("omega"), cert, p0, p1, 1'000'000), [] { return std::string("I vs omega"); });
  return tl;
}

Tally eta_inseparability() {
  Tally tl;
  tl.check(!separable(P("\\x.x"), P("\\x y.x y")), [] { return std::string("separable"); });
  return tl;
}

Tally phi_law() {
  Tally tl;
  constexpr std::uint64_t kFuel = 1'000'000;
  for (std::size_t apps = 0; apps <= 4; ++apps) {
    for (const auto& p : t::cl_terms_with_apps(apps)) {
      std::string word = flatten(p);
      Term plam = cl_to_lambda(p);
      tl.check(phi_decoding_steps(p, kFuel).has_value(), [&] { return word + " does not decode"; });
      if (auto nf = try_normalize(plam, Mode::Beta, kFuel)) {
        tl.check(reduces_to(Term::app(phi(word), P("I")), *nf, kFuel), [&] { return word + " normal forms differ"; });
      }
    }
  }
  if (tl.checks < 550) tl.check(false, [&] { return "corpus too small: " + std::to_string(tl.checks); });
  return tl;
}

Tally self_evaluators() {
  Tally tl;
  constexpr std::uint64_t kFuel = 1'000'000;
  Term eb = evaluator(EncodingScheme::BerarducciBoehm);
  Term em = evaluator(EncodingScheme::Mogensen);
  tl.check(print_term(eb, TermFormat::Ascii, {true}) == "\\z.z (\\z'.z' K S C)",
           [&] { return "E_b prints as " + print_term(eb, TermFormat::Ascii, {true}); });
  tl.check(alpha_eq(eb, tuple({tuple({P("K"), P("S"), P("C")})})), [] { return std::string("E_b is not <<K,S,C>>"); });
  tl.check(is_closed(eb) && is_beta_normal(eb), [] { return std::string("E_b is not a closed normal form"); });

  std::size_t terms = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    for (const auto& m : t::terms_of_size(n, {"a", "b"})) {
      if (!is_beta_normal(m)) continue;
      ++terms;
      tl.check(reduces_to(Term::app(eb, bb_encode(m)), m, kFuel), [&] { return "E_b on " + print_term(m); });
      tl.check(reduces_to(Term::app(em, mogensen_encode(m)), m, kFuel), [&] { return "E^m on " + print_term(m); });
    }
  }
  if (terms < 3000) tl.check(false, [&] { return "corpus too small: " + std::to_string(terms); });
  return tl;
}

Store restrict_to(const Store& s, const std::set<std::string>& vars) {
  Store out;
  for (const auto& v : vars) out[v] = read_var(s, v);
  return out;
}

Tally goto_elimination() {
  Tally tl;
  constexpr std::uint64_t kFuel = 20'000;
  auto corpus = t::flow_corpus();
  if (corpus.size() < 10) tl.check(false, [&] { return "only " + std::to_string(corpus.size()) + " flow programs"; });
  std::mt19937_64 rng(2024);
  for (const auto& [name, p] : corpus) {
    StructProgram q = eliminate_goto(p);
    auto vars = p.variables();
    std::set<std::string> added;
    for (const auto& v : variables(q)) {
      if (!vars.count(v)) added.insert(v);
    }
    tl.check(while_count(q) == 1 && goto_free(q) && added.size() == 1, [&] { return name + ": shape"; });
    for (int i = 0; i < 100; ++i) {
      Store s = t::random_store(rng, vars, 12);
      auto a = interpret_flow(p, s, kFuel);
      // Every flow step costs at least one structured step, so equal fuel
      // bounds a diverging original and the overhead factor a halting one.
      auto b = interpret_struct(q, s, a.status == RunStatus::Halted ? overhead_factor(p) * kFuel : kFuel);
      bool ok = a.status == b.status;
      if (ok && a.status == RunStatus::Halted) ok = restrict_to(a.store, vars) == restrict_to(b.store, vars);
      tl.check(ok, [&] { return name + ": store " + std::to_string(i); });
    }
  }
  return tl;
}

Tally configuration_calculus() {
  Tally tl;
  const auto& reg = toy_registry();
  std::vector<CompilerConfig> configs;
  for (const char* text : {kConfigC1, kConfigC2, kConfigC3}) {
    CompilerConfig c = parse_config(text, &reg);
    tl.check(is_executable(c), [&] { return std::string(text) + " not executable"; });
    auto r = is_correct(c, reg);
    tl.check(bool(r), [&] { return std::string(text) + " not correct: " + r.reason; });
    configs.push_back(c);
  }
  for (const char* text : {"(L L1 c M)", "(L M c L2)"}) {
    tl.check(!is_executable(parse_config(text)), [&] { return std::string(text) + " executable"; });
  }

  configs.push_back(parse_config(kConfigC4, &reg));
  configs.push_back(parse_config("L", &reg));
  ConfigEvaluator eval(reg);
  for (const auto& c : configs) {
    for (const auto& cs : reg.corpus("L")) {
      for (const auto& x : cs.inputs) {
        auto want = reg.run("L", cs.program, x, 1'000'000'000);
        auto where = [&] { return print_config(c) + " on " + cs.name; };
        if (want.status == VmStatus::Trap) {
          bool threw = false;
          try {
            eval.phi_eval_code(c, cs.program, x, cs.name);
          } catch (const Error&) {
            threw = true;
          }
          tl.check(threw, where);
        } else {
          auto got = eval.phi_eval_code(c, cs.program, x, cs.name);
          tl.check(got.status == PhiStatus::Ok && got.value == want.output, where);
        }
      }
    }
  }
  return tl;
}

Tally bootstrap_orderings() {
  Tally tl;
  const auto& reg = toy_registry();
  auto suite = toy_benchmarks();
  if (suite.size() < 5) tl.check(false, [&] { return "only " + std::to_string(suite.size()) + " benchmarks"; });
  auto rows = bootstrap_demo(reg, suite);
  for (const auto& row : rows) {
    tl.check(row.run[1] == row.run[2] && row.run[2] < row.run[0] && row.compile[2] < row.compile[1],
             [&] { return row.program + ": ordering"; });
    tl.check(row.output == t::rpl_reference(reg.program(row.program).code, row.input).output,
             [&] { return row.program + ": output"; });
  }
  return tl;
}

std::optional<Term> random_normal_form(Term m, std::mt19937_64& rng, std::uint64_t fuel) {
  for (std::uint64_t n = 0; n <= fuel; ++n) {
    auto next = step_random(m, rng);
    if (!next) return m;
    m = next->first;
  }
  return std::nullopt;
}

Tally core_engine() {
  Tally tl;
  std::mt19937_64 rng(8);
  const std::vector<std::string> names{"x", "y", "z"};
  for (int i = 0; i < 10'000; ++i) {
    Term m = t::random_term(rng, 1 + i % 20, names);
    std::string text = print_term(m);
    auto where = [&] { return text; };

    for (auto fmt : {TermFormat::Ascii, TermFormat::Unicode}) {
      tl.check(alpha_eq(parse_term(print_term(m, fmt)), m), where);
    }
    tl.check(alpha_eq(parse_term(print_term(m, TermFormat::Ascii, {true})), m), where);

    auto lo = try_normalize(m, Mode::Beta, 500);
    auto rnd = random_normal_form(m, rng, 500);
    if (lo && rnd) tl.check(alpha_eq(*lo, *rnd), where);

    Term n = t::random_term(rng, 1 + i % 6, names);
    const char* x = i % 2 ? "x" : "y";
    Term r = substitute(m, x, n);
    if (is_free_in(Symbol(x), m)) {
      std::set<std::string> allowed = free_vars(m);
      allowed.erase(x);
      for (const auto& v : free_vars(n)) allowed.insert(v);
      tl.check(free_vars(r) == allowed, where);
    } else {
      tl.check(alpha_eq(r, m), where);
    }

    std::size_t arity = 1 + i % 5, k = 1 + rng() % arity;
    std::vector<Term> comps;
    for (std::size_t j = 1; j <= arity; ++j) comps.push_back(j == k ? m : Term::var(names[j % names.size()]));
    Term projected = Term::app(tuple(comps), selector(arity, k));
    if (lo) {
      tl.check(beta_convertible(projected, m, 1'000), where);
    } else {
      // Without a normal form, conversion shows up as the head steps.
      auto s1 = step_leftmost(projected);
      bool ok = s1.has_value();
      Term cur = ok ? s1->first : projected;
      for (std::size_t j = 0; ok && j < arity; ++j) {
        auto s = step_leftmost(cur);
        ok = s.has_value();
        if (ok) cur = s->first;
      }
      tl.check(ok && alpha_eq(cur, m), where);
    }
  }
  return tl;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Tally (*run)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "boehm-out soundness", 120, boehm_out_soundness},
      {2, "eta-inseparability", 5, eta_inseparability},
      {3, "phi law", 30, phi_law},
      {4, "self-evaluators", 120, self_evaluators},
      {5, "goto elimination", 30, goto_elimination},
      {6, "configuration calculus", 60, configuration_calculus},
      {7, "bootstrap orderings", 60, bootstrap_orderings},
      {8, "core engine properties", 120, core_engine},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Tally tl;
    std::string error;
    try {
      tl = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = error.empty() && tl.failures == 0 && tl.checks > 0 && secs < c.budget_s;
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << tl.checks << " checks, "
         << tl.failures << " failures, " << static_cast<int>(secs * 10) / 10.0 << " s (budget " << c.budget_s
         << " s)";
    if (!error.empty()) line << "; threw: " << error;
    for (const auto& f : tl.first) line << "; " << f;
    std::printf("%s\n", line.str().c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
