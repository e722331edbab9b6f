#include "lamlab/boehm.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_set>

#include "lamlab/combinators.hpp"
#include "lamlab/error.hpp"
#include "lamlab/syntax.hpp"

namespace lamlab {

namespace {

constexpr int kMaxRounds = 10'000;
constexpr std::size_t kReductSearchNodeLimit = 20'000'000;

void require_closed(const Term& t, const char* what) {
  if (!is_closed(t)) {
    throw Error(ErrorKind::OpenTerm, std::string(what) + " must be closed, but " + print_term(t) + " has free variables");
  }
}

Term normalize_or_reject(const Term& t, std::uint64_t fuel) {
  auto nf = try_normalize(t, Mode::BetaEta, fuel);
  if (!nf) {
    throw Error(ErrorKind::NoNormalForm, print_term(t) + " has no normal form within " + std::to_string(fuel) + " steps");
  }
  return *nf;
}

std::size_t count_lambdas(const Term& t) {
  std::size_t n = 0;
  for (const Term* cur = &t; cur->is_abs(); cur = &cur->body()) ++n;
  return n;
}

struct Spine {
  Term head;
  std::vector<Term> args;
};

Spine spine_of(Term t) {
  std::vector<Term> args;
  while (t.is_app()) {
    args.push_back(t.arg());
    t = t.fun();
  }
  std::reverse(args.begin(), args.end());
  return {std::move(t), std::move(args)};
}

// Largest number of arguments h is applied to anywhere in t.
std::size_t max_arity(const Term& t, Symbol h) {
  if (!is_free_in(h, t)) return 0;
  switch (t.kind()) {
    case Term::Kind::Var:
      return 0;
    case Term::Kind::Abs:
      return max_arity(t.body(), h);
    case Term::Kind::App: {
      Spine s = spine_of(t);
      std::size_t best = s.head.is_var() && s.head.symbol() == h ? s.args.size() : max_arity(s.head, h);
      for (const auto& a : s.args) best = std::max(best, max_arity(a, h));
      return best;
    }
  }
  return 0;
}

class BoehmOut {
 public:
  BoehmOut(const SeparationProblem& prob, std::vector<std::string>* transcript)
      : prob_(prob), transcript_(transcript), a_{prob.m0, prob.m1} {}

  Certificate run() {
    for (int round = 0; round < kMaxRounds; ++round) {
      for (auto& t : a_) t = normal_form(t, Mode::BetaEta, prob_.fuel);
      if (alpha_eq(a_[0], a_[1])) throw std::logic_error("Böhm-out lost the difference between the two terms");

      std::size_t lambdas = std::max(count_lambdas(a_[0]), count_lambdas(a_[1]));
      if (lambdas > 0) {
        apply_fresh(lambdas);
        continue;
      }
      Spine s0 = spine_of(a_[0]);
      Spine s1 = spine_of(a_[1]);
      Symbol h0 = s0.head.symbol();
      Symbol h1 = s1.head.symbol();
      std::size_t m0 = s0.args.size();
      std::size_t m1 = s1.args.size();

      if (h0 != h1) {
        assign(h0, constant_function(m0, prob_.p0));
        assign(h1, constant_function(m1, prob_.p1));
        return certificate();
      }
      if (m0 != m1) {
        std::size_t k = std::max(max_arity(a_[0], h0), max_arity(a_[1], h0));
        assign(h0, permutator(k));
        apply_fresh(k + 1 - std::min(m0, m1));
        continue;
      }
      std::size_t j = 0;
      while (alpha_eq(s0.args[j], s1.args[j])) ++j;
      if (!is_free_in(h0, s0.args[j]) && !is_free_in(h0, s1.args[j])) {
        assign(h0, selector(m0, j + 1));
        continue;
      }
      std::size_t k = distinguishing_permutator(h0, s0.args[j], s1.args[j]);
      assign(h0, permutator(k));
      apply_fresh(k - m0 + 1);
    }
    throw std::logic_error("Böhm-out did not terminate");
  }

 private:
  const SeparationProblem& prob_;
  std::vector<std::string>* transcript_;
  Term a_[2];
  std::vector<Symbol> slots_;
  std::map<std::uint32_t, Term> assigned_;

  void note(std::string line) {
    if (transcript_) transcript_->push_back(std::move(line));
  }

  void apply_fresh(std::size_t n) {
    std::string line = "apply";
    for (std::size_t i = 0; i < n; ++i) {
      Symbol y("y" + std::to_string(slots_.size() + 1));
      slots_.push_back(y);
      for (auto& t : a_) t = Term::app(t, Term::var(y));
      line += " " + y.str();
    }
    note(std::move(line));
  }

  void assign(Symbol y, const Term& value) {
    for (auto& t : a_) t = substitute(t, y, value);
    assigned_.emplace(y.id(), value);
    note(y.str() + " := " + print_term(value, TermFormat::Ascii, {true}));
  }

  // Smallest k, at least every arity of h, for which substituting the
  // k-permutator for h keeps b0 and b1 apart. A small permutator can
  // coincide with a subterm already present (λab.b a is the 1-permutator),
  // so k grows until the images differ.
  std::size_t distinguishing_permutator(Symbol h, const Term& b0, const Term& b1) const {
    std::size_t k = std::max(max_arity(a_[0], h), max_arity(a_[1], h));
    const std::size_t limit = k + a_[0].size() + a_[1].size() + 2;
    for (; k < limit; ++k) {
      Term p = permutator(k);
      Term c0 = normal_form(substitute(b0, h, p), Mode::BetaEta, prob_.fuel);
      Term c1 = normal_form(substitute(b1, h, p), Mode::BetaEta, prob_.fuel);
      if (!alpha_eq(c0, c1)) return k;
    }
    throw std::logic_error("no permutator keeps the differing arguments apart");
  }

  static Term constant_function(std::size_t arity, const Term& body) {
    std::vector<std::string> params;
    for (std::size_t i = 1; i <= arity; ++i) params.push_back("a" + std::to_string(i));
    return lambda(params, body);
  }

  Certificate certificate() const {
    Certificate cert;
    for (auto y : slots_) {
      auto it = assigned_.find(y.id());
      cert.args.push_back(it == assigned_.end() ? combinator(Combinator::I) : it->second);
    }
    return cert;
  }
};

// Walks the leftmost reduction sequence of a term.
class ReductStream {
 public:
  explicit ReductStream(Term t) : cur_(std::move(t)) {}

  const Term& current() const { return cur_; }
  bool advance() {
    auto next = step_leftmost(cur_);
    if (!next) return false;
    cur_ = std::move(next->first);
    return true;
  }

 private:
  Term cur_;
};

}  // namespace

bool separable(const Term& m0, const Term& m1, std::uint64_t fuel) {
  require_closed(m0, "M0");
  require_closed(m1, "M1");
  return !alpha_eq(normalize_or_reject(m0, fuel), normalize_or_reject(m1, fuel));
}

Certificate boehm_out(const SeparationProblem& prob, std::vector<std::string>* transcript) {
  require_closed(prob.m0, "M0");
  require_closed(prob.m1, "M1");
  require_closed(prob.p0, "P0");
  require_closed(prob.p1, "P1");
  if (!separable(prob.m0, prob.m1, prob.fuel)) {
    throw Error(ErrorKind::Inseparable, "the terms have the same βη-normal form");
  }
  Certificate cert = BoehmOut(prob, transcript).run();
  if (!verify_certificate(prob.m0, prob.m1, cert, prob.p0, prob.p1, prob.fuel)) {
    throw std::logic_error("synthesized certificate failed verification");
  }
  return cert;
}

Term separator(const Term& m0, const Term& m1, std::uint64_t fuel) {
  Certificate cert = boehm_out({m0, m1, combinator(Combinator::K), combinator(Combinator::Kstar), fuel});
  return Term::abs("m", apply_args(Term::var("m"), cert.args));
}

bool beta_convertible(const Term& m, const Term& p, std::uint64_t fuel) {
  auto nm = try_normalize(m, Mode::Beta, fuel);
  auto np = try_normalize(p, Mode::Beta, fuel);
  if (nm && np) return alpha_eq(*nm, *np);
  auto indeterminate = [&] {
    return Error(ErrorKind::FuelExhausted,
                 "convertibility of " + print_term(m) + " and " + print_term(p) + " undecided within fuel");
  };
  // A term with a normal form is only convertible to terms that reach the
  // same normal form, which the normalizer would have found.
  if (nm || np) throw indeterminate();

  using Seen = std::unordered_set<Term, AlphaHash, AlphaEq>;
  Seen seen_m, seen_p;
  ReductStream sm(m), sp(p);
  std::size_t nodes = 0;
  for (std::uint64_t i = 0; i <= fuel && nodes < kReductSearchNodeLimit; ++i) {
    if (seen_p.count(sm.current()) || alpha_eq(sm.current(), sp.current())) return true;
    if (seen_m.count(sp.current())) return true;
    seen_m.insert(sm.current());
    seen_p.insert(sp.current());
    nodes += sm.current().size() + sp.current().size();
    bool moved_m = sm.advance();
    bool moved_p = sp.advance();
    if (!moved_m || !moved_p) break;
  }
  throw indeterminate();
}

bool verify_certificate(const Term& m0, const Term& m1, const Certificate& cert, const Term& p0, const Term& p1,
                        std::uint64_t fuel) {
  for (const auto& n : cert.args) require_closed(n, "certificate argument");
  return beta_convertible(apply_args(m0, cert.args), p0, fuel) &&
         beta_convertible(apply_args(m1, cert.args), p1, fuel);
}

}  // namespace lamlab
