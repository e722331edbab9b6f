#include "lamlab/reduce.hpp"

#include <algorithm>

#include "lamlab/error.hpp"

namespace lamlab {

namespace {

class BetaNormalizer {
 public:
  BetaNormalizer(std::uint64_t fuel, bool record) : fuel_(fuel), record_(record) {}

  Term run(const Term& t) {
    if (t.depth() > kMaxTermDepth) {
      exhausted_ = true;
      return t;
    }
    Path path;
    return norm(t, path);
  }

  bool exhausted() const { return exhausted_; }
  std::uint64_t count() const { return count_; }
  std::vector<Step> take_steps() { return std::move(steps_); }

 private:
  std::uint64_t fuel_;
  bool record_;
  bool exhausted_ = false;
  std::uint64_t count_ = 0;
  std::vector<Step> steps_;

  // Spine arguments as a stack: the top is the leftmost argument. Each entry
  // also keeps the depth the spine below and including it contributes, so the
  // depth of `head a1 ... ak` is max(depth(head) + k, reach of the top).
  struct Arg {
    Term term;
    std::size_t reach;
  };

  static void push(std::vector<Arg>& stack, Term a) {
    std::size_t reach = a.depth() + stack.size() + 1;
    if (!stack.empty()) reach = std::max(reach, stack.back().reach);
    stack.push_back(Arg{std::move(a), reach});
  }

  static std::size_t spine_depth(const Term& head, const std::vector<Arg>& stack) {
    std::size_t d = head.depth() + stack.size();
    return stack.empty() ? d : std::max(d, stack.back().reach);
  }

  static Term rebuild(Term head, const std::vector<Arg>& stack) {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) head = Term::app(std::move(head), it->term);
    return head;
  }

  // Normalizes t, which sits at `path` in the whole term. `path` is restored on return.
  Term norm(Term t, Path& path) {
    const std::size_t base = path.size();
    std::vector<Symbol> binders;
    std::vector<Arg> stack;
    for (;;) {
      if (t.is_app()) {
        // Peel from the outside in, so the rightmost argument goes in first.
        std::vector<Term> peeled;
        while (t.is_app()) {
          peeled.push_back(t.arg());
          t = Term(t.fun());
        }
        for (auto& a : peeled) push(stack, std::move(a));
        continue;
      }
      if (t.is_abs() && stack.empty()) {
        binders.push_back(t.symbol());
        t = Term(t.body());
        continue;
      }
      if (!t.is_abs()) break;
      if (count_ == fuel_) {
        exhausted_ = true;
        return wrap(binders, rebuild(t, stack));
      }
      Term contractum = substitute(t.body(), t.symbol(), stack.back().term);
      Arg taken = std::move(stack.back());
      stack.pop_back();
      if (path.size() + binders.size() + spine_depth(contractum, stack) > kMaxTermDepth) {
        stack.push_back(std::move(taken));
        exhausted_ = true;
        return wrap(binders, rebuild(t, stack));
      }
      ++count_;
      if (record_) {
        Path p(path);
        p.insert(p.end(), binders.size() + stack.size(), 0);
        steps_.push_back(Step{Rule::Beta, std::move(p), contractum.size()});
      }
      t = std::move(contractum);
    }
    // t is the variable head; normalize the arguments left to right.
    std::vector<Term> args;
    args.reserve(stack.size());
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) args.push_back(std::move(it->term));
    path.insert(path.end(), binders.size(), 0);
    const std::size_t n = args.size();
    for (std::size_t i = 0; i < n && !exhausted_; ++i) {
      const std::size_t mark = path.size();
      path.insert(path.end(), n - 1 - i, 0);
      path.push_back(1);
      args[i] = norm(args[i], path);
      path.resize(mark);
    }
    path.resize(base);
    return wrap(binders, apply_args(t, args));
  }

  static Term wrap(const std::vector<Symbol>& binders, Term body) {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = Term::abs(*it, std::move(body));
    return body;
  }
};

class EtaContractor {
 public:
  EtaContractor(std::uint64_t fuel, bool record, std::vector<Step>& steps, std::uint64_t& count)
      : fuel_(fuel), record_(record), steps_(steps), count_(count) {}

  Term run(const Term& t) {
    Path path;
    return go(t, path);
  }

  bool exhausted() const { return exhausted_; }

 private:
  std::uint64_t fuel_;
  bool record_;
  std::vector<Step>& steps_;
  std::uint64_t& count_;
  bool exhausted_ = false;

  Term go(const Term& t, Path& path) {
    if (exhausted_) return t;
    switch (t.kind()) {
      case Term::Kind::Var:
        return t;
      case Term::Kind::App: {
        path.push_back(0);
        Term f = go(t.fun(), path);
        path.back() = 1;
        Term a = go(t.arg(), path);
        path.pop_back();
        if (f.same_node(t.fun()) && a.same_node(t.arg())) return t;
        return Term::app(std::move(f), std::move(a));
      }
      case Term::Kind::Abs: {
        path.push_back(0);
        Term b = go(t.body(), path);
        path.pop_back();
        Term self = b.same_node(t.body()) ? t : Term::abs(t.symbol(), b);
        if (exhausted_ || !is_eta_redex(self)) return self;
        if (count_ == fuel_) {
          exhausted_ = true;
          return self;
        }
        ++count_;
        Term result = self.body().fun();
        if (record_) steps_.push_back(Step{Rule::Eta, path, result.size()});
        return result;
      }
    }
    return t;
  }
};

Term replace_at(const Term& t, const Path& path, std::size_t depth, const Term& replacement) {
  if (depth == path.size()) return replacement;
  const std::uint32_t i = path[depth];
  if (t.is_app() && i <= 1) {
    if (i == 0) return Term::app(replace_at(t.fun(), path, depth + 1, replacement), t.arg());
    return Term::app(t.fun(), replace_at(t.arg(), path, depth + 1, replacement));
  }
  if (t.is_abs() && i == 0) return Term::abs(t.symbol(), replace_at(t.body(), path, depth + 1, replacement));
  throw Error(ErrorKind::OutOfRange, "invalid redex path");
}

void collect_redexes(const Term& t, Path& path, std::vector<Path>& out) {
  if (is_beta_redex(t)) out.push_back(path);
  switch (t.kind()) {
    case Term::Kind::Var:
      return;
    case Term::Kind::App:
      path.push_back(0);
      collect_redexes(t.fun(), path, out);
      path.back() = 1;
      collect_redexes(t.arg(), path, out);
      path.pop_back();
      return;
    case Term::Kind::Abs:
      path.push_back(0);
      collect_redexes(t.body(), path, out);
      path.pop_back();
      return;
  }
}

bool find_leftmost(const Term& t, Path& path) {
  if (is_beta_redex(t)) return true;
  switch (t.kind()) {
    case Term::Kind::Var:
      return false;
    case Term::Kind::App:
      path.push_back(0);
      if (find_leftmost(t.fun(), path)) return true;
      path.back() = 1;
      if (find_leftmost(t.arg(), path)) return true;
      path.pop_back();
      return false;
    case Term::Kind::Abs:
      path.push_back(0);
      if (find_leftmost(t.body(), path)) return true;
      path.pop_back();
      return false;
  }
  return false;
}

bool any_redex(const Term& t, bool eta) {
  if (is_beta_redex(t) || (eta && is_eta_redex(t))) return true;
  switch (t.kind()) {
    case Term::Kind::Var:
      return false;
    case Term::Kind::App:
      return any_redex(t.fun(), eta) || any_redex(t.arg(), eta);
    case Term::Kind::Abs:
      return any_redex(t.body(), eta);
  }
  return false;
}

std::pair<Term, Step> step_at(const Term& t, Path path) {
  const Term& redex = subterm_at(t, path);
  Term contractum = substitute(redex.fun().body(), redex.fun().symbol(), redex.arg());
  std::size_t size = contractum.size();
  Term result = replace_at(t, path, 0, contractum);
  return {std::move(result), Step{Rule::Beta, std::move(path), size}};
}

}  // namespace

ReductionTrace normalize(const Term& t, Mode mode, std::uint64_t fuel, bool record_steps) {
  BetaNormalizer beta(fuel, record_steps);
  Term result = beta.run(t);
  std::uint64_t count = beta.count();
  std::vector<Step> steps = beta.take_steps();
  bool exhausted = beta.exhausted();
  if (!exhausted && mode == Mode::BetaEta) {
    EtaContractor eta(fuel, record_steps, steps, count);
    result = eta.run(result);
    exhausted = eta.exhausted();
  }
  return ReductionTrace{t, std::move(steps), exhausted ? Status::FuelExhausted : Status::NormalForm,
                        std::move(result), count};
}

std::optional<Term> try_normalize(const Term& t, Mode mode, std::uint64_t fuel) {
  auto trace = normalize(t, mode, fuel, false);
  if (trace.status != Status::NormalForm) return std::nullopt;
  return std::move(trace.final);
}

Term normal_form(const Term& t, Mode mode, std::uint64_t fuel) {
  auto trace = normalize(t, mode, fuel, false);
  if (trace.status == Status::NormalForm) return std::move(trace.final);
  throw Error(ErrorKind::FuelExhausted, "no normal form found within " + std::to_string(trace.step_count) + " steps");
}

bool is_beta_redex(const Term& t) { return t.is_app() && t.fun().is_abs(); }

bool is_eta_redex(const Term& t) {
  if (!t.is_abs()) return false;
  const Term& b = t.body();
  return b.is_app() && b.arg().is_var() && b.arg().symbol() == t.symbol() && !is_free_in(t.symbol(), b.fun());
}

bool is_beta_normal(const Term& t) { return !any_redex(t, false); }
bool is_beta_eta_normal(const Term& t) { return !any_redex(t, true); }

const Term& subterm_at(const Term& t, const Path& path) {
  const Term* cur = &t;
  for (auto i : path) {
    if (cur->is_app() && i <= 1) {
      cur = i == 0 ? &cur->fun() : &cur->arg();
    } else if (cur->is_abs() && i == 0) {
      cur = &cur->body();
    } else {
      throw Error(ErrorKind::OutOfRange, "invalid redex path");
    }
  }
  return *cur;
}

Term contract_at(const Term& t, const Path& path, Rule rule) {
  const Term& redex = subterm_at(t, path);
  if (rule == Rule::Beta) {
    if (!is_beta_redex(redex)) throw Error(ErrorKind::OutOfRange, "no β-redex at path");
    return replace_at(t, path, 0, substitute(redex.fun().body(), redex.fun().symbol(), redex.arg()));
  }
  if (!is_eta_redex(redex)) throw Error(ErrorKind::OutOfRange, "no η-redex at path");
  return replace_at(t, path, 0, redex.body().fun());
}

std::vector<Path> beta_redex_paths(const Term& t) {
  std::vector<Path> out;
  Path path;
  collect_redexes(t, path, out);
  return out;
}

std::optional<std::pair<Term, Step>> step_leftmost(const Term& t) {
  Path path;
  if (!find_leftmost(t, path)) return std::nullopt;
  return step_at(t, std::move(path));
}

std::optional<std::pair<Term, Step>> step_random(const Term& t, std::mt19937_64& rng) {
  auto paths = beta_redex_paths(t);
  if (paths.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, paths.size() - 1);
  return step_at(t, std::move(paths[pick(rng)]));
}

Term replay(const ReductionTrace& trace) {
  Term t = trace.initial;
  for (const auto& s : trace.steps) t = contract_at(t, s.path, s.rule);
  return t;
}

const char* to_string(Rule r) noexcept { return r == Rule::Beta ? "beta" : "eta"; }

const char* to_string(Status s) noexcept {
  return s == Status::NormalForm ? "NormalForm" : "FuelExhausted";
}

}  // namespace lamlab
