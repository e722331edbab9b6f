#include "lamlab/cl.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <vector>

#include "lamlab/combinators.hpp"
#include "lamlab/error.hpp"

namespace lamlab {

struct CLTerm::Node {
  Kind kind;
  std::size_t apps;
  std::size_t depth;
  std::vector<CLTerm> kids;
};

CLTerm CLTerm::k() {
  static const CLTerm atom(std::make_shared<const Node>(Node{Kind::K, 0, 1, {}}));
  return atom;
}

CLTerm CLTerm::s() {
  static const CLTerm atom(std::make_shared<const Node>(Node{Kind::S, 0, 1, {}}));
  return atom;
}

CLTerm CLTerm::app(CLTerm left, CLTerm right) {
  std::size_t apps = 1 + left.apps() + right.apps();
  std::size_t depth = 1 + std::max(left.depth(), right.depth());
  return CLTerm(std::make_shared<const Node>(Node{Kind::App, apps, depth, {std::move(left), std::move(right)}}));
}

CLTerm::Kind CLTerm::kind() const noexcept { return node_->kind; }
const CLTerm& CLTerm::left() const noexcept { return node_->kids[0]; }
const CLTerm& CLTerm::right() const noexcept { return node_->kids[1]; }
std::size_t CLTerm::apps() const noexcept { return node_->apps; }
std::size_t CLTerm::depth() const noexcept { return node_->depth; }

bool operator==(const CLTerm& a, const CLTerm& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.apps() != b.apps()) return false;
  if (!a.is_app()) return true;
  return a.left() == b.left() && a.right() == b.right();
}

namespace {

class CLParser {
 public:
  explicit CLParser(std::string_view text) : text_(text) {}

  CLTerm parse() {
    CLTerm t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input (applications need parentheses)");
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

  CLTerm term() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    switch (text_[pos_]) {
      case 'K':
        ++pos_;
        return CLTerm::k();
      case 'S':
        ++pos_;
        return CLTerm::s();
      case '(': {
        if (++nesting_ >= kMaxTermDepth) fail("term nested deeper than " + std::to_string(kMaxTermDepth));
        ++pos_;
        CLTerm l = term();
        CLTerm r = term();
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')' closing an application of two terms");
        ++pos_;
        --nesting_;
        return CLTerm::app(std::move(l), std::move(r));
      }
      default:
        fail(std::string("unexpected symbol '") + text_[pos_] + "'");
    }
  }
};

void flatten_into(const CLTerm& p, std::string& out) {
  switch (p.kind()) {
    case CLTerm::Kind::K:
      out += 'K';
      return;
    case CLTerm::Kind::S:
      out += 'S';
      return;
    case CLTerm::Kind::App:
      out += '(';
      flatten_into(p.left(), out);
      flatten_into(p.right(), out);
      out += ')';
      return;
  }
}

CLTerm apply_cl(CLTerm head, const std::vector<CLTerm>& args, std::size_t from) {
  for (std::size_t i = from; i < args.size(); ++i) head = CLTerm::app(std::move(head), args[i]);
  return head;
}

// Combinator trees with variables, used while abstracting.
struct Open {
  enum class Kind { K, S, Var, App } kind;
  Symbol var{std::string_view{}};
  std::shared_ptr<const Open> l, r;
};
using OpenPtr = std::shared_ptr<const Open>;

OpenPtr o_atom(Open::Kind k) { return std::make_shared<const Open>(Open{k, Symbol(std::string_view{}), nullptr, nullptr}); }
OpenPtr o_var(Symbol x) { return std::make_shared<const Open>(Open{Open::Kind::Var, x, nullptr, nullptr}); }
OpenPtr o_app(OpenPtr l, OpenPtr r) {
  return std::make_shared<const Open>(Open{Open::Kind::App, Symbol(std::string_view{}), std::move(l), std::move(r)});
}

bool occurs(const Open& e, Symbol x) {
  switch (e.kind) {
    case Open::Kind::Var:
      return e.var == x;
    case Open::Kind::App:
      return occurs(*e.l, x) || occurs(*e.r, x);
    default:
      return false;
  }
}

OpenPtr abstract(Symbol x, const OpenPtr& e) {
  if (e->kind == Open::Kind::Var && e->var == x) {
    return o_app(o_app(o_atom(Open::Kind::S), o_atom(Open::Kind::K)), o_atom(Open::Kind::K));
  }
  if (!occurs(*e, x)) return o_app(o_atom(Open::Kind::K), e);
  return o_app(o_app(o_atom(Open::Kind::S), abstract(x, e->l)), abstract(x, e->r));
}

OpenPtr to_open(const Term& t) {
  if (is_closed(t)) {
    if (alpha_eq(t, combinator(Combinator::K))) return o_atom(Open::Kind::K);
    if (alpha_eq(t, combinator(Combinator::S))) return o_atom(Open::Kind::S);
  }
  switch (t.kind()) {
    case Term::Kind::Var:
      return o_var(t.symbol());
    case Term::Kind::App:
      return o_app(to_open(t.fun()), to_open(t.arg()));
    case Term::Kind::Abs:
      return abstract(t.symbol(), to_open(t.body()));
  }
  return nullptr;
}

CLTerm to_closed(const Open& e) {
  switch (e.kind) {
    case Open::Kind::K:
      return CLTerm::k();
    case Open::Kind::S:
      return CLTerm::s();
    case Open::Kind::App:
      return CLTerm::app(to_closed(*e.l), to_closed(*e.r));
    case Open::Kind::Var:
      break;
  }
  throw std::logic_error("free variable survived bracket abstraction");
}

}  // namespace

CLTerm parse_cl(std::string_view text) { return CLParser(text).parse(); }

std::string flatten(const CLTerm& p) {
  std::string out;
  flatten_into(p, out);
  return out;
}

Term cl_to_lambda(const CLTerm& p) {
  switch (p.kind()) {
    case CLTerm::Kind::K:
      return combinator(Combinator::K);
    case CLTerm::Kind::S:
      return combinator(Combinator::S);
    case CLTerm::Kind::App:
      return Term::app(cl_to_lambda(p.left()), cl_to_lambda(p.right()));
  }
  return combinator(Combinator::I);
}

std::optional<CLTerm> weak_step(const CLTerm& p) {
  std::vector<CLTerm> args;
  CLTerm head = p;
  while (head.is_app()) {
    args.push_back(head.right());
    head = head.left();
  }
  std::reverse(args.begin(), args.end());
  if (head.kind() == CLTerm::Kind::K && args.size() >= 2) return apply_cl(args[0], args, 2);
  if (head.kind() == CLTerm::Kind::S && args.size() >= 3) {
    CLTerm contractum = CLTerm::app(CLTerm::app(args[0], args[2]), CLTerm::app(args[1], args[2]));
    return apply_cl(std::move(contractum), args, 3);
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (auto next = weak_step(args[i])) {
      args[i] = std::move(*next);
      return apply_cl(head, args, 0);
    }
  }
  return std::nullopt;
}

WeakResult weak_normalize(const CLTerm& p, std::uint64_t fuel) {
  CLTerm cur = p;
  for (std::uint64_t n = 0;; ++n) {
    if (n == fuel) {
      if (weak_step(cur)) return {cur, Status::FuelExhausted, n};
      return {cur, Status::NormalForm, n};
    }
    auto next = weak_step(cur);
    if (!next) return {cur, Status::NormalForm, n};
    if (next->depth() > kMaxTermDepth) return {cur, Status::FuelExhausted, n};
    cur = std::move(*next);
  }
}

Term compose(const Term& m, const Term& n) {
  std::set<std::string> avoid = free_vars(m);
  for (auto& v : free_vars(n)) avoid.insert(v);
  Symbol x(fresh_name("x", avoid));
  return Term::abs(x, Term::app(m, Term::app(n, Term::var(x))));
}

Term rev_compose(const Term& m, const Term& n) { return compose(n, m); }

Term symbol_code(char a) {
  switch (a) {
    case '(':
      return combinator(Combinator::B);
    case 'K':
      return wrap(combinator(Combinator::K));
    case 'S':
      return wrap(combinator(Combinator::S));
    case ')':
      return combinator(Combinator::I);
    default:
      throw SyntaxError(0, std::string("'") + a + "' is not one of K S ( )");
  }
}

void PhiBuilder::push(char symbol) {
  Term code = symbol_code(symbol);
  Term next = acc_ ? rev_compose(*acc_, code) : code;
  if (next.depth() > kMaxTermDepth) throw Error(ErrorKind::OutOfRange, "word too long: φ would exceed the term depth limit");
  acc_ = std::move(next);
}

Term PhiBuilder::result() const {
  if (!acc_) throw Error(ErrorKind::OutOfRange, "φ of the empty word is undefined");
  return *acc_;
}

Term phi(std::string_view word) { return phi(word.begin(), word.end()); }

std::optional<std::uint64_t> phi_decoding_steps(const CLTerm& p, std::uint64_t fuel) {
  const Term target = cl_to_lambda(p);
  Term cur = Term::app(phi(flatten(p)), combinator(Combinator::I));
  for (std::uint64_t n = 0; n <= fuel; ++n) {
    if (alpha_eq(cur, target)) return n;
    auto next = step_leftmost(cur);
    if (!next) return std::nullopt;
    cur = std::move(next->first);
  }
  return std::nullopt;
}

CLTerm bracket_abstract(const Term& m) {
  if (!is_closed(m)) throw Error(ErrorKind::OpenTerm, "bracket abstraction needs a closed term");
  return to_closed(*to_open(m));
}

}  // namespace lamlab
