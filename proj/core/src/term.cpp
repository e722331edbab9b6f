#include "lamlab/term.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace lamlab {

namespace {

class SymbolTable {
 public:
  std::uint32_t intern(std::string_view name) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }

  const std::string& name(std::uint32_t id) const {
    std::shared_lock lock(mutex_);
    return names_[id];
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::deque<std::string> names_;  // deque keeps references stable
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

std::vector<std::uint32_t> merge_ids(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<std::uint32_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Symbol::Symbol(std::string_view name) : id_(symbols().intern(name)) {}

const std::string& Symbol::str() const { return symbols().name(id_); }

struct Term::Node {
  Kind kind;
  Symbol symbol;
  std::vector<Term> kids;  // App: {fun, arg}; Abs: {body}
  std::size_t size;
  std::size_t depth;
  std::vector<std::uint32_t> free;
};

Term Term::var(std::string_view name) { return var(Symbol(name)); }

Term Term::var(Symbol name) {
  return Term(std::make_shared<const Node>(Node{Kind::Var, name, {}, 1, 1, {name.id()}}));
}

Term Term::app(Term fun, Term arg) {
  std::size_t size = 1 + fun.size() + arg.size();
  std::size_t depth = 1 + std::max(fun.depth(), arg.depth());
  auto free = merge_ids(fun.free_ids(), arg.free_ids());
  return Term(std::make_shared<const Node>(
      Node{Kind::App, Symbol(std::string_view{}), {std::move(fun), std::move(arg)}, size, depth, std::move(free)}));
}

Term Term::abs(std::string_view param, Term body) { return abs(Symbol(param), std::move(body)); }

Term Term::abs(Symbol param, Term body) {
  std::size_t size = 1 + body.size();
  std::size_t depth = 1 + body.depth();
  std::vector<std::uint32_t> free = body.free_ids();
  if (auto it = std::lower_bound(free.begin(), free.end(), param.id()); it != free.end() && *it == param.id()) {
    free.erase(it);
  }
  return Term(std::make_shared<const Node>(Node{Kind::Abs, param, {std::move(body)}, size, depth, std::move(free)}));
}

Term::Kind Term::kind() const noexcept { return node_->kind; }
Symbol Term::symbol() const noexcept { return node_->symbol; }
const Term& Term::fun() const noexcept { return node_->kids[0]; }
const Term& Term::arg() const noexcept { return node_->kids[1]; }
const Term& Term::body() const noexcept { return node_->kids[0]; }
std::size_t Term::size() const noexcept { return node_->size; }
std::size_t Term::depth() const noexcept { return node_->depth; }
const std::vector<std::uint32_t>& Term::free_ids() const noexcept { return node_->free; }

Term apply_args(Term f, const std::vector<Term>& args) {
  for (const auto& a : args) f = Term::app(std::move(f), a);
  return f;
}

Term lambda(const std::vector<std::string>& params, Term body) {
  for (auto it = params.rbegin(); it != params.rend(); ++it) body = Term::abs(*it, std::move(body));
  return body;
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  for (auto id : t.free_ids()) out.insert(symbols().name(id));
  return out;
}

bool is_free_in(Symbol x, const Term& t) {
  const auto& ids = t.free_ids();
  return std::binary_search(ids.begin(), ids.end(), x.id());
}

bool is_closed(const Term& t) noexcept { return t.free_ids().empty(); }

namespace {
void collect_names(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      out.insert(t.name());
      break;
    case Term::Kind::App:
      collect_names(t.fun(), out);
      collect_names(t.arg(), out);
      break;
    case Term::Kind::Abs:
      out.insert(t.name());
      collect_names(t.body(), out);
      break;
  }
}
}  // namespace

std::set<std::string> all_names(const Term& t) {
  std::set<std::string> out;
  collect_names(t, out);
  return out;
}

std::string fresh_name(std::string base, const std::set<std::string>& avoid) {
  while (avoid.count(base)) base += '\'';
  return base;
}

namespace {

// Position of x counted from the innermost binder, or -1 when free.
long binder_index(const std::vector<std::uint32_t>& binders, std::uint32_t id) {
  for (std::size_t i = binders.size(); i-- > 0;) {
    if (binders[i] == id) return static_cast<long>(binders.size() - 1 - i);
  }
  return -1;
}

bool alpha_eq_rec(const Term& a, const Term& b, std::vector<std::uint32_t>& ba, std::vector<std::uint32_t>& bb) {
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      long ia = binder_index(ba, a.symbol().id());
      long ib = binder_index(bb, b.symbol().id());
      if (ia != ib) return false;
      return ia >= 0 || a.symbol() == b.symbol();
    }
    case Term::Kind::App:
      return alpha_eq_rec(a.fun(), b.fun(), ba, bb) && alpha_eq_rec(a.arg(), b.arg(), ba, bb);
    case Term::Kind::Abs: {
      ba.push_back(a.symbol().id());
      bb.push_back(b.symbol().id());
      bool eq = alpha_eq_rec(a.body(), b.body(), ba, bb);
      ba.pop_back();
      bb.pop_back();
      return eq;
    }
  }
  return false;
}

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t alpha_hash_rec(const Term& t, std::vector<std::uint32_t>& binders) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      long i = binder_index(binders, t.symbol().id());
      return i >= 0 ? mix(1, static_cast<std::size_t>(i)) : mix(2, std::hash<std::string>{}(t.name()));
    }
    case Term::Kind::App:
      return mix(mix(3, alpha_hash_rec(t.fun(), binders)), alpha_hash_rec(t.arg(), binders));
    case Term::Kind::Abs: {
      binders.push_back(t.symbol().id());
      std::size_t h = mix(4, alpha_hash_rec(t.body(), binders));
      binders.pop_back();
      return h;
    }
  }
  return 0;
}

struct Substituter {
  Symbol var;
  const Term& value;

  Term run(const Term& t) {
    if (!is_free_in(var, t)) return t;
    switch (t.kind()) {
      case Term::Kind::Var:
        return value;
      case Term::Kind::App: {
        Term f = run(t.fun());
        Term a = run(t.arg());
        return Term::app(std::move(f), std::move(a));
      }
      case Term::Kind::Abs: {
        Symbol param = t.symbol();
        Term body = t.body();
        if (is_free_in(param, value)) {
          std::set<std::string> avoid = free_vars(value);
          for (auto& n : free_vars(body)) avoid.insert(n);
          avoid.insert(var.str());
          Symbol renamed(fresh_name(param.str(), avoid));
          body = substitute(body, param, Term::var(renamed));
          param = renamed;
        }
        return Term::abs(param, run(body));
      }
    }
    return t;
  }
};

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  std::vector<std::uint32_t> ba, bb;
  return alpha_eq_rec(a, b, ba, bb);
}

std::size_t alpha_hash(const Term& t) {
  std::vector<std::uint32_t> binders;
  return alpha_hash_rec(t, binders);
}

Term substitute(const Term& body, std::string_view var, const Term& value) {
  return substitute(body, Symbol(var), value);
}

Term substitute(const Term& body, Symbol var, const Term& value) {
  if (!is_free_in(var, body)) return body;
  Substituter s{var, value};
  return s.run(body);
}

}  // namespace lamlab
