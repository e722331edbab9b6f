#include "oracles.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lamlab::testing {

namespace {

void nameless(const Term& t, std::vector<std::string>& binders, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      for (std::size_t i = binders.size(); i-- > 0;) {
        if (binders[i] == t.name()) {
          out += '#' + std::to_string(binders.size() - 1 - i);
          return;
        }
      }
      out += t.name();
      return;
    }
    case Term::Kind::App:
      out += '(';
      nameless(t.fun(), binders, out);
      out += ' ';
      nameless(t.arg(), binders, out);
      out += ')';
      return;
    case Term::Kind::Abs:
      out += "(L ";
      binders.push_back(t.name());
      nameless(t.body(), binders, out);
      binders.pop_back();
      out += ')';
      return;
  }
}

const std::vector<std::string> kBinderPool = {"x", "y", "z", "a"};

Term gen(std::mt19937_64& rng, std::size_t size, std::vector<std::string>& scope, const std::vector<std::string>& free) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  if (size == 1) {
    std::vector<std::string> names = scope;
    names.insert(names.end(), free.begin(), free.end());
    if (names.empty()) names.push_back("a");
    return Term::var(names[pick(names.size())]);
  }
  bool make_abs = size == 2 || pick(2) == 0;
  if (make_abs) {
    std::string x = kBinderPool[pick(kBinderPool.size())];
    scope.push_back(x);
    Term body = gen(rng, size - 1, scope, free);
    scope.pop_back();
    return Term::abs(x, std::move(body));
  }
  std::size_t left = 1 + pick(size - 2);
  Term f = gen(rng, left, scope, free);
  Term a = gen(rng, size - 1 - left, scope, free);
  return Term::app(std::move(f), std::move(a));
}

// Terms with `depth` binders in scope (named v0..v{depth-1}) over `free`.
void enumerate(std::size_t size, std::size_t depth, const std::vector<std::string>& free, std::vector<Term>& out) {
  if (size == 1) {
    for (std::size_t i = 0; i < depth; ++i) out.push_back(Term::var("v" + std::to_string(i)));
    for (const auto& f : free) out.push_back(Term::var(f));
    return;
  }
  std::vector<Term> bodies;
  enumerate(size - 1, depth + 1, free, bodies);
  for (auto& b : bodies) out.push_back(Term::abs("v" + std::to_string(depth), std::move(b)));
  for (std::size_t left = 1; left + 1 < size; ++left) {
    std::vector<Term> fs, as;
    enumerate(left, depth, free, fs);
    if (fs.empty()) continue;
    enumerate(size - 1 - left, depth, free, as);
    for (const auto& f : fs) {
      for (const auto& a : as) out.push_back(Term::app(f, a));
    }
  }
}

}  // namespace

std::string de_bruijn(const Term& t) {
  std::vector<std::string> binders;
  std::string out;
  nameless(t, binders, out);
  return out;
}

Term random_term(std::mt19937_64& rng, std::size_t size, const std::vector<std::string>& free) {
  std::vector<std::string> scope;
  return gen(rng, size, scope, free);
}

Term random_closed_term(std::mt19937_64& rng, std::size_t size) {
  std::vector<std::string> scope;
  std::string x = kBinderPool[std::uniform_int_distribution<std::size_t>(0, kBinderPool.size() - 1)(rng)];
  scope.push_back(x);
  return Term::abs(x, gen(rng, size - 1, scope, {}));
}

std::vector<Term> closed_terms_of_size(std::size_t size) {
  std::vector<Term> out;
  enumerate(size, 0, {}, out);
  return out;
}

std::vector<Term> terms_of_size(std::size_t size, const std::vector<std::string>& free) {
  std::vector<Term> out;
  enumerate(size, 0, free, out);
  return out;
}

std::vector<CLTerm> cl_terms_with_apps(std::size_t apps) {
  if (apps == 0) return {CLTerm::k(), CLTerm::s()};
  std::vector<CLTerm> out;
  for (std::size_t left = 0; left < apps; ++left) {
    auto ls = cl_terms_with_apps(left);
    auto rs = cl_terms_with_apps(apps - 1 - left);
    for (const auto& l : ls) {
      for (const auto& r : rs) out.push_back(CLTerm::app(l, r));
    }
  }
  return out;
}

std::string read_data_file(const std::string& relative) {
  std::ifstream in(std::string(LAMLAB_DATA_DIR) + "/" + relative);
  if (!in) throw std::runtime_error("cannot open data file " + relative);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::pair<std::string, FlowProgram>> flow_corpus() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(std::string(LAMLAB_DATA_DIR) + "/flow")) {
    if (e.path().extension() == ".flow") names.push_back(e.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  std::vector<std::pair<std::string, FlowProgram>> out;
  for (const auto& n : names) out.emplace_back(n, parse_flow(read_data_file("flow/" + n)));
  return out;
}

Store random_store(std::mt19937_64& rng, const std::set<std::string>& vars, std::uint64_t max_value) {
  std::uniform_int_distribution<std::uint64_t> value(0, max_value);
  Store s;
  for (const auto& v : vars) s[v] = value(rng);
  return s;
}

}  // namespace lamlab::testing

namespace lamlab::testing {

namespace {

// Tracks the stack depth so that most programs run to completion. Blocks are
// stack neutral; leftovers are emitted. One op in 64 ignores the depth.
void rpl_block(std::mt19937_64& rng, std::size_t& budget, int nesting, std::string& out) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  std::size_t depth = 0;
  while (budget > 0) {
    --budget;
    bool reckless = pick(64) == 0;
    int k = pick(nesting < 2 ? 20 : 17);
    if (k < 4) {
      const std::uint64_t lits[] = {0, 1, 2, 3, 7, 100, 18446744073709551615ULL};
      out += std::to_string(lits[pick(7)]) + " ";
      ++depth;
    } else if (k < 10) {
      const char* ops[] = {"+ ", "- ", "* ", "dup ", "swap ", "drop "};
      std::size_t need = k < 7 || k == 8 ? 2 : 1;
      if (depth < need && !reckless) {
        out += "load " + std::to_string(pick(4)) + " ";
        ++depth;
        continue;
      }
      out += ops[k - 4];
      if (depth >= need) depth += k == 7 ? 1 : k == 8 ? 0 : static_cast<std::size_t>(-1);
    } else if (k < 12) {
      if (k == 11 && (depth > 0 || reckless)) {
        out += "store " + std::to_string(pick(4)) + " ";
        if (depth > 0) --depth;
      } else {
        out += "load " + std::to_string(pick(4)) + " ";
        ++depth;
      }
    } else if (k < 14) {
      if (k == 12 && pick(3) == 0) {
        out += "read ";
        ++depth;
      } else if (depth > 0) {
        out += "emit ";
        --depth;
      }
    } else if (k < 17) {
      out += "1 2 " + std::string(k == 14 ? "+ " : k == 15 ? "- " : "* ");
      ++depth;
    } else if (k < 19) {
      if (depth == 0) {
        out += "load " + std::to_string(pick(4)) + " ";
      } else {
        --depth;
      }
      out += "if { ";
      rpl_block(rng, budget, nesting + 1, out);
      out += "} ";
      if (pick(2)) {
        out += "else { ";
        rpl_block(rng, budget, nesting + 1, out);
        out += "} ";
      }
    } else {
      std::string cell = std::to_string(10 + nesting);
      out += std::to_string(pick(4)) + " store " + cell + " while { load " + cell + " } do { ";
      rpl_block(rng, budget, nesting + 1, out);
      out += "load " + cell + " 1 - store " + cell + " } ";
    }
    if (pick(6) == 0) break;
  }
  for (; depth > 0; --depth) out += "emit ";
}

}  // namespace

std::string random_rpl_source(std::mt19937_64& rng, std::size_t size) {
  std::string out;
  std::size_t budget = size;
  while (budget > 0) rpl_block(rng, budget, 0, out);
  return out;
}

Outcome rpl_reference(const Datum& program, const Datum& input, std::uint64_t fuel) {
  std::vector<std::uint64_t> stack;
  std::map<std::uint64_t, std::uint64_t> memory;
  std::size_t in = 0;
  Outcome o{{}, VmStatus::Halted};
  // Returns false once the run stops; `pc` walks the datum.
  std::function<bool(std::size_t, std::size_t)> exec = [&](std::size_t pc, std::size_t end) -> bool {
    auto pop = [&](std::uint64_t& v) {
      if (stack.empty()) return false;
      v = stack.back();
      stack.pop_back();
      return true;
    };
    auto trap = [&] {
      o.status = VmStatus::Trap;
      return false;
    };
    while (pc < end) {
      if (fuel == 0) {
        o.status = VmStatus::FuelExhausted;
        return false;
      }
      --fuel;
      std::uint64_t op = program[pc], a = 0, b = 0;
      switch (op) {
        case 1: stack.push_back(program[pc + 1]); pc += 2; break;
        case 2: case 3: case 4:
          if (!pop(b) || !pop(a)) return trap();
          stack.push_back(op == 2 ? a + b : op == 3 ? (a > b ? a - b : 0) : a * b);
          ++pc;
          break;
        case 5: if (!pop(a)) return trap(); stack.push_back(a); stack.push_back(a); ++pc; break;
        case 6: if (!pop(b) || !pop(a)) return trap(); stack.push_back(b); stack.push_back(a); ++pc; break;
        case 7: if (!pop(a)) return trap(); ++pc; break;
        case 8:
          if (program[pc + 1] >= kVmMemoryCells) return trap();
          stack.push_back(memory[program[pc + 1]]);
          pc += 2;
          break;
        case 9:
          if (program[pc + 1] >= kVmMemoryCells || !pop(a)) return trap();
          memory[program[pc + 1]] = a;
          pc += 2;
          break;
        case 10: if (in >= input.size()) return trap(); stack.push_back(input[in++]); ++pc; break;
        case 11: if (!pop(a)) return trap(); o.output.push_back(a); ++pc; break;
        case 12: {
          // IF lt <then> ELSE le <else> ENDIF
          std::size_t lt = program[pc + 1], then_at = pc + 2, else_at = then_at + lt + 2;
          std::size_t le = program[then_at + lt + 1], after = else_at + le + 1;
          if (!pop(a)) return trap();
          if (!(a ? exec(then_at, then_at + lt) : exec(else_at, else_at + le))) return false;
          pc = after;
          break;
        }
        case 15: {
          // WHILE lc <cond> DO lb <body> ENDWHILE
          std::size_t lc = program[pc + 1], cond_at = pc + 2, body_at = cond_at + lc + 2;
          std::size_t lb = program[cond_at + lc + 1], after = body_at + lb + 1;
          for (;;) {
            if (!exec(cond_at, cond_at + lc)) return false;
            if (!pop(a)) return trap();
            if (!a) break;
            if (!exec(body_at, body_at + lb)) return false;
          }
          pc = after;
          break;
        }
        default: return trap();
      }
    }
    return true;
  };
  exec(0, program.size() - 1);
  return o;
}

}  // namespace lamlab::testing
