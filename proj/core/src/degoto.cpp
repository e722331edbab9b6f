#include "lamlab/degoto.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "lamlab/error.hpp"

namespace lamlab {

std::uint64_t read_var(const Store& s, const std::string& x) {
  auto it = s.find(x);
  return it == s.end() ? 0 : it->second;
}

bool Cond::holds(const Store& s) const {
  std::uint64_t v = read_var(s, var);
  return relation == Relation::EqConst ? v == constant : v > constant;
}

std::string to_string(const Cond& c) {
  return c.var + (c.relation == Relation::EqConst ? " = " : " > ") + std::to_string(c.constant);
}

const char* to_string(RunStatus s) noexcept {
  return s == RunStatus::Halted ? "halted" : "fuel-exhausted";
}

FlowStmtPtr FlowStmt::inc(std::string x) {
  return std::make_shared<const FlowStmt>(FlowStmt{Kind::Inc, std::move(x), {}, nullptr, nullptr});
}
FlowStmtPtr FlowStmt::dec(std::string x) {
  return std::make_shared<const FlowStmt>(FlowStmt{Kind::Dec, std::move(x), {}, nullptr, nullptr});
}
FlowStmtPtr FlowStmt::if_(Cond c, FlowStmtPtr t, FlowStmtPtr e) {
  return std::make_shared<const FlowStmt>(FlowStmt{Kind::If, {}, std::move(c), std::move(t), std::move(e)});
}
FlowStmtPtr FlowStmt::go(std::string label) {
  return std::make_shared<const FlowStmt>(FlowStmt{Kind::Goto, std::move(label), {}, nullptr, nullptr});
}
FlowStmtPtr FlowStmt::halt() {
  return std::make_shared<const FlowStmt>(FlowStmt{Kind::Halt, {}, {}, nullptr, nullptr});
}

namespace {

void collect_flow(const FlowStmt& s, std::set<std::string>& vars, std::vector<std::string>* targets) {
  switch (s.kind) {
    case FlowStmt::Kind::Inc:
    case FlowStmt::Kind::Dec:
      vars.insert(s.name);
      return;
    case FlowStmt::Kind::If:
      vars.insert(s.cond.var);
      collect_flow(*s.then_branch, vars, targets);
      collect_flow(*s.else_branch, vars, targets);
      return;
    case FlowStmt::Kind::Goto:
      if (targets) targets->push_back(s.name);
      return;
    case FlowStmt::Kind::Halt:
      return;
  }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

// Splits a line into identifiers, numbers and single-character symbols.
std::vector<std::string> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (ident_start(c) || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && ident_char(line[j])) ++j;
      out.emplace_back(line.substr(i, j - i));
      i = j;
    } else if (c == ':' && i + 1 < line.size() && line[i + 1] == '=') {
      out.emplace_back(":=");
      i += 2;
    } else if (c == ':' || c == '=' || c == '>') {
      out.emplace_back(1, c);
      ++i;
    } else {
      throw SyntaxError(line_no, std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

bool is_identifier(const std::string& t) { return !t.empty() && ident_start(t[0]); }

std::uint64_t parse_natural(const std::string& t, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw SyntaxError(line_no, "expected a natural, got '" + t + "'");
  return v;
}

class Tokens {
 public:
  Tokens(std::vector<std::string> toks, std::size_t line_no) : toks_(std::move(toks)), line_(line_no) {}

  bool done() const { return pos_ == toks_.size(); }
  const std::string& peek() const {
    if (done()) fail("unexpected end of line");
    return toks_[pos_];
  }
  std::string next() {
    std::string t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string& t) {
    if (done() || toks_[pos_] != t) fail("expected '" + t + "'");
    ++pos_;
  }
  std::string ident() {
    std::string t = next();
    if (!is_identifier(t) || keyword(t)) fail("expected an identifier, got '" + t + "'");
    return t;
  }
  std::uint64_t natural() { return parse_natural(next(), line_); }
  Cond cond() {
    Cond c;
    c.var = ident();
    std::string rel = next();
    if (rel == "=") {
      c.relation = Relation::EqConst;
    } else if (rel == ">") {
      c.relation = Relation::GtConst;
    } else {
      fail("expected '=' or '>'");
    }
    c.constant = natural();
    return c;
  }
  void end() const {
    if (!done()) fail("unexpected '" + toks_[pos_] + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(line_, msg); }

  static bool keyword(const std::string& t) {
    static const std::set<std::string> kw{"inc", "dec", "if", "then", "else", "goto", "halt",
                                          "seq", "for", "to", "while"};
    return kw.count(t) > 0;
  }

 private:
  std::vector<std::string> toks_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

FlowStmtPtr parse_flow_stmt(Tokens& in) {
  std::string kw = in.next();
  if (kw == "inc") return FlowStmt::inc(in.ident());
  if (kw == "dec") return FlowStmt::dec(in.ident());
  if (kw == "goto") return FlowStmt::go(in.ident());
  if (kw == "halt") return FlowStmt::halt();
  if (kw == "if") {
    Cond c = in.cond();
    in.expect("then");
    FlowStmtPtr t = parse_flow_stmt(in);
    in.expect("else");
    FlowStmtPtr e = parse_flow_stmt(in);
    return FlowStmt::if_(std::move(c), std::move(t), std::move(e));
  }
  in.fail("unknown statement '" + kw + "'");
}

std::string print_flow_stmt(const FlowStmt& s) {
  switch (s.kind) {
    case FlowStmt::Kind::Inc: return "inc " + s.name;
    case FlowStmt::Kind::Dec: return "dec " + s.name;
    case FlowStmt::Kind::Goto: return "goto " + s.name;
    case FlowStmt::Kind::Halt: return "halt";
    case FlowStmt::Kind::If:
      return "if " + to_string(s.cond) + " then " + print_flow_stmt(*s.then_branch) + " else " +
             print_flow_stmt(*s.else_branch);
  }
  return {};
}

// Fuel meter shared by both interpreters.
class Meter {
 public:
  explicit Meter(std::uint64_t fuel) : fuel_(fuel) {}
  bool spend() {
    if (used_ == fuel_) return false;
    ++used_;
    return true;
  }
  std::uint64_t used() const { return used_; }

 private:
  std::uint64_t fuel_;
  std::uint64_t used_ = 0;
};

void bump(Store& s, const std::string& x, bool up) {
  std::uint64_t& v = s[x];
  if (up) {
    ++v;
  } else if (v > 0) {
    --v;
  }
}

}  // namespace

FlowProgram::FlowProgram(std::vector<FlowBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(ErrorKind::InvalidProgram, "a flow program needs at least one block");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (!blocks_[i].stmt) throw Error(ErrorKind::InvalidProgram, "block '" + blocks_[i].label + "' has no statement");
    if (!index_.emplace(blocks_[i].label, i).second) {
      throw Error(ErrorKind::InvalidProgram, "duplicate label '" + blocks_[i].label + "'");
    }
  }
  std::set<std::string> vars;
  std::vector<std::string> targets;
  for (const auto& b : blocks_) collect_flow(*b.stmt, vars, &targets);
  for (const auto& t : targets) {
    if (!index_.count(t)) throw Error(ErrorKind::InvalidProgram, "goto to undefined label '" + t + "'");
  }
}

std::size_t FlowProgram::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw Error(ErrorKind::InvalidProgram, "undefined label '" + label + "'");
  return it->second;
}

std::set<std::string> FlowProgram::variables() const {
  std::set<std::string> vars;
  for (const auto& b : blocks_) collect_flow(*b.stmt, vars, nullptr);
  return vars;
}

FlowProgram parse_flow(std::string_view text) {
  std::vector<FlowBlock> blocks;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    Tokens in(tokenize(text.substr(start, end - start), line_no), line_no);
    start = end + 1;
    if (in.done()) continue;
    std::string label = in.ident();
    in.expect(":");
    FlowStmtPtr s = parse_flow_stmt(in);
    in.end();
    blocks.push_back({std::move(label), std::move(s)});
  }
  return FlowProgram(std::move(blocks));
}

std::string print_flow(const FlowProgram& p) {
  std::string out;
  for (const auto& b : p.blocks()) out += b.label + ": " + print_flow_stmt(*b.stmt) + "\n";
  return out;
}

RunResult interpret_flow(const FlowProgram& p, Store s, std::uint64_t fuel) {
  Meter meter(fuel);
  const auto& blocks = p.blocks();
  std::size_t pc = 0;
  while (pc < blocks.size()) {
    const FlowStmt* st = blocks[pc].stmt.get();
    for (;;) {
      if (!meter.spend()) return {std::move(s), RunStatus::FuelExhausted, meter.used()};
      if (st->kind != FlowStmt::Kind::If) break;
      st = st->cond.holds(s) ? st->then_branch.get() : st->else_branch.get();
    }
    switch (st->kind) {
      case FlowStmt::Kind::Inc:
      case FlowStmt::Kind::Dec:
        bump(s, st->name, st->kind == FlowStmt::Kind::Inc);
        ++pc;
        break;
      case FlowStmt::Kind::Goto:
        pc = p.index_of(st->name);
        break;
      case FlowStmt::Kind::Halt:
        return {std::move(s), RunStatus::Halted, meter.used()};
      case FlowStmt::Kind::If:
        break;
    }
  }
  return {std::move(s), RunStatus::Halted, meter.used()};
}

// ---------------------------------------------------------------------------

StructStmtPtr StructStmt::inc(std::string x) {
  return std::make_shared<const StructStmt>(StructStmt{Kind::Inc, std::move(x), {}, {}, {}});
}
StructStmtPtr StructStmt::dec(std::string x) {
  return std::make_shared<const StructStmt>(StructStmt{Kind::Dec, std::move(x), {}, {}, {}});
}
StructStmtPtr StructStmt::seq(std::vector<StructStmtPtr> items) {
  return std::make_shared<const StructStmt>(StructStmt{Kind::Seq, {}, {}, {}, std::move(items)});
}
StructStmtPtr StructStmt::if_(Cond c, StructStmtPtr t, StructStmtPtr e) {
  return std::make_shared<const StructStmt>(StructStmt{Kind::If, {}, {}, std::move(c), {std::move(t), std::move(e)}});
}
StructStmtPtr StructStmt::for_(std::string counter, std::string bound, StructStmtPtr body) {
  return std::make_shared<const StructStmt>(
      StructStmt{Kind::For, std::move(counter), std::move(bound), {}, {std::move(body)}});
}
StructStmtPtr StructStmt::while_(Cond c, StructStmtPtr body) {
  return std::make_shared<const StructStmt>(StructStmt{Kind::While, {}, {}, std::move(c), {std::move(body)}});
}

namespace {

struct Line {
  std::size_t indent;
  std::size_t number;
  std::vector<std::string> tokens;
};

class StructParser {
 public:
  explicit StructParser(std::string_view text) {
    std::size_t start = 0, number = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++number;
      std::string_view raw = text.substr(start, end - start);
      start = end + 1;
      auto toks = tokenize(raw, number);
      if (toks.empty()) continue;
      std::size_t indent = raw.find_first_not_of(' ');
      if (raw[indent] == '\t') throw SyntaxError(number, "indent with spaces");
      lines_.push_back({indent, number, std::move(toks)});
    }
  }

  StructProgram parse() {
    if (lines_.empty()) throw SyntaxError(0, "empty structured program");
    StructStmtPtr root = stmt(lines_[0].indent);
    if (pos_ != lines_.size()) throw SyntaxError(lines_[pos_].number, "unexpected line after the program");
    return {root};
  }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;

  bool at_indent(std::size_t indent) const { return pos_ < lines_.size() && lines_[pos_].indent == indent; }

  StructStmtPtr child(std::size_t parent_indent, std::size_t number) {
    if (pos_ >= lines_.size() || lines_[pos_].indent <= parent_indent) {
      throw SyntaxError(number, "missing indented body");
    }
    return stmt(lines_[pos_].indent);
  }

  StructStmtPtr stmt(std::size_t indent) {
    if (!at_indent(indent)) throw SyntaxError(pos_ < lines_.size() ? lines_[pos_].number : 0, "bad indentation");
    const Line& line = lines_[pos_++];
    Tokens in(line.tokens, line.number);
    std::string kw = in.next();
    if (kw == "inc" || kw == "dec") {
      std::string x = in.ident();
      in.end();
      return kw == "inc" ? StructStmt::inc(x) : StructStmt::dec(x);
    }
    if (kw == "seq") {
      in.end();
      std::vector<StructStmtPtr> items;
      if (pos_ < lines_.size() && lines_[pos_].indent > indent) {
        std::size_t inner = lines_[pos_].indent;
        while (at_indent(inner)) items.push_back(stmt(inner));
        if (pos_ < lines_.size() && lines_[pos_].indent > indent) {
          throw SyntaxError(lines_[pos_].number, "inconsistent indentation");
        }
      }
      return StructStmt::seq(std::move(items));
    }
    if (kw == "if") {
      Cond c = in.cond();
      in.end();
      StructStmtPtr t = child(indent, line.number);
      if (!at_indent(indent) || lines_[pos_].tokens != std::vector<std::string>{"else"}) {
        throw SyntaxError(line.number, "if without a matching else");
      }
      std::size_t else_line = lines_[pos_++].number;
      StructStmtPtr e = child(indent, else_line);
      return StructStmt::if_(std::move(c), std::move(t), std::move(e));
    }
    if (kw == "while") {
      Cond c = in.cond();
      in.end();
      return StructStmt::while_(std::move(c), child(indent, line.number));
    }
    if (kw == "for") {
      std::string k = in.ident();
      in.expect(":=");
      if (in.natural() != 0) in.fail("for loops start at 0");
      in.expect("to");
      std::string n = in.ident();
      in.end();
      return StructStmt::for_(std::move(k), std::move(n), child(indent, line.number));
    }
    in.fail("unknown statement '" + kw + "'");
  }
};

void print_struct_into(const StructStmt& s, std::size_t depth, std::string& out) {
  std::string pad(2 * depth, ' ');
  switch (s.kind) {
    case StructStmt::Kind::Inc:
      out += pad + "inc " + s.var + "\n";
      return;
    case StructStmt::Kind::Dec:
      out += pad + "dec " + s.var + "\n";
      return;
    case StructStmt::Kind::Seq:
      out += pad + "seq\n";
      for (const auto& k : s.kids) print_struct_into(*k, depth + 1, out);
      return;
    case StructStmt::Kind::If:
      out += pad + "if " + to_string(s.cond) + "\n";
      print_struct_into(*s.kids[0], depth + 1, out);
      out += pad + "else\n";
      print_struct_into(*s.kids[1], depth + 1, out);
      return;
    case StructStmt::Kind::For:
      out += pad + "for " + s.var + " := 0 to " + s.bound + "\n";
      print_struct_into(*s.kids[0], depth + 1, out);
      return;
    case StructStmt::Kind::While:
      out += pad + "while " + to_string(s.cond) + "\n";
      print_struct_into(*s.kids[0], depth + 1, out);
      return;
  }
}

class StructRunner {
 public:
  StructRunner(Store s, std::uint64_t fuel) : store(std::move(s)), meter(fuel) {}

  // False once fuel runs out.
  bool run(const StructStmt& s) {
    switch (s.kind) {
      case StructStmt::Kind::Inc:
      case StructStmt::Kind::Dec:
        if (!meter.spend()) return false;
        bump(store, s.var, s.kind == StructStmt::Kind::Inc);
        return true;
      case StructStmt::Kind::Seq:
        for (const auto& k : s.kids) {
          if (!run(*k)) return false;
        }
        return true;
      case StructStmt::Kind::If:
        if (!meter.spend()) return false;
        return run(*s.kids[s.cond.holds(store) ? 0 : 1]);
      case StructStmt::Kind::For: {
        std::uint64_t n = read_var(store, s.bound);
        for (std::uint64_t k = 0;; ++k) {
          if (!meter.spend()) return false;
          store[s.var] = k;
          if (!run(*s.kids[0])) return false;
          if (k == n) return true;
        }
      }
      case StructStmt::Kind::While:
        for (;;) {
          if (!meter.spend()) return false;
          if (!s.cond.holds(store)) return true;
          if (!run(*s.kids[0])) return false;
        }
    }
    return true;
  }

  Store store;
  Meter meter;
};

std::size_t count_kind(const StructStmt& s, StructStmt::Kind kind) {
  std::size_t n = s.kind == kind ? 1 : 0;
  for (const auto& k : s.kids) n += count_kind(*k, kind);
  return n;
}

void collect_struct(const StructStmt& s, std::set<std::string>& vars) {
  if (!s.var.empty()) vars.insert(s.var);
  if (!s.bound.empty()) vars.insert(s.bound);
  if (s.kind == StructStmt::Kind::If || s.kind == StructStmt::Kind::While) vars.insert(s.cond.var);
  for (const auto& k : s.kids) collect_struct(*k, vars);
}

// Unit steps moving the counter from `from` to `to`.
std::vector<StructStmtPtr> move_counter(const std::string& pc, std::size_t from, std::size_t to) {
  std::vector<StructStmtPtr> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(StructStmt::inc(pc));
  for (std::size_t i = to; i < from; ++i) out.push_back(StructStmt::dec(pc));
  return out;
}

StructStmtPtr seq_or_single(std::vector<StructStmtPtr> items) {
  if (items.size() == 1) return items[0];
  return StructStmt::seq(std::move(items));
}

// Translation of the statement of block j (1-based); `next` is the counter
// value for falling through (0 past the last block).
StructStmtPtr translate(const FlowStmt& s, const FlowProgram& p, const std::string& pc, std::size_t j,
                        std::size_t next) {
  switch (s.kind) {
    case FlowStmt::Kind::Inc:
    case FlowStmt::Kind::Dec: {
      std::vector<StructStmtPtr> items{s.kind == FlowStmt::Kind::Inc ? StructStmt::inc(s.name)
                                                                     : StructStmt::dec(s.name)};
      for (auto& m : move_counter(pc, j, next)) items.push_back(std::move(m));
      return seq_or_single(std::move(items));
    }
    case FlowStmt::Kind::Goto:
      return StructStmt::seq(move_counter(pc, j, p.index_of(s.name) + 1));
    case FlowStmt::Kind::Halt:
      return StructStmt::seq(move_counter(pc, j, 0));
    case FlowStmt::Kind::If:
      return StructStmt::if_(s.cond, translate(*s.then_branch, p, pc, j, next),
                             translate(*s.else_branch, p, pc, j, next));
  }
  return nullptr;
}

}  // namespace

StructProgram parse_struct(std::string_view text) { return StructParser(text).parse(); }

std::string print_struct(const StructProgram& p) {
  std::string out;
  print_struct_into(*p.root, 0, out);
  return out;
}

RunResult interpret_struct(const StructProgram& p, Store s, std::uint64_t fuel) {
  StructRunner r(std::move(s), fuel);
  bool done = r.run(*p.root);
  return {std::move(r.store), done ? RunStatus::Halted : RunStatus::FuelExhausted, r.meter.used()};
}

std::size_t while_count(const StructProgram& p) { return count_kind(*p.root, StructStmt::Kind::While); }
std::size_t for_count(const StructProgram& p) { return count_kind(*p.root, StructStmt::Kind::For); }

std::set<std::string> variables(const StructProgram& p) {
  std::set<std::string> vars;
  collect_struct(*p.root, vars);
  return vars;
}

std::string fresh_counter(const FlowProgram& p) {
  auto vars = p.variables();
  std::string pc = "pc";
  while (vars.count(pc)) pc += '\'';
  return pc;
}

StructProgram eliminate_goto(const FlowProgram& p) {
  const std::string pc = fresh_counter(p);
  const auto& blocks = p.blocks();
  const std::size_t n = blocks.size();
  // Build the dispatch cascade from the last block outwards.
  StructStmtPtr dispatch = translate(*blocks[n - 1].stmt, p, pc, n, 0);
  for (std::size_t j = n - 1; j >= 1; --j) {
    StructStmtPtr body = translate(*blocks[j - 1].stmt, p, pc, j, j + 1);
    dispatch = StructStmt::if_(Cond{pc, Relation::EqConst, j}, std::move(body), std::move(dispatch));
  }
  return {StructStmt::seq({StructStmt::inc(pc), StructStmt::while_(Cond{pc, Relation::GtConst, 0}, dispatch)})};
}

std::uint64_t overhead_factor(const FlowProgram& p) { return 2 * p.blocks().size() + 3; }

}  // namespace lamlab
