#include "lamlab/rpl.hpp"

#include <cctype>
#include <charconv>

#include "lamlab/error.hpp"

namespace lamlab {

namespace {

struct Token {
  std::string text;
  std::size_t line;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '{' || c == '}') {
      out.push_back({std::string(1, c), line});
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '{' &&
             text[j] != '}' && text[j] != '#') {
        ++j;
      }
      out.push_back({std::string(text.substr(i, j - i)), line});
      i = j;
    }
  }
  return out;
}

class RplParser {
 public:
  explicit RplParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  RplProgram parse() {
    RplProgram p{block()};
    if (pos_ < toks_.size()) fail("unexpected '" + toks_[pos_].text + "'");
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = pos_ < toks_.size() ? toks_[pos_].line : (toks_.empty() ? 1 : toks_.back().line);
    throw SyntaxError(line, msg);
  }

  bool peek(const char* t) const { return pos_ < toks_.size() && toks_[pos_].text == t; }

  void expect(const char* t) {
    if (!peek(t)) fail(std::string("expected '") + t + "'");
    ++pos_;
  }

  std::uint64_t natural() {
    if (pos_ >= toks_.size()) fail("expected a natural");
    const std::string& t = toks_[pos_].text;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail("expected a natural, got '" + t + "'");
    ++pos_;
    return v;
  }

  RplBlock braced() {
    expect("{");
    RplBlock b = block();
    expect("}");
    return b;
  }

  RplBlock block() {
    RplBlock out;
    while (pos_ < toks_.size() && !peek("}")) {
      const std::string t = toks_[pos_].text;
      if (std::isdigit(static_cast<unsigned char>(t[0]))) {
        out.push_back({RplOp::Lit, natural(), {}, {}});
        continue;
      }
      ++pos_;
      if (t == "+") {
        out.push_back({RplOp::Add, 0, {}, {}});
      } else if (t == "-") {
        out.push_back({RplOp::Sub, 0, {}, {}});
      } else if (t == "*") {
        out.push_back({RplOp::Mul, 0, {}, {}});
      } else if (t == "dup") {
        out.push_back({RplOp::Dup, 0, {}, {}});
      } else if (t == "swap") {
        out.push_back({RplOp::Swap, 0, {}, {}});
      } else if (t == "drop") {
        out.push_back({RplOp::Drop, 0, {}, {}});
      } else if (t == "load") {
        out.push_back({RplOp::Load, natural(), {}, {}});
      } else if (t == "store") {
        out.push_back({RplOp::Store, natural(), {}, {}});
      } else if (t == "read") {
        out.push_back({RplOp::Read, 0, {}, {}});
      } else if (t == "emit") {
        out.push_back({RplOp::Emit, 0, {}, {}});
      } else if (t == "if") {
        RplBlock then_block = braced();
        RplBlock else_block;
        if (peek("else")) {
          ++pos_;
          else_block = braced();
        }
        out.push_back({RplOp::If, 0, std::move(then_block), std::move(else_block)});
      } else if (t == "while") {
        RplBlock cond = braced();
        expect("do");
        RplBlock body = braced();
        out.push_back({RplOp::While, 0, std::move(cond), std::move(body)});
      } else {
        --pos_;
        fail("unknown token '" + t + "'");
      }
    }
    return out;
  }
};

void print_block(const RplBlock& b, std::size_t depth, std::string& out) {
  std::string pad(2 * depth, ' ');
  for (const auto& in : b) {
    out += pad;
    switch (in.op) {
      case RplOp::Lit: out += std::to_string(in.operand); break;
      case RplOp::Add: out += "+"; break;
      case RplOp::Sub: out += "-"; break;
      case RplOp::Mul: out += "*"; break;
      case RplOp::Dup: out += "dup"; break;
      case RplOp::Swap: out += "swap"; break;
      case RplOp::Drop: out += "drop"; break;
      case RplOp::Load: out += "load " + std::to_string(in.operand); break;
      case RplOp::Store: out += "store " + std::to_string(in.operand); break;
      case RplOp::Read: out += "read"; break;
      case RplOp::Emit: out += "emit"; break;
      case RplOp::If:
        out += "if {\n";
        print_block(in.first, depth + 1, out);
        out += pad + "} else {\n";
        print_block(in.second, depth + 1, out);
        out += pad + "}";
        break;
      case RplOp::While:
        out += "while {\n";
        print_block(in.first, depth + 1, out);
        out += pad + "} do {\n";
        print_block(in.second, depth + 1, out);
        out += pad + "}";
        break;
      default: break;
    }
    out += "\n";
  }
}

void encode_block(const RplBlock& b, Datum& out) {
  for (const auto& in : b) {
    out.push_back(static_cast<std::uint64_t>(in.op));
    switch (in.op) {
      case RplOp::Lit:
      case RplOp::Load:
      case RplOp::Store:
        out.push_back(in.operand);
        break;
      case RplOp::If:
      case RplOp::While: {
        bool is_if = in.op == RplOp::If;
        Datum first, second;
        encode_block(in.first, first);
        encode_block(in.second, second);
        out.push_back(first.size());
        out.insert(out.end(), first.begin(), first.end());
        out.push_back(static_cast<std::uint64_t>(is_if ? RplOp::Else : RplOp::Do));
        out.push_back(second.size());
        out.insert(out.end(), second.begin(), second.end());
        out.push_back(static_cast<std::uint64_t>(is_if ? RplOp::EndIf : RplOp::EndWhile));
        break;
      }
      default:
        break;
    }
  }
}

class RplDecoder {
 public:
  explicit RplDecoder(const Datum& d) : d_(d) {}

  RplProgram decode() {
    RplProgram p{block(d_.size())};
    if (pos_ >= d_.size() || d_[pos_] != 0) fail("missing END");
    if (++pos_ != d_.size()) fail("words after END");
    return p;
  }

 private:
  const Datum& d_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::InvalidProgram, "malformed RPL datum at word " + std::to_string(pos_) + ": " + msg);
  }

  std::uint64_t word() {
    if (pos_ >= d_.size()) fail("truncated");
    return d_[pos_++];
  }

  void expect(RplOp op) {
    if (word() != static_cast<std::uint64_t>(op)) {
      --pos_;
      fail("expected opcode " + std::to_string(static_cast<int>(op)));
    }
  }

  RplBlock sized() {
    std::uint64_t len = word();
    if (len > d_.size() - pos_) fail("block length past the end");
    std::size_t end = pos_ + len;
    RplBlock b = block(end);
    if (pos_ != end) fail("block length mismatch");
    return b;
  }

  // Decodes instructions up to `end` or a structural opcode.
  RplBlock block(std::size_t end) {
    RplBlock out;
    while (pos_ < end) {
      std::uint64_t w = d_[pos_];
      if (w == 0 || w == 13 || w == 14 || w == 16 || w == 17) break;
      if (w > 17) fail("unknown opcode " + std::to_string(w));
      ++pos_;
      auto op = static_cast<RplOp>(w);
      switch (op) {
        case RplOp::Lit:
        case RplOp::Load:
        case RplOp::Store:
          out.push_back({op, word(), {}, {}});
          break;
        case RplOp::If:
        case RplOp::While: {
          bool is_if = op == RplOp::If;
          RplBlock first = sized();
          expect(is_if ? RplOp::Else : RplOp::Do);
          RplBlock second = sized();
          expect(is_if ? RplOp::EndIf : RplOp::EndWhile);
          out.push_back({op, 0, std::move(first), std::move(second)});
          break;
        }
        default:
          out.push_back({op, 0, {}, {}});
          break;
      }
    }
    return out;
  }
};

class RplMachine {
 public:
  RplMachine(const Datum& input, std::uint64_t fuel) : input_(input), fuel_(fuel), memory_(kVmMemoryCells, 0) {}

  VmResult run(const RplBlock& b) {
    exec(b);
    return std::move(r_);
  }

 private:
  const Datum& input_;
  std::uint64_t fuel_;
  std::vector<std::uint64_t> stack_;
  std::vector<std::uint64_t> memory_;
  std::size_t in_pos_ = 0;
  VmResult r_;

  bool trap(const char* why) {
    r_.status = VmStatus::Trap;
    r_.trap = why;
    return false;
  }
  bool tick() {
    if (r_.steps == fuel_) {
      r_.status = VmStatus::FuelExhausted;
      return false;
    }
    ++r_.steps;
    return true;
  }
  bool push(std::uint64_t v) {
    if (stack_.size() >= kVmStackLimit) return trap("stack overflow");
    stack_.push_back(v);
    return true;
  }
  bool pop(std::uint64_t& v) {
    if (stack_.empty()) return trap("stack underflow");
    v = stack_.back();
    stack_.pop_back();
    return true;
  }

  // False once execution stops (trap or fuel).
  bool exec(const RplBlock& b) {
    for (const auto& in : b) {
      if (!step(in)) return false;
    }
    return true;
  }

  bool step(const RplInstr& in) {
    std::uint64_t a = 0, b = 0;
    switch (in.op) {
      case RplOp::Lit:
        return tick() && push(in.operand);
      case RplOp::Add:
      case RplOp::Sub:
      case RplOp::Mul:
        if (!tick()) return false;
        if (stack_.size() < 2) return trap("stack underflow");
        pop(b);
        pop(a);
        if (in.op == RplOp::Add) return push(a + b);
        if (in.op == RplOp::Sub) return push(a > b ? a - b : 0);
        return push(a * b);
      case RplOp::Dup:
        if (!tick()) return false;
        if (stack_.empty()) return trap("stack underflow");
        return push(stack_.back());
      case RplOp::Swap:
        if (!tick()) return false;
        if (stack_.size() < 2) return trap("stack underflow");
        std::swap(stack_[stack_.size() - 1], stack_[stack_.size() - 2]);
        return true;
      case RplOp::Drop:
        return tick() && pop(a);
      case RplOp::Load:
        if (!tick()) return false;
        if (in.operand >= kVmMemoryCells) return trap("memory cell out of range");
        return push(memory_[in.operand]);
      case RplOp::Store:
        if (!tick()) return false;
        if (in.operand >= kVmMemoryCells) return trap("memory cell out of range");
        if (!pop(a)) return false;
        memory_[in.operand] = a;
        return true;
      case RplOp::Read:
        if (!tick()) return false;
        if (in_pos_ >= input_.size()) return trap("read past end of input");
        return push(input_[in_pos_++]);
      case RplOp::Emit:
        if (!tick() || !pop(a)) return false;
        r_.output.push_back(a);
        return true;
      case RplOp::If:
        if (!tick() || !pop(a)) return false;
        return exec(a != 0 ? in.first : in.second);
      case RplOp::While:
        for (;;) {
          if (!exec(in.first)) return false;
          if (!tick() || !pop(a)) return false;
          if (a == 0) return true;
          if (!exec(in.second)) return false;
        }
      default:
        return true;
    }
  }
};

// Host mirror of the RPL compilers: same layout, same folding decisions.
class HostCompiler {
 public:
  HostCompiler(const Datum& in, CompileMode mode) : in_(in), mode_(mode) {}

  VMProgram run() {
    for (;;) {
      std::uint64_t op = read();
      if (op == 0) break;
      dispatch(static_cast<RplOp>(op));
    }
    flush();
    emit(0);
    return {std::move(out_)};
  }

 private:
  const Datum& in_;
  CompileMode mode_;
  std::size_t pos_ = 0;
  Datum out_;
  std::vector<std::uint64_t> frames_;
  int pending_ = 0;
  std::uint64_t c1_ = 0, c2_ = 0;

  std::uint64_t read() { return in_[pos_++]; }
  void emit(std::uint64_t w) { out_.push_back(w); }
  void emit(VmOp op) { out_.push_back(static_cast<std::uint64_t>(op)); }
  void emit(VmOp op, std::uint64_t operand) {
    emit(op);
    emit(operand);
  }
  std::uint64_t pc() const { return out_.size(); }
  bool folding() const { return mode_ != CompileMode::Plain; }

  void flush() {
    if (pending_ >= 1) emit(VmOp::Push, c1_);
    if (pending_ == 2) emit(VmOp::Push, c2_);
    pending_ = 0;
  }

  void pad() {
    std::uint64_t end = frames_.back();
    frames_.pop_back();
    std::uint64_t gap = end - pc();
    emit(VmOp::Jmp, end);
    for (std::uint64_t i = 2; i < gap; ++i) emit(VmOp::Halt);
  }

  void simple(VmOp op) {
    flush();
    emit(op);
  }

  void dispatch(RplOp op) {
    switch (op) {
      case RplOp::Lit: {
        std::uint64_t n = read();
        if (!folding()) {
          emit(VmOp::Push, n);
        } else if (pending_ == 2) {
          emit(VmOp::Push, c1_);
          c1_ = c2_;
          c2_ = n;
        } else if (pending_ == 1) {
          c2_ = n;
          pending_ = 2;
        } else {
          c1_ = n;
          pending_ = 1;
        }
        return;
      }
      case RplOp::Add:
      case RplOp::Sub:
      case RplOp::Mul: {
        VmOp vm = op == RplOp::Add ? VmOp::Add : op == RplOp::Sub ? VmOp::Sub : VmOp::Mul;
        if (folding() && pending_ == 2) {
          if (op == RplOp::Add) {
            c1_ = c1_ + c2_;
          } else if (op == RplOp::Mul) {
            c1_ = c1_ * c2_;
          } else if (mode_ == CompileMode::Broken) {
            c1_ = c2_ > c1_ ? c2_ - c1_ : 0;
          } else {
            c1_ = c1_ > c2_ ? c1_ - c2_ : 0;
          }
          pending_ = 1;
        } else {
          simple(vm);
        }
        return;
      }
      case RplOp::Dup:
        if (folding() && pending_ == 1) {
          c2_ = c1_;
          pending_ = 2;
        } else {
          simple(VmOp::Dup);
        }
        return;
      case RplOp::Swap:
        if (folding() && pending_ == 2) {
          std::swap(c1_, c2_);
        } else {
          simple(VmOp::Swap);
        }
        return;
      case RplOp::Drop:
        if (folding() && pending_ > 0) {
          --pending_;
        } else {
          emit(VmOp::Pop);
        }
        return;
      case RplOp::Load:
      case RplOp::Store:
        flush();
        emit(op == RplOp::Load ? VmOp::Load : VmOp::Store, read());
        return;
      case RplOp::Read:
        simple(VmOp::Read);
        return;
      case RplOp::Emit:
        simple(VmOp::Emit);
        return;
      case RplOp::If:
      case RplOp::Do: {
        flush();
        if (op == RplOp::Do) pad();
        std::uint64_t r = region_size(read());
        emit(VmOp::Jz, pc() + r + 4);
        frames_.push_back(pc() + r);
        return;
      }
      case RplOp::Else: {
        flush();
        pad();
        std::uint64_t r = region_size(read());
        emit(VmOp::Jmp, pc() + r + 2);
        frames_.push_back(pc() + r);
        return;
      }
      case RplOp::EndIf:
        flush();
        pad();
        return;
      case RplOp::While: {
        flush();
        std::uint64_t r = region_size(read());
        frames_.push_back(pc());
        frames_.push_back(pc() + r);
        return;
      }
      case RplOp::EndWhile: {
        flush();
        pad();
        std::uint64_t start = frames_.back();
        frames_.pop_back();
        emit(VmOp::Jmp, start);
        return;
      }
      case RplOp::End:
        return;
    }
  }
};

// ---------------------------------------------------------------------------
// The compilers as RPL text. Memory cells:
//   0 current opcode   1 output address   2 pending literal count
//   3 deeper literal   4 top literal      5 region size   6 region end
//   7 padding counter
// Region frames live on the data stack. Instruction sizes are spelled out
// as sums of their opcode and operand words.

const char* kAdvance1 = "load 1 1 + store 1\n";
const char* kAdvance2 = "load 1 1 1 + + store 1\n";

std::string emit_op(int op) { return std::to_string(op) + " emit " + kAdvance1; }

std::string flush_code(bool folding) {
  if (!folding) return "";
  return std::string("load 2 if {\n  1 emit load 3 emit ") + kAdvance2 +
         "  load 2 1 - if {\n    1 emit load 4 emit " + kAdvance2 + "  }\n} 0 store 2\n";
}

std::string pad_code() {
  return "store 6\n"
         "load 6 load 1 - 1 1 + - store 7\n"
         "11 emit load 6 emit\n"
         "while { load 7 } do { 0 emit load 7 1 - store 7 }\n"
         "load 6 store 1\n";
}

std::string region_code() { return "read 2 * 2 + store 5\n"; }

std::string handler(RplOp op, CompileMode mode) {
  const bool folding = mode != CompileMode::Plain;
  const std::string flush = flush_code(folding);
  switch (op) {
    case RplOp::Lit:
      if (!folding) return std::string("1 emit read emit ") + kAdvance2;
      return std::string("load 2 1 - if {\n  1 emit load 3 emit ") + kAdvance2 +
             "  load 4 store 3 read store 4\n"
             "} else {\n"
             "  load 2 if { read store 4 2 store 2 } else { read store 3 1 store 2 }\n"
             "}\n";
    case RplOp::Add:
    case RplOp::Sub:
    case RplOp::Mul: {
      int vm = op == RplOp::Add ? 5 : op == RplOp::Sub ? 6 : 7;
      if (!folding) return emit_op(vm);
      std::string fold = op == RplOp::Add   ? "load 3 load 4 +"
                         : op == RplOp::Mul ? "load 3 load 4 *"
                         : mode == CompileMode::Broken ? "load 4 load 3 -"
                                                       : "load 3 load 4 -";
      return "load 2 1 - if { " + fold + " store 3 1 store 2 } else {\n" + flush + emit_op(vm) + "}\n";
    }
    case RplOp::Dup:
      if (!folding) return emit_op(3);
      return "load 2 if {\n  load 2 1 - if {\n" + flush + emit_op(3) +
             "  } else { load 3 store 4 2 store 2 }\n} else {\n" + emit_op(3) + "}\n";
    case RplOp::Swap:
      if (!folding) return emit_op(4);
      return "load 2 1 - if { load 3 load 4 store 3 store 4 } else {\n" + flush + emit_op(4) + "}\n";
    case RplOp::Drop:
      if (!folding) return emit_op(2);
      return "load 2 if { load 2 1 - store 2 } else {\n" + emit_op(2) + "}\n";
    case RplOp::Load:
      return flush + "8 emit read emit " + kAdvance2;
    case RplOp::Store:
      return flush + "9 emit read emit " + kAdvance2;
    case RplOp::Read:
      return flush + emit_op(12);
    case RplOp::Emit:
      return flush + emit_op(13);
    case RplOp::If:
    case RplOp::Do:
      return flush + (op == RplOp::Do ? pad_code() : "") + region_code() +
             "10 emit load 1 load 5 + 1 1 + 1 1 + + + emit " + kAdvance2 + "load 1 load 5 +\n";
    case RplOp::Else:
      return flush + pad_code() + region_code() + "11 emit load 1 load 5 + 1 1 + + emit " + kAdvance2 +
             "load 1 load 5 +\n";
    case RplOp::EndIf:
      return flush + pad_code();
    case RplOp::While:
      return flush + region_code() + "load 1 load 1 load 5 +\n";
    case RplOp::EndWhile:
      return flush + pad_code() + "11 emit emit " + kAdvance2;
    case RplOp::End:
      break;
  }
  return "";
}

// Dispatch on cell 0 by repeated decrement: opcode k is handled where the
// k-th decrement reaches zero.
std::string dispatch_code(int k, CompileMode mode) {
  if (k == 17) return handler(RplOp::EndWhile, mode);
  return "load 0 1 - dup store 0 if {\n" + dispatch_code(k + 1, mode) + "} else {\n" +
         handler(static_cast<RplOp>(k), mode) + "}\n";
}

}  // namespace

RplProgram parse_rpl(std::string_view text) { return RplParser(tokenize(text)).parse(); }

std::string print_rpl(const RplProgram& p) {
  std::string out;
  print_block(p.body, 0, out);
  return out;
}

Datum rpl_encode(const RplProgram& p) {
  Datum out;
  encode_block(p.body, out);
  out.push_back(0);
  return out;
}

RplProgram rpl_decode(const Datum& d) { return RplDecoder(d).decode(); }

VmResult rpl_run(const RplProgram& p, const Datum& input, std::uint64_t fuel) {
  return RplMachine(input, fuel).run(p.body);
}

VMProgram rpl_compile(const Datum& encoded, CompileMode mode) {
  rpl_decode(encoded);
  return HostCompiler(encoded, mode).run();
}

RplProgram compiler_source(CompileMode mode, bool skip_tag) {
  std::string text;
  if (skip_tag) text += "read drop\n";
  text += "0 store 1 0 store 2\n";
  text += "while { read dup store 0 } do {\n" + dispatch_code(1, mode) + "}\n";
  text += flush_code(mode != CompileMode::Plain) + "0 emit\n";
  return parse_rpl(text);
}

}  // namespace lamlab
