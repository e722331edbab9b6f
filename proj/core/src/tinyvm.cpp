#include "lamlab/tinyvm.hpp"

#include <array>
#include <cctype>
#include <charconv>

#include "lamlab/error.hpp"

namespace lamlab {

namespace {

constexpr std::array<const char*, kVmOpCount> kMnemonics{"HALT", "PUSH", "POP",   "DUP", "SWAP", "ADD",  "SUB",
                                                         "MUL",  "LOAD", "STORE", "JZ",  "JMP",  "READ", "EMIT"};

bool parse_u64(std::string_view s, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool is_jump(VmOp op) { return op == VmOp::Jz || op == VmOp::Jmp; }

}  // namespace

std::string format_datum(const Datum& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(d[i]);
  }
  return out;
}

Datum parse_datum(std::string_view text) {
  Datum out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    std::uint64_t v = 0;
    if (j == i || !parse_u64(text.substr(i, j - i), v)) throw SyntaxError(i, "expected a natural");
    out.push_back(v);
    i = j;
  }
  return out;
}

const char* mnemonic(VmOp op) noexcept {
  auto i = static_cast<std::size_t>(op);
  return i < kVmOpCount ? kMnemonics[i] : "?";
}

bool has_operand(VmOp op) noexcept {
  switch (op) {
    case VmOp::Push:
    case VmOp::Load:
    case VmOp::Store:
    case VmOp::Jz:
    case VmOp::Jmp:
      return true;
    default:
      return false;
  }
}

VMProgram vm_encode(const std::vector<VmInstr>& instrs) {
  VMProgram p;
  for (const auto& in : instrs) {
    p.words.push_back(static_cast<std::uint64_t>(in.op));
    if (has_operand(in.op)) p.words.push_back(in.operand);
  }
  return p;
}

std::vector<VmInstr> vm_decode(const VMProgram& p) {
  std::vector<VmInstr> out;
  const auto& w = p.words;
  for (std::size_t i = 0; i < w.size();) {
    if (w[i] >= kVmOpCount) {
      throw Error(ErrorKind::InvalidProgram, "unknown opcode " + std::to_string(w[i]) + " at " + std::to_string(i));
    }
    VmInstr in{static_cast<VmOp>(w[i]), 0};
    if (has_operand(in.op)) {
      if (i + 1 >= w.size()) throw Error(ErrorKind::InvalidProgram, "missing operand at " + std::to_string(i));
      in.operand = w[i + 1];
      if (is_jump(in.op) && in.operand > w.size()) {
        throw Error(ErrorKind::InvalidProgram, "jump target " + std::to_string(in.operand) + " out of range");
      }
      i += 2;
    } else {
      i += 1;
    }
    out.push_back(in);
  }
  return out;
}

VMProgram assemble(std::string_view text) {
  std::vector<VmInstr> instrs;
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) words.push_back(line.substr(i, j - i));
      i = j;
    }
    if (words.empty()) continue;
    std::string name(words[0]);
    for (auto& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    std::size_t op = 0;
    while (op < kVmOpCount && name != kMnemonics[op]) ++op;
    if (op == kVmOpCount) throw SyntaxError(line_no, "unknown instruction '" + std::string(words[0]) + "'");
    VmInstr in{static_cast<VmOp>(op), 0};
    std::size_t arity = has_operand(in.op) ? 2 : 1;
    if (words.size() != arity) throw SyntaxError(line_no, std::string(kMnemonics[op]) + " takes " +
                                                          (arity == 2 ? "one operand" : "no operand"));
    if (arity == 2 && !parse_u64(words[1], in.operand)) throw SyntaxError(line_no, "operand must be a natural");
    instrs.push_back(in);
  }
  return vm_encode(instrs);
}

std::string disassemble(const VMProgram& p) {
  std::string out;
  std::size_t addr = 0;
  for (const auto& in : vm_decode(p)) {
    out += std::to_string(addr) + ": " + mnemonic(in.op);
    if (has_operand(in.op)) out += " " + std::to_string(in.operand);
    out += "\n";
    addr += has_operand(in.op) ? 2 : 1;
  }
  return out;
}

const char* to_string(VmStatus s) noexcept {
  switch (s) {
    case VmStatus::Halted: return "halted";
    case VmStatus::FuelExhausted: return "fuel-exhausted";
    case VmStatus::Trap: return "trap";
  }
  return "?";
}

VmResult vm_run(const VMProgram& p, const Datum& input, std::uint64_t fuel) {
  VmResult r;
  const auto& w = p.words;
  std::vector<std::uint64_t> stack;
  std::vector<std::uint64_t> memory(kVmMemoryCells, 0);
  std::size_t pc = 0, in_pos = 0;
  auto trap = [&](std::string why) {
    r.status = VmStatus::Trap;
    r.trap = std::move(why) + " at " + std::to_string(pc);
    return r;
  };
  while (pc < w.size()) {
    if (r.steps == fuel) {
      r.status = VmStatus::FuelExhausted;
      return r;
    }
    ++r.steps;
    std::uint64_t code = w[pc];
    if (code >= kVmOpCount) return trap("bad opcode " + std::to_string(code));
    auto op = static_cast<VmOp>(code);
    std::uint64_t operand = 0;
    if (has_operand(op)) {
      if (pc + 1 >= w.size()) return trap("missing operand");
      operand = w[pc + 1];
    }
    std::size_t next = pc + (has_operand(op) ? 2 : 1);
    auto need = [&](std::size_t n) { return stack.size() >= n; };
    switch (op) {
      case VmOp::Halt:
        return r;
      case VmOp::Push:
        if (stack.size() >= kVmStackLimit) return trap("stack overflow");
        stack.push_back(operand);
        break;
      case VmOp::Pop:
        if (!need(1)) return trap("stack underflow");
        stack.pop_back();
        break;
      case VmOp::Dup:
        if (!need(1)) return trap("stack underflow");
        if (stack.size() >= kVmStackLimit) return trap("stack overflow");
        stack.push_back(stack.back());
        break;
      case VmOp::Swap:
        if (!need(2)) return trap("stack underflow");
        std::swap(stack[stack.size() - 1], stack[stack.size() - 2]);
        break;
      case VmOp::Add:
      case VmOp::Sub:
      case VmOp::Mul: {
        if (!need(2)) return trap("stack underflow");
        std::uint64_t b = stack.back();
        stack.pop_back();
        std::uint64_t& a = stack.back();
        if (op == VmOp::Add) {
          a += b;
        } else if (op == VmOp::Sub) {
          a = a > b ? a - b : 0;
        } else {
          a *= b;
        }
        break;
      }
      case VmOp::Load:
        if (operand >= kVmMemoryCells) return trap("memory cell out of range");
        if (stack.size() >= kVmStackLimit) return trap("stack overflow");
        stack.push_back(memory[operand]);
        break;
      case VmOp::Store:
        if (operand >= kVmMemoryCells) return trap("memory cell out of range");
        if (!need(1)) return trap("stack underflow");
        memory[operand] = stack.back();
        stack.pop_back();
        break;
      case VmOp::Jz:
      case VmOp::Jmp: {
        bool jump = true;
        if (op == VmOp::Jz) {
          if (!need(1)) return trap("stack underflow");
          jump = stack.back() == 0;
          stack.pop_back();
        }
        if (jump) {
          if (operand > w.size()) return trap("jump target out of range");
          next = operand;
        }
        break;
      }
      case VmOp::Read:
        if (in_pos >= input.size()) return trap("read past end of input");
        if (stack.size() >= kVmStackLimit) return trap("stack overflow");
        stack.push_back(input[in_pos++]);
        break;
      case VmOp::Emit:
        if (!need(1)) return trap("stack underflow");
        r.output.push_back(stack.back());
        stack.pop_back();
        break;
    }
    pc = next;
  }
  return r;
}

}  // namespace lamlab
