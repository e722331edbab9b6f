#pragma once

// TinyVM: a metered stack machine whose programs are flat sequences of
// naturals, so that compilers can read and write them as data.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lamlab/reduce.hpp"

namespace lamlab {

/// Values exchanged between programs: flat sequences of naturals.
using Datum = std::vector<std::uint64_t>;

std::string format_datum(const Datum& d);
/// Comma or whitespace separated naturals; throws SyntaxError.
Datum parse_datum(std::string_view text);

enum class VmOp : std::uint8_t {
  Halt = 0,
  Push = 1,  // PUSH n
  Pop = 2,
  Dup = 3,
  Swap = 4,
  Add = 5,  // wraps modulo 2^64
  Sub = 6,  // monus
  Mul = 7,  // wraps modulo 2^64
  Load = 8,   // LOAD a
  Store = 9,  // STORE a
  Jz = 10,    // JZ t: pop, jump to word address t if zero
  Jmp = 11,   // JMP t
  Read = 12,
  Emit = 13,
};

inline constexpr std::uint64_t kVmOpCount = 14;
inline constexpr std::size_t kVmMemoryCells = 256;
inline constexpr std::size_t kVmStackLimit = 1 << 16;

const char* mnemonic(VmOp op) noexcept;
/// True for PUSH, LOAD, STORE, JZ and JMP.
bool has_operand(VmOp op) noexcept;

struct VmInstr {
  VmOp op;
  std::uint64_t operand = 0;
  friend bool operator==(const VmInstr&, const VmInstr&) = default;
};

/// A program is its word sequence; jump targets are word addresses.
struct VMProgram {
  Datum words;
  friend bool operator==(const VMProgram&, const VMProgram&) = default;
};

VMProgram vm_encode(const std::vector<VmInstr>& instrs);
/// Linear sweep; throws Error(InvalidProgram) on an unknown opcode, a missing
/// operand, or a jump target beyond the end of the program.
std::vector<VmInstr> vm_decode(const VMProgram& p);

/// One instruction per line ("PUSH 2", "ADD", ...), '#' comments.
VMProgram assemble(std::string_view text);
/// Listing with word addresses.
std::string disassemble(const VMProgram& p);

enum class VmStatus : std::uint8_t { Halted, FuelExhausted, Trap };
const char* to_string(VmStatus s) noexcept;

struct VmResult {
  Datum output;
  std::uint64_t steps = 0;
  VmStatus status = VmStatus::Halted;
  std::string trap;  // reason when status == Trap
};

/// Executes from address 0. Every executed instruction (HALT included) costs
/// one step; running off the end halts. Stack underflow or overflow, a bad
/// opcode, an out-of-range jump or memory cell, and READ on exhausted input
/// all trap.
VmResult vm_run(const VMProgram& p, const Datum& input, std::uint64_t fuel = kDefaultFuel);

}  // namespace lamlab
