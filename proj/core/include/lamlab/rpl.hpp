#pragma once

// RPL: a reverse-polish toy language, its encoding as data, a reference
// interpreter, and compilers from RPL to TinyVM.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lamlab/tinyvm.hpp"

namespace lamlab {

/// Opcodes of the datum encoding. A program is its instruction stream
/// followed by END. Block structure is length-prefixed:
///   IF lt <then> ELSE le <else> ENDIF
///   WHILE lc <cond> DO lb <body> ENDWHILE
/// where each length counts the words of the block that follows it.
enum class RplOp : std::uint8_t {
  End = 0,
  Lit = 1,  // LIT n
  Add = 2,
  Sub = 3,
  Mul = 4,
  Dup = 5,
  Swap = 6,
  Drop = 7,
  Load = 8,   // LOAD k
  Store = 9,  // STORE k
  Read = 10,
  Emit = 11,
  If = 12,
  Else = 13,
  EndIf = 14,
  While = 15,
  Do = 16,
  EndWhile = 17,
};

struct RplInstr;
using RplBlock = std::vector<RplInstr>;

struct RplInstr {
  RplOp op;                // one of Lit..Emit, If or While
  std::uint64_t operand;   // Lit value, Load/Store cell
  RplBlock first, second;  // If: then/else; While: cond/body

  friend bool operator==(const RplInstr&, const RplInstr&) = default;
};

struct RplProgram {
  RplBlock body;
  friend bool operator==(const RplProgram&, const RplProgram&) = default;
};

/// Whitespace-separated tokens:
///   n  + - *  dup swap drop  load k  store k  read emit
///   if { ... } [else { ... }]   while { ... } do { ... }
/// '#' starts a comment running to the end of the line.
RplProgram parse_rpl(std::string_view text);
std::string print_rpl(const RplProgram& p);

Datum rpl_encode(const RplProgram& p);
/// Throws Error(InvalidProgram) unless d is exactly the encoding of a program.
RplProgram rpl_decode(const Datum& d);

/// Reference semantics. `if` pops a value and takes the first block when it is
/// nonzero; `while` runs its condition block, pops, and runs the body while
/// the value is nonzero. Arithmetic, memory and trap conditions are those of
/// TinyVM; each executed instruction costs one step.
VmResult rpl_run(const RplProgram& p, const Datum& input, std::uint64_t fuel = kDefaultFuel);

enum class CompileMode : std::uint8_t {
  Plain,    // one-to-one transliteration
  Folding,  // constant folding and peephole cleanup on literals
  Broken,   // like Folding but folds a - b as b - a
};

/// Size of the code region reserved for a block of `len` datum words.
constexpr std::uint64_t region_size(std::uint64_t len) { return 2 * len + 2; }

/// Host-side RPL -> TinyVM compiler over the datum encoding. Block code is
/// placed in a region of region_size(len) words that ends with a jump to the
/// region's end followed by HALT padding, so every jump target is known when
/// the jump is emitted. Throws Error(InvalidProgram) on a malformed datum.
VMProgram rpl_compile(const Datum& encoded, CompileMode mode);

/// The same compilers written in RPL. Each reads an encoded program from its
/// input and emits TinyVM words; with `skip_tag` it first discards one word.
RplProgram compiler_source(CompileMode mode, bool skip_tag = false);

}  // namespace lamlab
