#pragma once

// Flowchart programs with goto, structured programs with for/while, and the
// program-counter construction that turns the former into the latter.

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lamlab/reduce.hpp"

namespace lamlab {

/// Variables hold naturals; absent variables read as 0.
using Store = std::map<std::string, std::uint64_t>;

std::uint64_t read_var(const Store& s, const std::string& x);

enum class Relation : std::uint8_t { EqConst, GtConst };

struct Cond {
  std::string var;
  Relation relation;
  std::uint64_t constant;

  bool holds(const Store& s) const;
  friend bool operator==(const Cond&, const Cond&) = default;
};

std::string to_string(const Cond& c);

enum class RunStatus : std::uint8_t { Halted, FuelExhausted };
const char* to_string(RunStatus s) noexcept;

struct RunResult {
  Store store;
  RunStatus status;
  std::uint64_t steps;
};

// ---------------------------------------------------------------------------
// Flow language

struct FlowStmt;
using FlowStmtPtr = std::shared_ptr<const FlowStmt>;

struct FlowStmt {
  enum class Kind : std::uint8_t { Inc, Dec, If, Goto, Halt };
  Kind kind;
  std::string name;  // variable for Inc/Dec, label for Goto
  Cond cond{};
  FlowStmtPtr then_branch, else_branch;

  static FlowStmtPtr inc(std::string x);
  static FlowStmtPtr dec(std::string x);
  static FlowStmtPtr if_(Cond c, FlowStmtPtr then_branch, FlowStmtPtr else_branch);
  static FlowStmtPtr go(std::string label);
  static FlowStmtPtr halt();
};

struct FlowBlock {
  std::string label;
  FlowStmtPtr stmt;
};

class FlowProgram {
 public:
  /// Throws Error(InvalidProgram) on duplicate labels, unknown goto targets
  /// or an empty block list.
  explicit FlowProgram(std::vector<FlowBlock> blocks);

  const std::vector<FlowBlock>& blocks() const noexcept { return blocks_; }
  /// Position of a label; throws Error(InvalidProgram) if absent.
  std::size_t index_of(const std::string& label) const;
  std::set<std::string> variables() const;

 private:
  std::vector<FlowBlock> blocks_;
  std::map<std::string, std::size_t> index_;
};

/// One block per line, "label: stmt" with
///   stmt := inc x | dec x | goto l | halt | if x (=|>) n then stmt else stmt
/// Blank lines and text after '#' are ignored.
FlowProgram parse_flow(std::string_view text);
std::string print_flow(const FlowProgram& p);

/// Small-step execution from the first block. Every Inc, Dec, Goto, Halt and
/// condition test costs one unit of fuel; running past the last block halts.
RunResult interpret_flow(const FlowProgram& p, Store s, std::uint64_t fuel = kDefaultFuel);

// ---------------------------------------------------------------------------
// Structured language

struct StructStmt;
using StructStmtPtr = std::shared_ptr<const StructStmt>;

struct StructStmt {
  enum class Kind : std::uint8_t { Inc, Dec, Seq, If, For, While };
  Kind kind;
  std::string var;    // Inc/Dec target, For counter
  std::string bound;  // For bound variable
  Cond cond{};
  std::vector<StructStmtPtr> kids;  // Seq items; If then/else; For/While body

  static StructStmtPtr inc(std::string x);
  static StructStmtPtr dec(std::string x);
  static StructStmtPtr seq(std::vector<StructStmtPtr> items);
  static StructStmtPtr if_(Cond c, StructStmtPtr then_branch, StructStmtPtr else_branch);
  /// for counter := 0 to bound do body (bound read once, inclusive).
  static StructStmtPtr for_(std::string counter, std::string bound, StructStmtPtr body);
  static StructStmtPtr while_(Cond c, StructStmtPtr body);
};

struct StructProgram {
  StructStmtPtr root;
};

/// Indented block syntax, two spaces per level:
///   inc x | dec x | seq | if x > n / else | for k := 0 to n | while x > n
/// where seq, if, else, for and while own the more indented lines below them.
StructProgram parse_struct(std::string_view text);
std::string print_struct(const StructProgram& p);

/// Big-step execution. Inc, Dec, condition tests and for iterations each cost
/// one unit of fuel.
RunResult interpret_struct(const StructProgram& p, Store s, std::uint64_t fuel = kDefaultFuel);

std::size_t while_count(const StructProgram& p);
std::size_t for_count(const StructProgram& p);
/// Always true: the structured language has no jump statement.
constexpr bool goto_free(const StructProgram&) noexcept { return true; }
std::set<std::string> variables(const StructProgram& p);

// ---------------------------------------------------------------------------
// Goto elimination

/// Numbers the blocks 1..n and dispatches on a fresh counter pc inside a
/// single while loop:
///   inc pc; while pc > 0 { if pc = 1 B1 else if pc = 2 B2 ... else Bn }
/// In the branch for block j, "goto l" becomes |idx(l) - j| unit steps on pc,
/// halt and falling off the end drive pc to 0.
StructProgram eliminate_goto(const FlowProgram& p);

/// The counter name chosen by eliminate_goto: "pc", primed until it is not a
/// variable of p.
std::string fresh_counter(const FlowProgram& p);

/// A run of p within fuel F is matched by a run of eliminate_goto(p) within
/// overhead_factor(p)·F; with n blocks this factor is 2n + 3.
std::uint64_t overhead_factor(const FlowProgram& p);

}  // namespace lamlab
