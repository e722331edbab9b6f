#pragma once

// Compiler configurations over a registry of languages, their evaluation
// function Φ, and the TinyVM/RPL instantiation of the bootstrap.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lamlab/rpl.hpp"
#include "lamlab/tinyvm.hpp"

namespace lamlab {

using LangId = std::string;
/// Programs are referred to by a registry-wide unique name.
using ProgramRef = std::string;

/// Meaning of a program of one language: output, steps, status.
using Semantics = std::function<VmResult(const Datum& program, const Datum& input, std::uint64_t fuel)>;

struct CompilingFunction {
  LangId source;
  LangId target;
};

struct ProgramEntry {
  LangId language;
  Datum code;
  std::optional<CompilingFunction> compiles;
};

struct CorpusCase {
  std::string name;
  Datum program;
  std::vector<Datum> inputs;
};

class LanguageRegistry {
 public:
  /// The machine language executes its programs with `executor`.
  LanguageRegistry(LangId machine, Semantics executor);

  /// Adds a non-machine language described by a semantic oracle.
  void add_language(const LangId& lang, Semantics oracle);
  /// Throws Error(UnknownLanguage) or Error(InvalidProgram) on a duplicate name.
  void add_program(const ProgramRef& name, const LangId& lang, Datum code,
                   std::optional<CompilingFunction> compiles = std::nullopt);
  void add_corpus(const LangId& lang, CorpusCase c);

  const LangId& machine() const noexcept { return machine_; }
  bool has_language(const LangId& lang) const { return langs_.count(lang) > 0; }
  std::vector<LangId> languages() const;
  /// Throws Error(UnknownLanguage) for an unknown name.
  const ProgramEntry& program(const ProgramRef& name) const;
  bool has_program(const ProgramRef& name) const { return programs_.count(name) > 0; }
  std::vector<ProgramRef> programs() const;
  const std::vector<CorpusCase>& corpus(const LangId& lang) const;

  /// ⟦program⟧_lang(input): the executor for the machine, the oracle otherwise.
  VmResult run(const LangId& lang, const Datum& program, const Datum& input, std::uint64_t fuel) const;

 private:
  struct Language {
    Semantics semantics;
    std::vector<CorpusCase> corpus;
  };
  LangId machine_;
  std::map<LangId, Language> langs_;
  std::map<ProgramRef, ProgramEntry> programs_;
};

class CompilerConfig {
 public:
  static CompilerConfig leaf(LangId lang);
  static CompilerConfig node(LangId lang, CompilerConfig c1, ProgramRef compiler, CompilerConfig c2);

  bool is_leaf() const noexcept;
  const LangId& lang() const noexcept;
  /// Node accessors; undefined on leaves.
  const CompilerConfig& c1() const;
  const ProgramRef& compiler() const;
  const CompilerConfig& c2() const;

  friend bool operator==(const CompilerConfig& a, const CompilerConfig& b);

 private:
  struct Node;
  explicit CompilerConfig(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// `(LANG CONFIG prog-name CONFIG)` or `LANG`. With a registry, every
/// language must be known (Error(UnknownLanguage) otherwise).
CompilerConfig parse_config(std::string_view text, const LanguageRegistry* reg = nullptr);
std::string print_config(const CompilerConfig& c);

/// |L| = L and |(L, C1, c, C2)| = L.
const LangId& lang_of(const CompilerConfig& c);

/// Leaves are executable iff they are the machine; nodes iff both children are.
bool is_executable(const CompilerConfig& c, const LangId& machine = "M");

struct CorrectnessReport {
  bool correct = true;
  std::string reason;
  /// First failing corpus program and input, when the failure is semantic.
  std::optional<std::pair<std::string, Datum>> witness;

  explicit operator bool() const noexcept { return correct; }
};

/// Structural conditions exactly; the compiling-function condition on the
/// registry corpus of each node's source language.
CorrectnessReport is_correct(const CompilerConfig& c, const LanguageRegistry& reg,
                             std::uint64_t fuel = 100'000'000);

enum class Phase : std::uint8_t { Compile, Run };
const char* to_string(Phase p) noexcept;

struct PhaseMetric {
  Phase phase;
  std::string program;
  std::uint64_t steps;
};

enum class PhiStatus : std::uint8_t { Ok, Diverged };

struct PhiResult {
  Datum value;
  std::vector<PhaseMetric> metrics;
  PhiStatus status = PhiStatus::Ok;

  std::uint64_t steps(Phase p) const;
};

/// Φ_L p x = ⟦p⟧_L(x) and Φ_(L,C1,c,C2) p x = Φ_C1(Φ_C2 c p) x.
///
/// A compiler sitting on an executable configuration is first precompiled to
/// machine code (cached, not metered); running it on p is the compile phase.
/// Only machine steps are metered; oracle leaves count 0.
class ConfigEvaluator {
 public:
  explicit ConfigEvaluator(const LanguageRegistry& reg, std::uint64_t fuel = 1'000'000'000);

  /// Throws Error(TypeMismatch) if p is not a program of |c|, Error(Trap) if
  /// a machine or oracle run traps.
  PhiResult phi_eval(const CompilerConfig& c, const ProgramRef& p, const Datum& x);
  /// Same for an unnamed program assumed to be in |c|.
  PhiResult phi_eval_code(const CompilerConfig& c, const Datum& program, const Datum& x,
                          const std::string& label = "p");

  /// Machine code computing what `target` computes under c. Throws
  /// Error(InvalidProgram) if c is not executable, Error(FuelExhausted) or
  /// Error(Trap) if a compile run fails.
  VMProgram precompile(const CompilerConfig& c, const ProgramRef& target);
  VMProgram precompile_code(const CompilerConfig& c, const Datum& program);

 private:
  const LanguageRegistry& reg_;
  std::uint64_t fuel_;
  std::map<std::string, VMProgram> cache_;

  bool phi(const CompilerConfig& c, const Datum& p, const std::string& label, const Datum& x, Phase phase,
           PhiResult& out);
};

PhiResult phi_eval(const CompilerConfig& c, const ProgramRef& p, const Datum& x, const LanguageRegistry& reg,
                   std::uint64_t fuel = 1'000'000'000);
VMProgram precompile(const CompilerConfig& c, const ProgramRef& target, const LanguageRegistry& reg,
                     std::uint64_t fuel = 1'000'000'000);

/// ASCII tree: the compiler labels the left edge, the right edge is wavy.
///   L
///   |--c0--> M
///   `~~~~~~~ M
std::string render_tree(const CompilerConfig& c);

// ---------------------------------------------------------------------------
// Toy instantiation

/// Machine M = TinyVM; L = RPL; L1 and L2 are RPL programs behind a one-word
/// tag (101 and 102) used to instantiate the two-language configuration.
/// Programs: c0 (in M, L→M, no optimization), c_B (in L, L→M, folding),
/// c_bad (in L, L→M, folds subtraction backwards), c1 (in L1, L→M),
/// c2 (in L2, L1→M), c_I2 (in M, L2→M), and the benchmark programs.
const LanguageRegistry& toy_registry();

/// Example configurations over the toy registry.
inline constexpr const char* kConfigC1 = "(L M c0 M)";
inline constexpr const char* kConfigC2 = "(L M c_B (L M c0 M))";
inline constexpr const char* kConfigC3 = "(L M c_B (L M c_B (L M c0 M)))";
inline constexpr const char* kConfigC4 = "(L M c1 (L1 M c2 (L2 M c_I2 M)))";

/// RPL benchmark programs with foldable constants, and their inputs.
std::vector<std::pair<ProgramRef, Datum>> toy_benchmarks();

struct DemoRow {
  ProgramRef program;
  Datum input;
  Datum output;
  /// Compile and run steps under C1, C2, C3.
  std::array<std::uint64_t, 3> compile{};
  std::array<std::uint64_t, 3> run{};
};

/// Runs every benchmark under C1, C2 and C3 and checks
/// run(C2) = run(C3) < run(C1) and compile(C3) < compile(C2), and that all
/// outputs match the RPL oracle. Throws Error(AssertionFailed) naming the
/// offending benchmark otherwise.
std::vector<DemoRow> bootstrap_demo(const LanguageRegistry& reg,
                                    const std::vector<std::pair<ProgramRef, Datum>>& benchmarks);

std::string format_demo(const std::vector<DemoRow>& rows);

}  // namespace lamlab
