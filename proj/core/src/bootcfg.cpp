#include "lamlab/bootcfg.hpp"

#include <cctype>
#include <sstream>

#include "lamlab/error.hpp"

namespace lamlab {

// ---------------------------------------------------------------------------
// Registry

LanguageRegistry::LanguageRegistry(LangId machine, Semantics executor) : machine_(std::move(machine)) {
  langs_[machine_] = Language{std::move(executor), {}};
}

void LanguageRegistry::add_language(const LangId& lang, Semantics oracle) {
  if (langs_.count(lang)) throw Error(ErrorKind::InvalidProgram, "language '" + lang + "' is already registered");
  langs_[lang] = Language{std::move(oracle), {}};
}

void LanguageRegistry::add_program(const ProgramRef& name, const LangId& lang, Datum code,
                                   std::optional<CompilingFunction> compiles) {
  if (!langs_.count(lang)) throw Error(ErrorKind::UnknownLanguage, "unknown language '" + lang + "'");
  if (compiles && (!langs_.count(compiles->source) || !langs_.count(compiles->target))) {
    throw Error(ErrorKind::UnknownLanguage, "compiler '" + name + "' mentions an unknown language");
  }
  if (!programs_.emplace(name, ProgramEntry{lang, std::move(code), std::move(compiles)}).second) {
    throw Error(ErrorKind::InvalidProgram, "program '" + name + "' is already registered");
  }
}

void LanguageRegistry::add_corpus(const LangId& lang, CorpusCase c) {
  auto it = langs_.find(lang);
  if (it == langs_.end()) throw Error(ErrorKind::UnknownLanguage, "unknown language '" + lang + "'");
  it->second.corpus.push_back(std::move(c));
}

std::vector<LangId> LanguageRegistry::languages() const {
  std::vector<LangId> out;
  for (const auto& [k, v] : langs_) out.push_back(k);
  return out;
}

const ProgramEntry& LanguageRegistry::program(const ProgramRef& name) const {
  auto it = programs_.find(name);
  if (it == programs_.end()) throw Error(ErrorKind::UnknownLanguage, "unknown program '" + name + "'");
  return it->second;
}

std::vector<ProgramRef> LanguageRegistry::programs() const {
  std::vector<ProgramRef> out;
  for (const auto& [k, v] : programs_) out.push_back(k);
  return out;
}

const std::vector<CorpusCase>& LanguageRegistry::corpus(const LangId& lang) const {
  auto it = langs_.find(lang);
  if (it == langs_.end()) throw Error(ErrorKind::UnknownLanguage, "unknown language '" + lang + "'");
  return it->second.corpus;
}

VmResult LanguageRegistry::run(const LangId& lang, const Datum& program, const Datum& input,
                               std::uint64_t fuel) const {
  auto it = langs_.find(lang);
  if (it == langs_.end()) throw Error(ErrorKind::UnknownLanguage, "unknown language '" + lang + "'");
  return it->second.semantics(program, input, fuel);
}

// ---------------------------------------------------------------------------
// Configurations

struct CompilerConfig::Node {
  LangId lang;
  std::optional<CompilerConfig> c1;
  ProgramRef compiler;
  std::optional<CompilerConfig> c2;
};

CompilerConfig CompilerConfig::leaf(LangId lang) {
  return CompilerConfig(std::make_shared<const Node>(Node{std::move(lang), std::nullopt, {}, std::nullopt}));
}

CompilerConfig CompilerConfig::node(LangId lang, CompilerConfig c1, ProgramRef compiler, CompilerConfig c2) {
  return CompilerConfig(
      std::make_shared<const Node>(Node{std::move(lang), std::move(c1), std::move(compiler), std::move(c2)}));
}

bool CompilerConfig::is_leaf() const noexcept { return !node_->c1; }
const LangId& CompilerConfig::lang() const noexcept { return node_->lang; }
const CompilerConfig& CompilerConfig::c1() const { return *node_->c1; }
const ProgramRef& CompilerConfig::compiler() const { return node_->compiler; }
const CompilerConfig& CompilerConfig::c2() const { return *node_->c2; }

bool operator==(const CompilerConfig& a, const CompilerConfig& b) {
  if (a.lang() != b.lang() || a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return true;
  return a.compiler() == b.compiler() && a.c1() == b.c1() && a.c2() == b.c2();
}

namespace {

class ConfigParser {
 public:
  ConfigParser(std::string_view text, const LanguageRegistry* reg) : text_(text), reg_(reg) {}

  CompilerConfig parse() {
    CompilerConfig c = config();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return c;
  }

 private:
  std::string_view text_;
  const LanguageRegistry* reg_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  static bool is_sep(char c) { return c == ',' || std::isspace(static_cast<unsigned char>(c)); }

  void skip_ws() {
    while (pos_ < text_.size() && is_sep(text_[pos_])) ++pos_;
  }

  std::string atom() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_sep(text_[pos_]) && text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  LangId language() {
    std::size_t at = pos_;
    LangId l = atom();
    if (reg_ && !reg_->has_language(l)) {
      throw Error(ErrorKind::UnknownLanguage, "unknown language '" + l + "' at " + std::to_string(at));
    }
    return l;
  }

  CompilerConfig config() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] != '(') return CompilerConfig::leaf(language());
    ++pos_;
    LangId l = language();
    CompilerConfig c1 = config();
    ProgramRef c = atom();
    CompilerConfig c2 = config();
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')' after (LANG CONFIG prog CONFIG)");
    ++pos_;
    return CompilerConfig::node(std::move(l), std::move(c1), std::move(c), std::move(c2));
  }
};

void render_into(const CompilerConfig& c, std::vector<std::string>& lines) {
  lines.push_back(c.lang());
  if (c.is_leaf()) return;
  std::string left_edge = "|--" + c.compiler() + "--> ";
  std::string right_edge = "`" + std::string(left_edge.size() - 2, '~') + " ";
  std::vector<std::string> left, right;
  render_into(c.c1(), left);
  render_into(c.c2(), right);
  for (std::size_t i = 0; i < left.size(); ++i) {
    lines.push_back((i == 0 ? left_edge : "|" + std::string(left_edge.size() - 1, ' ')) + left[i]);
  }
  for (std::size_t i = 0; i < right.size(); ++i) {
    lines.push_back((i == 0 ? right_edge : std::string(right_edge.size(), ' ')) + right[i]);
  }
}

bool same_outcome(const VmResult& a, const VmResult& b) { return a.status == b.status && a.output == b.output; }

std::string describe(const VmResult& r) {
  std::string s = std::string(to_string(r.status)) + " [" + format_datum(r.output) + "]";
  if (r.status == VmStatus::Trap) s += " (" + r.trap + ")";
  return s;
}

CorrectnessReport fail_report(std::string reason) {
  CorrectnessReport r;
  r.correct = false;
  r.reason = std::move(reason);
  return r;
}

}  // namespace

CompilerConfig parse_config(std::string_view text, const LanguageRegistry* reg) {
  return ConfigParser(text, reg).parse();
}

std::string print_config(const CompilerConfig& c) {
  if (c.is_leaf()) return c.lang();
  return "(" + c.lang() + " " + print_config(c.c1()) + " " + c.compiler() + " " + print_config(c.c2()) + ")";
}

const LangId& lang_of(const CompilerConfig& c) { return c.lang(); }

bool is_executable(const CompilerConfig& c, const LangId& machine) {
  if (c.is_leaf()) return c.lang() == machine;
  return is_executable(c.c1(), machine) && is_executable(c.c2(), machine);
}

CorrectnessReport is_correct(const CompilerConfig& c, const LanguageRegistry& reg, std::uint64_t fuel) {
  if (c.is_leaf()) {
    if (!reg.has_language(c.lang())) return fail_report("unknown language '" + c.lang() + "'");
    return {};
  }
  if (auto r = is_correct(c.c1(), reg, fuel); !r) return r;
  if (auto r = is_correct(c.c2(), reg, fuel); !r) return r;
  const std::string& name = c.compiler();
  if (!reg.has_program(name)) return fail_report("unknown program '" + name + "'");
  const ProgramEntry& entry = reg.program(name);
  const LangId& host = lang_of(c.c2());
  const LangId& target = lang_of(c.c1());
  if (entry.language != host) {
    return fail_report(name + " is a program in " + entry.language + ", not in " + host);
  }
  if (!entry.compiles || entry.compiles->source != c.lang() || entry.compiles->target != target) {
    return fail_report(name + " is not declared as a compiler from " + c.lang() + " to " + target);
  }
  const auto& corpus = reg.corpus(c.lang());
  if (corpus.empty()) return fail_report("no corpus for language " + c.lang());
  for (const auto& cs : corpus) {
    VmResult compiled = reg.run(host, entry.code, cs.program, fuel);
    if (compiled.status != VmStatus::Halted) {
      CorrectnessReport r = fail_report(name + " did not compile " + cs.name + ": " + describe(compiled));
      r.witness = {{cs.name, {}}};
      return r;
    }
    for (const auto& x : cs.inputs) {
      VmResult got = reg.run(target, compiled.output, x, fuel);
      VmResult want = reg.run(c.lang(), cs.program, x, fuel);
      if (!same_outcome(got, want)) {
        CorrectnessReport r = fail_report(name + " miscompiles " + cs.name + " on input [" + format_datum(x) +
                                          "]: got " + describe(got) + ", expected " + describe(want));
        r.witness = {{cs.name, x}};
        return r;
      }
    }
  }
  return {};
}

const char* to_string(Phase p) noexcept { return p == Phase::Compile ? "compile" : "run"; }

std::uint64_t PhiResult::steps(Phase p) const {
  std::uint64_t n = 0;
  for (const auto& m : metrics) {
    if (m.phase == p) n += m.steps;
  }
  return n;
}

ConfigEvaluator::ConfigEvaluator(const LanguageRegistry& reg, std::uint64_t fuel) : reg_(reg), fuel_(fuel) {}

PhiResult ConfigEvaluator::phi_eval(const CompilerConfig& c, const ProgramRef& p, const Datum& x) {
  const ProgramEntry& entry = reg_.program(p);
  if (entry.language != lang_of(c)) {
    throw Error(ErrorKind::TypeMismatch, p + " is a program in " + entry.language + ", the configuration runs " +
                                             lang_of(c));
  }
  return phi_eval_code(c, entry.code, x, p);
}

PhiResult ConfigEvaluator::phi_eval_code(const CompilerConfig& c, const Datum& program, const Datum& x,
                                         const std::string& label) {
  PhiResult out;
  if (!phi(c, program, label, x, Phase::Run, out)) {
    out.status = PhiStatus::Diverged;
    out.value.clear();
  }
  return out;
}

bool ConfigEvaluator::phi(const CompilerConfig& c, const Datum& p, const std::string& label, const Datum& x,
                          Phase phase, PhiResult& out) {
  auto settle = [&](const VmResult& r, const std::string& what, Phase ph, bool metered) {
    out.metrics.push_back({ph, what, metered ? r.steps : 0});
    if (r.status == VmStatus::Trap) throw Error(ErrorKind::Trap, what + " trapped: " + r.trap);
    return r.status == VmStatus::Halted;
  };
  if (c.is_leaf()) {
    VmResult r = reg_.run(c.lang(), p, x, fuel_);
    if (!settle(r, label, phase, c.lang() == reg_.machine())) return false;
    out.value = r.output;
    return true;
  }
  const ProgramEntry& compiler = reg_.program(c.compiler());
  if (compiler.language != lang_of(c.c2())) {
    throw Error(ErrorKind::TypeMismatch, c.compiler() + " is a program in " + compiler.language + ", not in " +
                                             lang_of(c.c2()));
  }
  Datum q;
  if (is_executable(c.c2(), reg_.machine())) {
    VMProgram code = precompile(c.c2(), c.compiler());
    VmResult r = vm_run(code, p, fuel_);
    if (!settle(r, c.compiler(), Phase::Compile, true)) return false;
    q = std::move(r.output);
  } else {
    if (!phi(c.c2(), compiler.code, c.compiler(), p, Phase::Compile, out)) return false;
    q = out.value;
  }
  return phi(c.c1(), q, c.compiler() + "(" + label + ")", x, phase, out);
}

VMProgram ConfigEvaluator::precompile(const CompilerConfig& c, const ProgramRef& target) {
  const ProgramEntry& entry = reg_.program(target);
  if (entry.language != lang_of(c)) {
    throw Error(ErrorKind::TypeMismatch, target + " is a program in " + entry.language + ", not in " + lang_of(c));
  }
  std::string key = print_config(c) + " " + target;
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  VMProgram code = precompile_code(c, entry.code);
  cache_.emplace(std::move(key), code);
  return code;
}

VMProgram ConfigEvaluator::precompile_code(const CompilerConfig& c, const Datum& program) {
  if (c.is_leaf()) {
    if (c.lang() != reg_.machine()) {
      throw Error(ErrorKind::InvalidProgram, "configuration " + c.lang() + " is not executable");
    }
    return {program};
  }
  VMProgram compiler = precompile(c.c2(), c.compiler());
  VmResult r = vm_run(compiler, program, fuel_);
  if (r.status == VmStatus::FuelExhausted) throw Error(ErrorKind::FuelExhausted, c.compiler() + " ran out of fuel");
  if (r.status == VmStatus::Trap) throw Error(ErrorKind::Trap, c.compiler() + " trapped: " + r.trap);
  return precompile_code(c.c1(), r.output);
}

PhiResult phi_eval(const CompilerConfig& c, const ProgramRef& p, const Datum& x, const LanguageRegistry& reg,
                   std::uint64_t fuel) {
  return ConfigEvaluator(reg, fuel).phi_eval(c, p, x);
}

VMProgram precompile(const CompilerConfig& c, const ProgramRef& target, const LanguageRegistry& reg,
                     std::uint64_t fuel) {
  return ConfigEvaluator(reg, fuel).precompile(c, target);
}

std::string render_tree(const CompilerConfig& c) {
  std::vector<std::string> lines;
  render_into(c, lines);
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Toy instantiation

namespace {

constexpr std::uint64_t kTagL1 = 101;
constexpr std::uint64_t kTagL2 = 102;

struct NamedSource {
  const char* name;
  const char* text;
};

const NamedSource kBenchmarks[] = {
    {"bench_sum",
     "read store 0 0 store 1\n"
     "while { load 0 } do {\n"
     "  load 1 load 0 3 4 * * + store 1\n"
     "  load 0 1 - store 0\n"
     "}\n"
     "load 1 emit\n"},
    {"bench_poly",
     "read store 0\n"
     "while { load 0 } do {\n"
     "  load 0 dup * 2 3 * load 0 * + 60 60 * + emit\n"
     "  load 0 1 - store 0\n"
     "}\n"},
    {"bench_fact",
     "read store 0 1 store 1\n"
     "while { load 0 } do {\n"
     "  load 1 load 0 * store 1\n"
     "  load 0 2 1 - - store 0\n"
     "}\n"
     "load 1 10 10 * 7 + + emit\n"},
    {"bench_pow",
     "read store 0 1 store 1\n"
     "while { load 0 } do {\n"
     "  load 1 1 2 + * store 1\n"
     "  load 0 1 - store 0\n"
     "}\n"
     "load 1 emit\n"},
    {"bench_table",
     "read store 0\n"
     "while { load 0 } do {\n"
     "  4 1 + store 1\n"
     "  while { load 1 } do {\n"
     "    load 0 load 1 * 100 1 - + emit\n"
     "    load 1 1 - store 1\n"
     "  }\n"
     "  load 0 1 - store 0\n"
     "}\n"},
    {"bench_fib",
     "read store 0 0 store 1 1 0 + store 2\n"
     "while { load 0 } do {\n"
     "  load 1 load 2 dup store 1 + store 2\n"
     "  load 0 3 2 - - store 0\n"
     "}\n"
     "load 1 emit\n"},
};

const std::pair<const char*, std::uint64_t> kBenchmarkInputs[] = {
    {"bench_sum", 50}, {"bench_poly", 30}, {"bench_table", 8},
    {"bench_fact", 20}, {"bench_pow", 25}, {"bench_fib", 40},
};

struct CorpusSource {
  const char* name;
  const char* text;
  std::vector<Datum> inputs;
};

std::vector<CorpusSource> corpus_sources() {
  return {
      {"arith", "read read + emit read read - emit read read * emit", {{3, 4, 10, 3, 6, 7}, {0, 0, 2, 9, 0, 5}}},
      {"consts",
       "7 3 - emit 3 7 - emit 2 3 4 * + emit 5 dup * emit 1 2 swap - emit 9 8 drop emit "
       "18446744073709551615 2 + emit 1 2 3 drop drop emit",
       {{}}},
      {"stackops", "read dup emit read swap emit emit 4 read swap drop emit 6 7 swap emit emit", {{1, 2, 3}}},
      {"branch",
       "read if { 1 if { 11 emit } else { 12 emit } } else { 0 if { 13 emit } else { 14 emit } }\n"
       "read 2 - if { 15 emit }",
       {{0, 0}, {5, 3}, {1, 2}}},
      {"memory", "read store 10 read store 11 load 11 load 10 emit emit 3 store 255 load 255 emit", {{4, 5}}},
      {"nested",
       "read store 0\n"
       "while { load 0 } do {\n"
       "  load 0 2 - if { load 0 emit } else { 100 emit }\n"
       "  load 0 1 - store 0\n"
       "}",
       {{0}, {5}}},
      {"countdown", "read while { dup } do { dup emit 1 - } drop", {{3}, {0}}},
      {"underflow", "1 + emit", {{}}},
      {"bad_cell", "4 store 256", {{}}},
  };
}

Semantics rpl_semantics() {
  return [](const Datum& program, const Datum& input, std::uint64_t fuel) {
    RplProgram p;
    try {
      p = rpl_decode(program);
    } catch (const Error& e) {
      VmResult r;
      r.status = VmStatus::Trap;
      r.trap = e.what();
      return r;
    }
    return rpl_run(p, input, fuel);
  };
}

Semantics tagged_semantics(std::uint64_t tag) {
  return [tag](const Datum& program, const Datum& input, std::uint64_t fuel) {
    if (program.empty() || program[0] != tag) {
      VmResult r;
      r.status = VmStatus::Trap;
      r.trap = "missing language tag " + std::to_string(tag);
      return r;
    }
    return rpl_semantics()(Datum(program.begin() + 1, program.end()), input, fuel);
  };
}

Datum tagged(std::uint64_t tag, const Datum& d) {
  Datum out{tag};
  out.insert(out.end(), d.begin(), d.end());
  return out;
}

// L1 -> L2 by retagging: copies the datum word for word, reading the operand
// of every operand-carrying opcode without interpreting it.
const char* kRetagSource =
    "read drop 102 emit\n"
    "while { read dup store 0 } do {\n"
    "  load 0 emit\n"
    "  load 0 1 - 1 load 0 - + if { } else { read emit }\n"
    "  load 0 8 - 8 load 0 - + if { } else { read emit }\n"
    "  load 0 9 - 9 load 0 - + if { } else { read emit }\n"
    "  load 0 12 - 12 load 0 - + if { } else { read emit }\n"
    "  load 0 13 - 13 load 0 - + if { } else { read emit }\n"
    "  load 0 15 - 15 load 0 - + if { } else { read emit }\n"
    "  load 0 16 - 16 load 0 - + if { } else { read emit }\n"
    "}\n"
    "0 emit\n";

LanguageRegistry build_toy_registry() {
  LanguageRegistry reg("M", [](const Datum& program, const Datum& input, std::uint64_t fuel) {
    return vm_run(VMProgram{program}, input, fuel);
  });
  reg.add_language("L", rpl_semantics());
  reg.add_language("L1", tagged_semantics(kTagL1));
  reg.add_language("L2", tagged_semantics(kTagL2));

  const Datum plain = rpl_encode(compiler_source(CompileMode::Plain));
  const Datum folding = rpl_encode(compiler_source(CompileMode::Folding));
  const Datum broken = rpl_encode(compiler_source(CompileMode::Broken));
  reg.add_program("c0", "M", rpl_compile(plain, CompileMode::Plain).words, CompilingFunction{"L", "M"});
  reg.add_program("c_B", "L", folding, CompilingFunction{"L", "M"});
  reg.add_program("c_bad", "L", broken, CompilingFunction{"L", "M"});
  reg.add_program("c1", "L1", tagged(kTagL1, folding), CompilingFunction{"L", "M"});
  reg.add_program("c2", "L2", tagged(kTagL2, rpl_encode(compiler_source(CompileMode::Folding, true))),
                  CompilingFunction{"L1", "M"});
  reg.add_program("c_I2", "M",
                  rpl_compile(rpl_encode(compiler_source(CompileMode::Plain, true)), CompileMode::Plain).words,
                  CompilingFunction{"L2", "M"});
  reg.add_program("c2_L1L2", "L2", tagged(kTagL2, rpl_encode(parse_rpl(kRetagSource))), CompilingFunction{"L1", "L2"});

  std::vector<CorpusCase> cases;
  for (const auto& b : kBenchmarks) {
    Datum code = rpl_encode(parse_rpl(b.text));
    reg.add_program(b.name, "L", code);
    cases.push_back({b.name, code, {{0}, {1}, {7}}});
  }
  for (const auto& s : corpus_sources()) {
    Datum code = rpl_encode(parse_rpl(s.text));
    reg.add_program(s.name, "L", code);
    cases.push_back({s.name, std::move(code), s.inputs});
  }
  // The compilers themselves, compiling two small programs.
  cases.push_back({"self", folding, {cases[0].program, cases[cases.size() - 3].program}});

  for (const auto& cs : cases) {
    reg.add_corpus("L", cs);
    reg.add_corpus("L1", {cs.name, tagged(kTagL1, cs.program), cs.inputs});
    reg.add_corpus("L2", {cs.name, tagged(kTagL2, cs.program), cs.inputs});
  }
  return reg;
}

}  // namespace

const LanguageRegistry& toy_registry() {
  static const LanguageRegistry reg = build_toy_registry();
  return reg;
}

std::vector<std::pair<ProgramRef, Datum>> toy_benchmarks() {
  std::vector<std::pair<ProgramRef, Datum>> out;
  for (const auto& [name, n] : kBenchmarkInputs) out.emplace_back(name, Datum{n});
  return out;
}

std::vector<DemoRow> bootstrap_demo(const LanguageRegistry& reg,
                                    const std::vector<std::pair<ProgramRef, Datum>>& benchmarks) {
  const std::array<CompilerConfig, 3> configs{parse_config(kConfigC1, &reg), parse_config(kConfigC2, &reg),
                                              parse_config(kConfigC3, &reg)};
  ConfigEvaluator eval(reg);
  std::vector<DemoRow> rows;
  for (const auto& [name, input] : benchmarks) {
    DemoRow row{name, input, {}, {}, {}};
    VmResult want = reg.run(reg.program(name).language, reg.program(name).code, input, 1'000'000'000);
    for (std::size_t i = 0; i < configs.size(); ++i) {
      PhiResult r = eval.phi_eval(configs[i], name, input);
      if (r.status != PhiStatus::Ok || r.value != want.output) {
        throw Error(ErrorKind::AssertionFailed, name + ": C" + std::to_string(i + 1) + " disagrees with the oracle");
      }
      row.output = r.value;
      row.compile[i] = r.steps(Phase::Compile);
      row.run[i] = r.steps(Phase::Run);
    }
    if (!(row.run[1] == row.run[2] && row.run[2] < row.run[0])) {
      throw Error(ErrorKind::AssertionFailed, name + ": run(C2) = run(C3) < run(C1) violated");
    }
    if (!(row.compile[2] < row.compile[1])) {
      throw Error(ErrorKind::AssertionFailed, name + ": compile(C3) < compile(C2) violated");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_demo(const std::vector<DemoRow>& rows) {
  std::ostringstream out;
  auto cell = [&](const std::string& s, std::size_t w) { out << std::string(w > s.size() ? w - s.size() : 0, ' ') << s; };
  out << "program      input";
  for (int i = 1; i <= 3; ++i) {
    cell("C" + std::to_string(i) + " compile", 13);
    cell("C" + std::to_string(i) + " run", 9);
  }
  out << "\n";
  for (const auto& r : rows) {
    out << r.program << std::string(r.program.size() < 12 ? 12 - r.program.size() : 1, ' ');
    cell(format_datum(r.input), 6);
    for (std::size_t i = 0; i < 3; ++i) {
      cell(std::to_string(r.compile[i]), 13);
      cell(std::to_string(r.run[i]), 9);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace lamlab
