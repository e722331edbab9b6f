#include <doctest.h>

#include <random>

#include "lamlab/bootcfg.hpp"
#include "lamlab/error.hpp"
#include "oracles.hpp"

using namespace lamlab;
using lamlab::testing::random_rpl_source;
using lamlab::testing::rpl_reference;

namespace {

const LanguageRegistry& reg() { return toy_registry(); }

CompilerConfig cfg(const char* text) { return parse_config(text, &reg()); }

// M programs add their own length to every input word, L programs their
// length minus one.
LanguageRegistry mini_registry() {
  LanguageRegistry r("M", [](const Datum& p, const Datum& x, std::uint64_t) {
    VmResult v;
    for (auto w : x) v.output.push_back(w + p.size());
    v.steps = x.size();
    return v;
  });
  r.add_language("L", [](const Datum& p, const Datum& x, std::uint64_t) {
    VmResult v;
    for (auto w : x) v.output.push_back(w + p.size() - 1);
    return v;
  });
  return r;
}

}  // namespace

TEST_SUITE("configurations") {
  TEST_CASE("syntax") {
    CompilerConfig c1 = parse_config("(L M c0 M)");
    CHECK_FALSE(c1.is_leaf());
    CHECK(lang_of(c1) == "L");
    CHECK(c1.c1() == CompilerConfig::leaf("M"));
    CHECK(c1.compiler() == "c0");
    CHECK(c1.c2() == CompilerConfig::leaf("M"));
    CHECK(parse_config("M") == CompilerConfig::leaf("M"));
    CHECK(lang_of(parse_config("M")) == "M");
    CHECK(parse_config(" ( L ,M, c0 ,M ) ") == c1);
    CHECK(print_config(cfg(kConfigC3)) == kConfigC3);
    CHECK(parse_config(print_config(cfg(kConfigC4))) == cfg(kConfigC4));
    CHECK_FALSE(parse_config("(L M c0 M)") == parse_config("(L M c_B M)"));
    CHECK_THROWS_AS(parse_config(""), SyntaxError);
    CHECK_THROWS_AS(parse_config("(L M c0)"), SyntaxError);
    CHECK_THROWS_AS(parse_config("(L M c0 M"), SyntaxError);
    CHECK_THROWS_AS(parse_config("(L M c0 M) M"), SyntaxError);
    CHECK_THROWS_AS(parse_config("()"), SyntaxError);
    try {
      parse_config("(L Q c0 M)", &reg());
      FAIL("expected an unknown language");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnknownLanguage);
    }
  }

  TEST_CASE("executability") {
    CHECK(is_executable(cfg(kConfigC1)));
    CHECK(is_executable(cfg(kConfigC2)));
    CHECK(is_executable(cfg(kConfigC3)));
    CHECK(is_executable(cfg(kConfigC4)));
    CHECK(is_executable(parse_config("M")));
    CHECK_FALSE(is_executable(parse_config("L")));
    CHECK_FALSE(is_executable(parse_config("(L L1 c M)")));
    CHECK_FALSE(is_executable(parse_config("(L M c L2)")));
    // the node's own language needs no executor
    CHECK(is_executable(parse_config("(Q M c M)")));
    CHECK(is_executable(parse_config("(A B c M)"), "B") == false);
    CHECK(is_executable(parse_config("(A B c B)"), "B"));
  }

  TEST_CASE("render_tree") {
    CHECK(render_tree(parse_config("M")) == "M\n");
    CHECK(render_tree(cfg(kConfigC1)) == "L\n|--c0--> M\n`~~~~~~~ M\n");
    CHECK(render_tree(cfg(kConfigC3)) ==
          "L\n"
          "|--c_B--> M\n"
          "`~~~~~~~~ L\n"
          "          |--c_B--> M\n"
          "          `~~~~~~~~ L\n"
          "                    |--c0--> M\n"
          "                    `~~~~~~~ M\n");
    CHECK(render_tree(parse_config("(A (B M x M) y M)")) ==
          "A\n"
          "|--y--> B\n"
          "|       |--x--> M\n"
          "|       `~~~~~~ M\n"
          "`~~~~~~ M\n");
  }
}

TEST_SUITE("registry") {
  TEST_CASE("lookups and errors") {
    const auto& r = reg();
    CHECK(r.machine() == "M");
    CHECK(r.languages() == std::vector<LangId>{"L", "L1", "L2", "M"});
    CHECK(r.program("c0").language == "M");
    CHECK(r.program("c_B").compiles->source == "L");
    CHECK(r.program("c_B").compiles->target == "M");
    CHECK_FALSE(r.program("bench_sum").compiles);
    CHECK_THROWS_AS(r.program("nope"), Error);
    CHECK_THROWS_AS(r.corpus("Q"), Error);
    CHECK_FALSE(r.corpus("L").empty());

    LanguageRegistry m = mini_registry();
    m.add_program("p", "L", {1, 2});
    CHECK_THROWS_AS(m.add_program("p", "L", {1}), Error);
    CHECK_THROWS_AS(m.add_program("q", "Q", {1}), Error);
    CHECK_THROWS_AS(m.add_program("q", "M", {1}, CompilingFunction{"L", "Q"}), Error);
    CHECK_THROWS_AS(m.add_language("L", nullptr), Error);
    CHECK_THROWS_AS(m.add_corpus("Q", {}), Error);
  }

  TEST_CASE("c0 is machine code and the RPL compilers agree with the host compilers") {
    const auto& r = reg();
    CHECK_NOTHROW(vm_decode(VMProgram{r.program("c0").code}));
    CHECK(r.program("c0").code == rpl_compile(rpl_encode(compiler_source(CompileMode::Plain)), CompileMode::Plain).words);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
      Datum src = rpl_encode(parse_rpl(random_rpl_source(rng, 1 + rng() % 30)));
      auto plain = r.run("M", r.program("c0").code, src, 100'000'000);
      auto folding = r.run("L", r.program("c_B").code, src, 100'000'000);
      CHECK(plain.output == rpl_compile(src, CompileMode::Plain).words);
      CHECK(folding.output == rpl_compile(src, CompileMode::Folding).words);
    }
  }

  TEST_CASE("property: compiling-function law for c0 and c_B on random programs") {
    const auto& r = reg();
    ConfigEvaluator eval(r);
    VMProgram c0 = VMProgram{r.program("c0").code};
    VMProgram cb = eval.precompile(cfg(kConfigC1), "c_B");
    std::mt19937_64 rng(32);
    for (int i = 0; i < 300; ++i) {
      Datum src = rpl_encode(parse_rpl(random_rpl_source(rng, 1 + rng() % 30)));
      Datum input(rng() % 6);
      for (auto& w : input) w = rng() % 10;
      auto want = rpl_reference(src, input);
      for (const VMProgram* compiler : {&c0, &cb}) {
        auto code = vm_run(*compiler, src, 100'000'000);
        REQUIRE(code.status == VmStatus::Halted);
        auto got = vm_run(VMProgram{code.output}, input, 100'000'000);
        CHECK(got.output == want.output);
        CHECK(got.status == want.status);
      }
    }
  }
}

TEST_SUITE("correctness") {
  TEST_CASE("the bootstrap configurations are correct") {
    for (const char* c : {kConfigC1, kConfigC2, kConfigC3, kConfigC4}) {
      CAPTURE(c);
      auto r = is_correct(cfg(c), reg());
      CHECK_MESSAGE(r.correct, r.reason);
    }
    CHECK(is_correct(parse_config("M"), reg()));
  }

  TEST_CASE("structural failures") {
    auto wrong_host = is_correct(cfg("(L M c_B M)"), reg());
    CHECK_FALSE(wrong_host);
    CHECK_FALSE(wrong_host.witness);
    CHECK_FALSE(is_correct(cfg("(L M c0 (L M c0 M))"), reg()));
    CHECK_FALSE(is_correct(cfg("(L L1 c0 M)"), reg()));
    CHECK_FALSE(is_correct(cfg("(L M c0 L2)"), reg()));
    CHECK_FALSE(is_correct(cfg("(L M missing M)"), reg()));
    CHECK_FALSE(is_correct(cfg("(L M bench_sum (L M c0 M))"), reg()));
    CHECK_FALSE(is_correct(parse_config("Q"), reg()));
    // a faulty child is reported even when the root is fine
    CHECK_FALSE(is_correct(cfg("(L M c_B (L M c_B M))"), reg()));
  }

  TEST_CASE("a broken optimizer is caught with a witness") {
    auto r = is_correct(cfg("(L M c_bad (L M c0 M))"), reg());
    CHECK_FALSE(r);
    REQUIRE(r.witness);
    const auto& [name, input] = *r.witness;
    const auto& entry = reg().program(name);
    ConfigEvaluator eval(reg());
    VMProgram bad = eval.precompile(cfg("(L M c0 M)"), "c_bad");
    auto compiled = vm_run(bad, entry.code, 100'000'000);
    REQUIRE(compiled.status == VmStatus::Halted);
    auto got = vm_run(VMProgram{compiled.output}, input, 1'000'000);
    auto want = rpl_reference(entry.code, input);
    CHECK_FALSE((got.output == want.output && got.status == want.status));
  }

  TEST_CASE("the two-language configuration as written in the comma form is correct but not executable") {
    CompilerConfig c = cfg("(L, M, c1, (L1, L2, c2_L1L2, (L2, M, c_I2, M)))");
    CHECK(is_correct(c, reg()));
    CHECK_FALSE(is_executable(c));
  }

  TEST_CASE("the first failing corpus input is the witness") {
    LanguageRegistry m = mini_registry();
    m.add_program("k", "M", {5, 5}, CompilingFunction{"L", "M"});
    m.add_corpus("L", {"p", {0, 0, 0}, {{}, {1, 2}, {3}}});
    auto r = is_correct(parse_config("(L M k M)", &m), m);
    CHECK_FALSE(r);
    REQUIRE(r.witness);
    CHECK(r.witness->first == "p");
    CHECK(r.witness->second == Datum{1, 2});
  }
}

TEST_SUITE("evaluation") {
  TEST_CASE("phi on the machine leaf is the VM run") {
    ConfigEvaluator eval(reg());
    auto r = eval.phi_eval_code(parse_config("M"), {1, 2, 1, 3, 5, 13, 0}, {});
    CHECK(r.status == PhiStatus::Ok);
    CHECK(r.value == Datum{5});
    REQUIRE(r.metrics.size() == 1);
    CHECK(r.metrics[0].phase == Phase::Run);
    CHECK(r.metrics[0].steps == 5);
    CHECK(r.steps(Phase::Compile) == 0);
  }

  TEST_CASE("phases follow the configuration") {
    ConfigEvaluator eval(reg());
    Datum x{10};
    auto c1 = eval.phi_eval(cfg(kConfigC1), "bench_sum", x);
    REQUIRE(c1.metrics.size() == 2);
    CHECK(c1.metrics[0].phase == Phase::Compile);
    CHECK(c1.metrics[0].program == "c0");
    CHECK(c1.metrics[1].phase == Phase::Run);
    CHECK(c1.metrics[1].program == "c0(bench_sum)");

    auto c3 = eval.phi_eval(cfg(kConfigC3), "bench_sum", x);
    REQUIRE(c3.metrics.size() == 2);
    CHECK(c3.metrics[0].program == "c_B");
    CHECK(c3.metrics[1].program == "c_B(bench_sum)");
    CHECK(c3.value == c1.value);

    // the compile phase is the precompiled compiler running on the program
    VMProgram cb = eval.precompile(cfg(kConfigC2), "c_B");
    auto direct = vm_run(cb, reg().program("bench_sum").code, 1'000'000'000);
    CHECK(c3.metrics[0].steps == direct.steps);
    auto target = vm_run(VMProgram{direct.output}, x, 1'000'000'000);
    CHECK(c3.metrics[1].steps == target.steps);
  }

  TEST_CASE("property: phi agrees with the semantics of the source language") {
    ConfigEvaluator eval(reg());
    std::vector<CompilerConfig> configs{cfg(kConfigC1), cfg(kConfigC2), cfg(kConfigC3), cfg(kConfigC4),
                                        cfg("(L, M, c1, (L1, L2, c2_L1L2, (L2, M, c_I2, M)))"), parse_config("L")};
    std::size_t checked = 0;
    for (const auto& c : configs) {
      for (const auto& cs : reg().corpus("L")) {
        for (const auto& x : cs.inputs) {
          CAPTURE(print_config(c));
          CAPTURE(cs.name);
          auto want = reg().run("L", cs.program, x, 1'000'000'000);
          if (want.status == VmStatus::Trap) {
            CHECK_THROWS_AS(eval.phi_eval_code(c, cs.program, x, cs.name), Error);
          } else {
            auto got = eval.phi_eval_code(c, cs.program, x, cs.name);
            CHECK(got.status == PhiStatus::Ok);
            CHECK(got.value == want.output);
          }
          ++checked;
        }
      }
    }
    CHECK(checked > 100);
  }

  TEST_CASE("oracle leaves are not metered") {
    ConfigEvaluator eval(reg());
    auto r = eval.phi_eval(parse_config("L"), "bench_sum", {5});
    CHECK(r.value == Datum{180});
    CHECK(r.steps(Phase::Run) == 0);
  }

  TEST_CASE("divergence and type errors") {
    ConfigEvaluator small(reg(), 10'000);
    Datum loop = rpl_encode(parse_rpl("while { 1 } do { }"));
    auto r = small.phi_eval_code(cfg(kConfigC1), loop, {});
    CHECK(r.status == PhiStatus::Diverged);
    CHECK(r.value.empty());
    REQUIRE(r.metrics.size() == 2);
    CHECK(r.metrics[1].steps == 10'000);
    // precompiling c_B needs far more than the budget
    try {
      small.phi_eval_code(cfg(kConfigC2), loop, {});
      FAIL("expected precompilation to run out of fuel");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FuelExhausted);
    }

    ConfigEvaluator eval(reg());
    try {
      eval.phi_eval(cfg(kConfigC1), "c0", {});
      FAIL("expected a type mismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TypeMismatch);
    }
    try {
      eval.phi_eval_code(cfg(kConfigC1), rpl_encode(parse_rpl("+")), {});
      FAIL("expected a trap");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Trap);
    }
  }

  TEST_CASE("precompile") {
    ConfigEvaluator eval(reg());
    CHECK(eval.precompile(parse_config("M"), "c0").words == reg().program("c0").code);
    VMProgram cb_plain = eval.precompile(cfg(kConfigC1), "c_B");
    VMProgram cb_folded = eval.precompile(cfg(kConfigC2), "c_B");
    Datum src = reg().program("c_B").code;
    CHECK(cb_plain == rpl_compile(src, CompileMode::Plain));
    CHECK(cb_folded == rpl_compile(src, CompileMode::Folding));
    // regions are padded, so only the contents differ
    CHECK(cb_folded.words.size() == cb_plain.words.size());
    CHECK_FALSE(cb_folded == cb_plain);
    CHECK(eval.precompile(cfg(kConfigC2), "c_B") == cb_folded);
    CHECK(precompile(cfg(kConfigC1), "c_B", reg()) == cb_plain);
    CHECK_THROWS_AS(eval.precompile(parse_config("L"), "c_B"), Error);
    CHECK_THROWS_AS(eval.precompile(cfg(kConfigC1), "c0"), Error);
    // a configuration with an oracle leaf cannot be turned into machine code
    CHECK_THROWS_AS(eval.precompile(cfg("(L, M, c1, (L1, L2, c2_L1L2, (L2, M, c_I2, M)))"), "c_B"), Error);
  }
}

TEST_SUITE("bootstrap") {
  TEST_CASE("the three configurations order as expected on every benchmark") {
    auto benchmarks = toy_benchmarks();
    CHECK(benchmarks.size() >= 5);
    auto rows = bootstrap_demo(reg(), benchmarks);
    REQUIRE(rows.size() == benchmarks.size());
    for (const auto& row : rows) {
      CAPTURE(row.program);
      CHECK(row.run[1] == row.run[2]);
      CHECK(row.run[2] < row.run[0]);
      CHECK(row.compile[2] < row.compile[1]);
      CHECK(row.output == rpl_reference(reg().program(row.program).code, row.input).output);
    }
    std::string table = format_demo(rows);
    for (const auto& row : rows) CHECK(table.find(row.program) != std::string::npos);
  }

  TEST_CASE("a program without foldable constants breaks strictness") {
    try {
      bootstrap_demo(reg(), {{"countdown", {3}}});
      FAIL("expected an ordering violation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::AssertionFailed);
      CHECK(std::string(e.what()).find("countdown") != std::string::npos);
    }
  }
}
