#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "lamlab/bootcfg.hpp"
#include "lamlab/boehm.hpp"
#include "lamlab/cl.hpp"
#include "lamlab/combinators.hpp"
#include "lamlab/degoto.hpp"
#include "lamlab/error.hpp"
#include "lamlab/reduce.hpp"
#include "lamlab/selfint.hpp"
#include "lamlab/syntax.hpp"

namespace lamlab::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::uint64_t fuel = 100'000;
  std::string format = "text";
  std::uint64_t seed = 0;
  bool no_fold = false;
  bool fuel_given = false;
};

class Context {
 public:
  Context(const Options& o, std::ostream& out, std::ostream& err) : opt(o), out(out), err(err) {}

  const Options& opt;
  std::ostream& out;
  std::ostream& err;

  bool json() const { return opt.format == "json"; }
  std::string show(const Term& t) const { return print_term(t, TermFormat::Ascii, {!opt.no_fold}); }
  void emit(const Json& j) const { out << j.dump(2) << "\n"; }
  /// Library default unless --fuel was given.
  std::uint64_t fuel_or(std::uint64_t fallback) const { return opt.fuel_given ? opt.fuel : fallback; }
};

// "FuelExhausted" -> "fuel-exhausted"
std::string kebab(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isupper(static_cast<unsigned char>(c)) && !out.empty()) out += '-';
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string format_path(const Path& p) {
  if (p.empty()) return "root";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "." : "") + std::to_string(p[i]);
  return s;
}

int fuel_exhausted(const Context& ctx, const std::string& what) {
  if (ctx.json()) {
    ctx.emit(Json{{"error", "FuelExhausted"}, {"message", what}});
  } else {
    ctx.err << "error: fuel-exhausted: " << what << "\n";
  }
  return kExitFuel;
}

// --- lam -------------------------------------------------------------------

int lam_nf(const Context& ctx, const std::string& text, bool eta) {
  Term t = parse_term(text);
  ReductionTrace tr = normalize(t, eta ? Mode::BetaEta : Mode::Beta, ctx.opt.fuel);
  if (tr.status == Status::FuelExhausted) {
    return fuel_exhausted(ctx, "no normal form within " + std::to_string(tr.step_count) + " steps");
  }
  if (ctx.json()) {
    ctx.emit(Json{{"term", ctx.show(tr.final)}, {"ast", term_to_json(tr.final)}, {"steps", tr.step_count}});
  } else {
    ctx.out << ctx.show(tr.final) << "\n";
  }
  return kExitOk;
}

int lam_trace(const Context& ctx, const std::string& text, bool eta, bool random) {
  Term cur = parse_term(text);
  Json steps = Json::array();
  if (!ctx.json()) ctx.out << "0: " << ctx.show(cur) << "\n";
  auto record = [&](const Term& next, const char* rule, const Path& path, std::size_t n) {
    if (ctx.json()) {
      steps.push_back(Json{{"rule", rule}, {"path", path}, {"term", ctx.show(next)}});
    } else {
      ctx.out << n << " (" << rule << " at " << format_path(path) << "): " << ctx.show(next) << "\n";
    }
  };
  bool normal = true;
  std::uint64_t count = 0;
  if (random) {
    std::mt19937_64 rng(ctx.opt.seed);
    while (auto s = step_random(cur, rng)) {
      if (count == ctx.opt.fuel || s->first.depth() > kMaxTermDepth) {
        normal = false;
        break;
      }
      cur = s->first;
      record(cur, to_string(s->second.rule), s->second.path, ++count);
    }
  } else {
    ReductionTrace tr = normalize(cur, eta ? Mode::BetaEta : Mode::Beta, ctx.opt.fuel);
    for (const Step& s : tr.steps) {
      cur = contract_at(cur, s.path, s.rule);
      record(cur, to_string(s.rule), s.path, ++count);
    }
    normal = tr.status == Status::NormalForm;
  }
  if (ctx.json()) {
    ctx.emit(Json{{"initial", text},
                  {"steps", steps},
                  {"status", normal ? "normal-form" : "fuel-exhausted"},
                  {"final", ctx.show(cur)}});
    return normal ? kExitOk : kExitFuel;
  }
  if (!normal) return fuel_exhausted(ctx, "no normal form within " + std::to_string(count) + " steps");
  ctx.out << "normal form after " << count << " steps\n";
  return kExitOk;
}

// --- boehm -----------------------------------------------------------------

Term term_arg(const std::optional<std::string>& text, const char* fallback) {
  return parse_term(text ? *text : fallback);
}

int boehm_separate(const Context& ctx, const std::string& a, const std::string& b,
                   const std::optional<std::string>& p0, const std::optional<std::string>& p1) {
  SeparationProblem prob{parse_term(a), parse_term(b), term_arg(p0, "\\x y.x"), term_arg(p1, "\\x y.y"),
                         ctx.opt.fuel};
  std::vector<std::string> transcript;
  Certificate cert = boehm_out(prob, &transcript);
  Json args = Json::array();
  for (const auto& n : cert.args) args.push_back(ctx.show(n));
  if (ctx.json()) {
    ctx.emit(Json{{"m0", ctx.show(prob.m0)},
                  {"m1", ctx.show(prob.m1)},
                  {"p0", ctx.show(prob.p0)},
                  {"p1", ctx.show(prob.p1)},
                  {"args", args},
                  {"transcript", transcript},
                  {"verified", true}});
    return kExitOk;
  }
  ctx.out << "transcript:\n";
  for (const auto& line : transcript) ctx.out << "  " << line << "\n";
  ctx.out << "certificate:\n";
  for (std::size_t i = 0; i < cert.args.size(); ++i) ctx.out << "  N" << i + 1 << " = " << args[i].get<std::string>() << "\n";
  ctx.out << "verified: M0 N = " << ctx.show(prob.p0) << " and M1 N = " << ctx.show(prob.p1) << "\n";
  return kExitOk;
}

Certificate read_certificate(const std::string& source) {
  std::string text = trim(source);
  if (text.empty() || text[0] != '{') text = read_file(source);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(e.byte, "certificate is not JSON");
  }
  if (!j.is_object() || !j.contains("args") || !j["args"].is_array()) {
    throw SyntaxError(0, "certificate must be an object with an \"args\" array");
  }
  Certificate cert;
  for (const auto& a : j["args"]) cert.args.push_back(a.is_string() ? parse_term(a.get<std::string>()) : term_from_json(a));
  return cert;
}

int boehm_verify(const Context& ctx, const std::string& a, const std::string& b, const std::string& cert_source,
                 const std::optional<std::string>& p0, const std::optional<std::string>& p1) {
  Certificate cert = read_certificate(cert_source);
  bool ok = verify_certificate(parse_term(a), parse_term(b), cert, term_arg(p0, "\\x y.x"), term_arg(p1, "\\x y.y"),
                               ctx.opt.fuel);
  if (ctx.json()) {
    ctx.emit(Json{{"verified", ok}});
  } else {
    ctx.out << (ok ? "verified" : "refuted") << "\n";
  }
  return ok ? kExitOk : kExitDomain;
}

// --- cl --------------------------------------------------------------------

int cl_phi(const Context& ctx, const std::string& word, bool apply_i) {
  Term code = phi(word);
  if (!apply_i) {
    if (ctx.json()) {
      ctx.emit(Json{{"word", word}, {"term", ctx.show(code)}});
    } else {
      ctx.out << ctx.show(code) << "\n";
    }
    return kExitOk;
  }
  ReductionTrace tr = normalize(Term::app(code, combinator(Combinator::I)), Mode::Beta, ctx.opt.fuel);
  if (tr.status == Status::FuelExhausted) return fuel_exhausted(ctx, "phi(w) I has no normal form within fuel");
  if (ctx.json()) {
    ctx.emit(Json{{"word", word}, {"normal_form", ctx.show(tr.final)}, {"steps", tr.step_count}});
  } else {
    ctx.out << ctx.show(tr.final) << "\n";
  }
  return kExitOk;
}

int cl_tolam(const Context& ctx, const std::string& text) {
  CLTerm p = parse_cl(text);
  Term t = cl_to_lambda(p);
  if (ctx.json()) {
    ctx.emit(Json{{"cl", flatten(p)}, {"term", ctx.show(t)}, {"ast", term_to_json(t)}});
  } else {
    ctx.out << ctx.show(t) << "\n";
  }
  return kExitOk;
}

int cl_weak(const Context& ctx, const std::string& text) {
  WeakResult r = weak_normalize(parse_cl(text), ctx.opt.fuel);
  if (r.status == Status::FuelExhausted) {
    return fuel_exhausted(ctx, "no weak normal form within " + std::to_string(r.steps) + " steps");
  }
  if (ctx.json()) {
    ctx.emit(Json{{"term", flatten(r.term)}, {"steps", r.steps}});
  } else {
    ctx.out << flatten(r.term) << "\n";
  }
  return kExitOk;
}

// --- selfint ---------------------------------------------------------------

int selfint_encode(const Context& ctx, const std::string& scheme_name, const std::string& text) {
  EncodingScheme scheme = scheme_from_string(scheme_name);
  Term m = parse_term(text);
  std::string code = scheme == EncodingScheme::Godel ? godel_encode(m).value.str() : ctx.show(encode(scheme, m));
  if (ctx.json()) {
    ctx.emit(Json{{"scheme", to_string(scheme)}, {"code", code}});
  } else {
    ctx.out << code << "\n";
  }
  return kExitOk;
}

int selfint_eval(const Context& ctx, const std::string& scheme_name, const std::string& text) {
  EncodingScheme scheme = scheme_from_string(scheme_name);
  Term nf = self_evaluate(scheme, parse_term(text), ctx.opt.fuel);
  if (ctx.json()) {
    ctx.emit(Json{{"scheme", to_string(scheme)}, {"term", ctx.show(nf)}});
  } else {
    ctx.out << ctx.show(nf) << "\n";
  }
  return kExitOk;
}

int selfint_check(const Context& ctx, const std::string& scheme_name, const std::string& text) {
  EncodingScheme scheme = scheme_from_string(scheme_name);
  Term m = parse_term(text);
  bool ok = false;
  if (scheme == EncodingScheme::Godel) {
    GodelCode g = godel_encode(m);
    ok = godel_encode(godel_decode(g)).value == g.value;
  } else {
    ok = self_eval_check(scheme, m, ctx.opt.fuel);
  }
  if (ctx.json()) {
    ctx.emit(Json{{"scheme", to_string(scheme)}, {"ok", ok}});
  } else {
    ctx.out << (ok ? "ok" : "mismatch") << "\n";
  }
  return ok ? kExitOk : kExitDomain;
}

// --- degoto ----------------------------------------------------------------

Store parse_store(const std::string& text) {
  Store s;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = trim(text.substr(pos, end - pos));
    std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw SyntaxError(pos, "expected name=value");
    Datum v = parse_datum(item.substr(eq + 1));
    if (v.size() != 1) throw SyntaxError(pos + eq + 1, "expected one natural");
    s[trim(item.substr(0, eq))] = v[0];
    pos = end + 1;
  }
  return s;
}

int degoto_transform(const Context& ctx, const std::string& file) {
  FlowProgram p = parse_flow(read_file(file));
  StructProgram s = eliminate_goto(p);
  if (ctx.json()) {
    ctx.emit(Json{{"program", print_struct(s)},
                  {"while_count", while_count(s)},
                  {"counter", fresh_counter(p)},
                  {"overhead_factor", overhead_factor(p)}});
  } else {
    ctx.out << print_struct(s);
  }
  return kExitOk;
}

int degoto_run(const Context& ctx, const std::string& lang, const std::string& file, const std::string& store) {
  std::string text = read_file(file);
  Store s = parse_store(store);
  RunResult r = lang == "flow" ? interpret_flow(parse_flow(text), s, ctx.opt.fuel)
                               : interpret_struct(parse_struct(text), s, ctx.opt.fuel);
  if (r.status == RunStatus::FuelExhausted) {
    return fuel_exhausted(ctx, "still running after " + std::to_string(r.steps) + " steps");
  }
  if (ctx.json()) {
    Json st = Json::object();
    for (const auto& [k, v] : r.store) st[k] = v;
    ctx.emit(Json{{"store", st}, {"steps", r.steps}});
    return kExitOk;
  }
  bool first = true;
  for (const auto& [k, v] : r.store) {
    ctx.out << (first ? "" : ",") << k << "=" << v;
    first = false;
  }
  ctx.out << "\nsteps: " << r.steps << "\n";
  return kExitOk;
}

// --- bootcfg ---------------------------------------------------------------

CompilerConfig read_config(const std::string& file) { return parse_config(trim(read_file(file)), &toy_registry()); }

int bootcfg_check(const Context& ctx, const std::string& file) {
  CompilerConfig c = read_config(file);
  CorrectnessReport r = is_correct(c, toy_registry(), ctx.fuel_or(100'000'000));
  bool exec = is_executable(c, toy_registry().machine());
  if (ctx.json()) {
    Json j{{"config", print_config(c)}, {"correct", r.correct}, {"executable", exec}};
    if (!r.correct) j["reason"] = r.reason;
    if (r.witness) j["witness"] = Json{{"program", r.witness->first}, {"input", r.witness->second}};
    ctx.emit(j);
  } else {
    ctx.out << "configuration: " << print_config(c) << "\n";
    ctx.out << "correct: " << (r.correct ? "yes" : "no (" + r.reason + ")") << "\n";
    if (r.witness) ctx.out << "witness: " << r.witness->first << " on [" << format_datum(r.witness->second) << "]\n";
    ctx.out << "executable: " << (exec ? "yes" : "no") << "\n";
  }
  return r.correct ? kExitOk : kExitDomain;
}

int bootcfg_tree(const Context& ctx, const std::string& file) {
  CompilerConfig c = read_config(file);
  if (ctx.json()) {
    ctx.emit(Json{{"config", print_config(c)}, {"tree", render_tree(c)}});
  } else {
    ctx.out << render_tree(c);
  }
  return kExitOk;
}

int bootcfg_eval(const Context& ctx, const std::string& file, const std::string& program, const std::string& input) {
  CompilerConfig c = read_config(file);
  ConfigEvaluator eval(toy_registry(), ctx.fuel_or(1'000'000'000));
  PhiResult r = eval.phi_eval(c, program, parse_datum(input));
  if (r.status == PhiStatus::Diverged) return fuel_exhausted(ctx, "evaluation did not finish within fuel");
  if (ctx.json()) {
    Json metrics = Json::array();
    for (const auto& m : r.metrics) metrics.push_back(Json{{"phase", to_string(m.phase)}, {"program", m.program}, {"steps", m.steps}});
    ctx.emit(Json{{"config", print_config(c)}, {"program", program}, {"value", r.value}, {"metrics", metrics}});
    return kExitOk;
  }
  ctx.out << "output: " << format_datum(r.value) << "\n";
  for (const auto& m : r.metrics) ctx.out << to_string(m.phase) << " " << m.program << ": " << m.steps << " steps\n";
  return kExitOk;
}

int bootcfg_demo(const Context& ctx) {
  auto rows = bootstrap_demo(toy_registry(), toy_benchmarks());
  if (ctx.json()) {
    Json j = Json::array();
    for (const auto& r : rows) {
      j.push_back(Json{{"program", r.program}, {"input", r.input}, {"output", r.output}, {"compile", r.compile}, {"run", r.run}});
    }
    ctx.emit(Json{{"configs", {kConfigC1, kConfigC2, kConfigC3}}, {"rows", j}});
  } else {
    ctx.out << "C1 = " << kConfigC1 << "\nC2 = " << kConfigC2 << "\nC3 = " << kConfigC3 << "\n\n" << format_demo(rows);
  }
  return kExitOk;
}

int report(const Context& ctx, const std::string& kind, const std::string& message, int code) {
  if (ctx.json()) {
    ctx.emit(Json{{"error", kind}, {"message", message}});
  } else {
    ctx.err << "error: ";
    if (kind != "Error" && kind != "SyntaxError") ctx.err << kebab(kind) << ": ";
    ctx.err << message << "\n";
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Lambda calculus, combinatory logic, goto elimination and compiler bootstrapping.", "lamlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--fuel", opt.fuel, "Step budget (default 100000)")->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", opt.seed, "Seed for randomized commands");
  app.add_flag("--no-fold", opt.no_fold, "Do not print closed subterms as combinator names");

  std::function<int(const Context&)> action;
  auto bind = [&](CLI::App* sub, std::function<int(const Context&)> f) {
    sub->callback([&action, f = std::move(f)] { action = f; });
  };

  std::string term, term2, word, file, scheme, lang = "flow", store, program, input, cert;
  std::optional<std::string> p0, p1;
  bool eta = false, random = false, apply_i = false;

  auto* lam = app.add_subcommand("lam", "Lambda terms");
  lam->require_subcommand(1);
  auto* nf = lam->add_subcommand("nf", "Normal form by leftmost reduction");
  nf->add_option("term", term)->required();
  nf->add_flag("--eta", eta, "Reduce η-redexes too");
  bind(nf, [&](const Context& c) { return lam_nf(c, term, eta); });
  auto* trace = lam->add_subcommand("trace", "Reduction sequence");
  trace->add_option("term", term)->required();
  trace->add_flag("--eta", eta, "Reduce η-redexes too");
  trace->add_flag("--random", random, "Contract a random β-redex each step (uses --seed)");
  bind(trace, [&](const Context& c) { return lam_trace(c, term, eta, random); });

  auto* boehm = app.add_subcommand("boehm", "Böhm-out separation");
  boehm->require_subcommand(1);
  auto* sep = boehm->add_subcommand("separate", "Certificate separating two terms");
  sep->add_option("m0", term)->required();
  sep->add_option("m1", term2)->required();
  sep->add_option("--p0", p0, "Target for m0 (default \\x y.x)");
  sep->add_option("--p1", p1, "Target for m1 (default \\x y.y)");
  bind(sep, [&](const Context& c) { return boehm_separate(c, term, term2, p0, p1); });
  auto* ver = boehm->add_subcommand("verify", "Check a certificate");
  ver->add_option("m0", term)->required();
  ver->add_option("m1", term2)->required();
  ver->add_option("certificate", cert, "JSON {\"args\":[...]} or a file holding it")->required();
  ver->add_option("--p0", p0, "Target for m0 (default \\x y.x)");
  ver->add_option("--p1", p1, "Target for m1 (default \\x y.y)");
  bind(ver, [&](const Context& c) { return boehm_verify(c, term, term2, cert, p0, p1); });

  auto* cl = app.add_subcommand("cl", "Combinatory logic");
  cl->require_subcommand(1);
  auto* phi_cmd = cl->add_subcommand("phi", "Encode a word over K S ( )");
  phi_cmd->add_option("word", word)->required();
  phi_cmd->add_flag("--apply-i", apply_i, "Print the normal form of phi(w) I");
  bind(phi_cmd, [&](const Context& c) { return cl_phi(c, word, apply_i); });
  auto* tolam = cl->add_subcommand("tolam", "Translate a CL term to a lambda term");
  tolam->add_option("term", word)->required();
  bind(tolam, [&](const Context& c) { return cl_tolam(c, word); });
  auto* weak = cl->add_subcommand("weak", "Weak normal form");
  weak->add_option("term", word)->required();
  bind(weak, [&](const Context& c) { return cl_weak(c, word); });

  auto* si = app.add_subcommand("selfint", "Encodings and self-evaluators");
  si->require_subcommand(1);
  auto* enc = si->add_subcommand("encode", "Encode a term");
  enc->add_option("--scheme", scheme)->required()->check(CLI::IsMember({"godel", "mogensen", "bb"}));
  enc->add_option("term", term)->required();
  bind(enc, [&](const Context& c) { return selfint_encode(c, scheme, term); });
  auto* ev = si->add_subcommand("eval", "Run the self-evaluator on the encoded term");
  ev->add_option("--scheme", scheme)->required()->check(CLI::IsMember({"mogensen", "bb"}));
  ev->add_option("term", term)->required();
  bind(ev, [&](const Context& c) { return selfint_eval(c, scheme, term); });
  auto* chk = si->add_subcommand("check", "Compare self-evaluation with the normal form");
  chk->add_option("--scheme", scheme)->required()->check(CLI::IsMember({"godel", "mogensen", "bb"}));
  chk->add_option("term", term)->required();
  bind(chk, [&](const Context& c) { return selfint_check(c, scheme, term); });

  auto* dg = app.add_subcommand("degoto", "Goto elimination");
  dg->require_subcommand(1);
  auto* tr = dg->add_subcommand("transform", "Rewrite a flow program with a single while");
  tr->add_option("file", file)->required();
  bind(tr, [&](const Context& c) { return degoto_transform(c, file); });
  auto* dr = dg->add_subcommand("run", "Interpret a program");
  dr->add_option("--lang", lang)->check(CLI::IsMember({"flow", "struct"}));
  dr->add_option("file", file)->required();
  dr->add_option("--store", store, "Initial store, e.g. x=3,y=0");
  bind(dr, [&](const Context& c) { return degoto_run(c, lang, file, store); });

  auto* bc = app.add_subcommand("bootcfg", "Compiler configurations over the toy machine");
  bc->require_subcommand(1);
  auto* bcc = bc->add_subcommand("check", "Correctness and executability");
  bcc->add_option("file", file)->required();
  bind(bcc, [&](const Context& c) { return bootcfg_check(c, file); });
  auto* bct = bc->add_subcommand("tree", "Draw the configuration");
  bct->add_option("file", file)->required();
  bind(bct, [&](const Context& c) { return bootcfg_tree(c, file); });
  auto* bce = bc->add_subcommand("eval", "Evaluate a program under the configuration");
  bce->add_option("file", file)->required();
  bce->add_option("--program", program)->required();
  bce->add_option("--input", input, "Comma separated naturals");
  bind(bce, [&](const Context& c) { return bootcfg_eval(c, file, program, input); });
  auto* bcd = bc->add_subcommand("demo", "Three-stage bootstrap on the benchmarks");
  bind(bcd, bootcfg_demo);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  opt.fuel_given = app.count("--fuel") > 0;
  Context ctx(opt, out, err);
  if (!action) {
    err << "usage error: missing command\n";
    return kExitUsage;
  }
  try {
    return action(ctx);
  } catch (const Error& e) {
    int code = e.indeterminate() ? kExitFuel : kExitDomain;
    return report(ctx, to_string(e.kind()), e.what(), code);
  } catch (const std::exception& e) {
    return report(ctx, "Error", e.what(), kExitDomain);
  }
}

}  // namespace lamlab::cli
