#pragma once

// Fuel-bounded normal-order reduction with step traces.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "lamlab/term.hpp"

namespace lamlab {

enum class Mode { Beta, BetaEta };
enum class Rule { Beta, Eta };
enum class Status { NormalForm, FuelExhausted };

inline constexpr std::uint64_t kDefaultFuel = 100'000;

/// Root-to-node child indices. App: 0 = function, 1 = argument. Abs: 0 = body.
using Path = std::vector<std::uint32_t>;

struct Step {
  Rule rule;
  Path path;
  std::size_t result_size;  // size of the contractum
};

struct ReductionTrace {
  Term initial;
  std::vector<Step> steps;
  Status status = Status::NormalForm;
  Term final;
  std::uint64_t step_count = 0;
};

/// Leftmost-outermost β-reduction; for BetaEta, η-contraction is then applied
/// exhaustively to the β-normal form. Each contraction costs one unit of fuel.
/// A contraction that would make the term deeper than kMaxTermDepth is not
/// performed and the result is reported as FuelExhausted.
/// With record_steps = false the step list stays empty (step_count is kept).
ReductionTrace normalize(const Term& t, Mode mode = Mode::Beta, std::uint64_t fuel = kDefaultFuel,
                         bool record_steps = true);

/// Normal form, or nullopt when fuel runs out.
std::optional<Term> try_normalize(const Term& t, Mode mode = Mode::Beta, std::uint64_t fuel = kDefaultFuel);
/// Normal form; throws Error(FuelExhausted) when fuel runs out.
Term normal_form(const Term& t, Mode mode = Mode::Beta, std::uint64_t fuel = kDefaultFuel);

bool is_beta_redex(const Term& t);
/// λx.M x with x not free in M.
bool is_eta_redex(const Term& t);
bool is_beta_normal(const Term& t);
bool is_beta_eta_normal(const Term& t);

/// Subterm at `path`; throws Error(OutOfRange) for an invalid path.
const Term& subterm_at(const Term& t, const Path& path);
/// Contracts the redex at `path`; throws Error(OutOfRange) if there is none.
Term contract_at(const Term& t, const Path& path, Rule rule);

/// All β-redex positions in preorder (leftmost-outermost first).
std::vector<Path> beta_redex_paths(const Term& t);

/// One leftmost-outermost β-step, or nullopt when t is β-normal.
std::optional<std::pair<Term, Step>> step_leftmost(const Term& t);
/// One β-step at a uniformly chosen redex, or nullopt when t is β-normal.
std::optional<std::pair<Term, Step>> step_random(const Term& t, std::mt19937_64& rng);

/// Re-applies the recorded steps to trace.initial and returns the result.
Term replay(const ReductionTrace& trace);

const char* to_string(Rule r) noexcept;
const char* to_string(Status s) noexcept;

}  // namespace lamlab
