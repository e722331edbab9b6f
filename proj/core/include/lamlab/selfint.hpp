#pragma once

// Codes for λ-terms and the evaluators that invert them.

#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "lamlab/reduce.hpp"
#include "lamlab/term.hpp"

namespace lamlab {

using Natural = boost::multiprecision::cpp_int;

enum class EncodingScheme { Godel, Mogensen, BerarducciBoehm };

const char* to_string(EncodingScheme s) noexcept;
/// Accepts "godel", "mogensen", "bb"; throws Error(OutOfRange) otherwise.
EncodingScheme scheme_from_string(std::string_view name);

struct GodelCode {
  Natural value;
};

/// Cantor pairing and its inverse.
Natural cantor_pair(const Natural& a, const Natural& b);
std::pair<Natural, Natural> cantor_unpair(const Natural& z);

/// Variables are renumbered canonically: a free variable spelled x<i> keeps
/// index i, other free variables take the next indices in order of first
/// occurrence, and a binder at depth d gets index F + d where F exceeds
/// every free index. Then #var(i) = 3i, #app(P,Q) = 3·pair(#P,#Q) + 1,
/// #abs(i,P) = 3·pair(i,#P) + 2.
GodelCode godel_encode(const Term& m);
/// Inverse of godel_encode on its image (variables come back as x<i>).
/// Throws Error(MalformedCode) for naturals outside the image.
Term godel_decode(const GodelCode& g);

/// Largest code church_code will turn into a numeral.
inline constexpr std::uint64_t kMaxChurchCode = 10'000;
/// The Church numeral c_{#M}; throws Error(OutOfRange) above kMaxChurchCode.
Term church_code(const Term& m);

/// ⌜x⌝ = λabc.a x, ⌜PQ⌝ = λabc.b⌜P⌝⌜Q⌝, ⌜λx.P⌝ = λabc.c(λx.⌜P⌝).
/// Both encoders throw Error(OutOfRange) for codes deeper than kMaxTermDepth.
Term mogensen_encode(const Term& m);
/// Θ(λem.m I (B_ev e)(C_ev e)) with B_ev = λepq.ep(eq), C_ev = λezx.e(zx).
Term mogensen_evaluator();

/// ⌜x⌝ = λe.e U³₁ x e, ⌜PQ⌝ = λe.e U³₂ ⌜P⌝ ⌜Q⌝ e, ⌜λx.P⌝ = λe.e U³₃ (λx.⌜P⌝) e.
Term bb_encode(const Term& m);
/// ⟨⟨K,S,C⟩⟩ = λz.z(λz'.z' K S C).
Term bb_evaluator();

/// Encoding under a scheme (Godel yields the Church numeral code).
Term encode(EncodingScheme scheme, const Term& m);
/// Evaluator for Mogensen or BerarducciBoehm codes; Error(OutOfRange) for Godel.
Term evaluator(EncodingScheme scheme);

/// Normal form of evaluator · encode(m); throws Error(FuelExhausted).
Term self_evaluate(EncodingScheme scheme, const Term& m, std::uint64_t fuel = kDefaultFuel);

/// True iff evaluator · encode(m) normalizes to the β-normal form of m.
/// Throws Error(FuelExhausted) when m or the evaluation does not normalize.
bool self_eval_check(EncodingScheme scheme, const Term& m, std::uint64_t fuel = kDefaultFuel);

}  // namespace lamlab
