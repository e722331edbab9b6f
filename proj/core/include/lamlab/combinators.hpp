#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lamlab/term.hpp"

namespace lamlab {

enum class Combinator : std::uint8_t { I, K, Kstar, S, C, B, Y, Theta, omega, Omega };

inline constexpr std::array<Combinator, 10> kAllCombinators = {
    Combinator::I, Combinator::K,     Combinator::Kstar, Combinator::S,     Combinator::C,
    Combinator::B, Combinator::Y,     Combinator::Theta, Combinator::omega, Combinator::Omega};

/// Literal spelling used by the parser and printer ("K*", "Theta", ...).
std::string_view literal(Combinator c) noexcept;
std::optional<Combinator> combinator_from_literal(std::string_view text) noexcept;

/// Closed λ-term the literal stands for. K* is λxy.y.
Term combinator(Combinator c);

/// Church numeral λf x.f^n x; Error(OutOfRange) if it would be deeper than
/// kMaxTermDepth.
Term church(std::uint64_t n);
/// n when t is α-equal to some Church numeral.
std::optional<std::uint64_t> church_of(const Term& t);

/// ⟨M1 ... Mn⟩ = λz.z M1 ... Mn with z fresh for every component.
Term tuple(const std::vector<Term>& components);
/// U^n_k = λx1 ... xn.xk, 1 ≤ k ≤ n; throws Error(OutOfRange) otherwise.
Term selector(std::size_t n, std::size_t k);

/// λa1 ... ak z.z a1 ... ak, used to postpone choices during Böhm-out.
Term permutator(std::size_t k);

/// λx.x M (written ⟨M⟩ for one component).
Term wrap(const Term& m);

}  // namespace lamlab
