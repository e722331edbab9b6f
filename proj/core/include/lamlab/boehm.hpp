#pragma once

// Böhm-out: separating closed terms with distinct βη-normal forms.

#include <string>
#include <vector>

#include "lamlab/reduce.hpp"
#include "lamlab/term.hpp"

namespace lamlab {

struct SeparationProblem {
  Term m0;
  Term m1;
  Term p0;
  Term p1;
  std::uint64_t fuel = kDefaultFuel;
};

/// Closed arguments N1 ... Nk with m0 N⃗ =β p0 and m1 N⃗ =β p1.
struct Certificate {
  std::vector<Term> args;
};

/// True iff the βη-normal forms of the closed terms m0 and m1 differ.
/// Throws Error(OpenTerm) for open input and Error(NoNormalForm) when a term
/// does not normalize within fuel.
bool separable(const Term& m0, const Term& m1, std::uint64_t fuel = kDefaultFuel);

/// Synthesizes a certificate and checks it by reduction before returning it.
/// Throws Error(Inseparable) when the βη-normal forms coincide. If
/// `transcript` is given, one line per transformation is appended to it.
Certificate boehm_out(const SeparationProblem& prob, std::vector<std::string>* transcript = nullptr);

/// λm.m N1 ... Nk for the certificate targeting λxy.x and λxy.y.
Term separator(const Term& m0, const Term& m1, std::uint64_t fuel = kDefaultFuel);

/// True iff m0 N⃗ =β p0 and m1 N⃗ =β p1 as established within fuel; false
/// only on a refutation (distinct normal forms). Throws Error(FuelExhausted)
/// when neither could be established.
bool verify_certificate(const Term& m0, const Term& m1, const Certificate& cert, const Term& p0, const Term& p1,
                        std::uint64_t fuel = kDefaultFuel);

/// Decides M =β P within fuel: true, false, or throws Error(FuelExhausted).
bool beta_convertible(const Term& m, const Term& p, std::uint64_t fuel = kDefaultFuel);

}  // namespace lamlab
