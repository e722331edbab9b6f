#include "lamlab/error.hpp"

namespace lamlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::Inseparable: return "Inseparable";
    case ErrorKind::NoNormalForm: return "NoNormalForm";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::MalformedCode: return "MalformedCode";
    case ErrorKind::OpenTerm: return "OpenTerm";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InvalidProgram: return "InvalidProgram";
    case ErrorKind::Trap: return "Trap";
    case ErrorKind::UnknownLanguage: return "UnknownLanguage";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::AssertionFailed: return "AssertionFailed";
  }
  return "Error";
}

}  // namespace lamlab
