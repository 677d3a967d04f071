#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace charform {

enum class ErrorKind {
  DivisionByZero,
  FieldMismatch,
  UnsupportedField,
  BudgetExceeded,
  ZeroScalar,
  ZeroSlot,
  SingularForm,
  AlgebraMismatch,
  NoRootAvailable,
  ShapeMismatch,
  CoefficientNotRational,
  NotPfaffian,
  UnsupportedDescriptor,
  InvalidCandidate,
  NotInLi,
  DecompositionFailure,
  NotInComponent,
  NoAnisotropicVector,
  WitnessNotFound,
  NoRegularGenerator,
  NoInvertibleWitness,
  ParseError,
  InvalidArgument,
};

inline std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::UnsupportedField: return "UnsupportedField";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ZeroScalar: return "ZeroScalar";
    case ErrorKind::ZeroSlot: return "ZeroSlot";
    case ErrorKind::SingularForm: return "SingularForm";
    case ErrorKind::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorKind::NoRootAvailable: return "NoRootAvailable";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::CoefficientNotRational: return "CoefficientNotRational";
    case ErrorKind::NotPfaffian: return "NotPfaffian";
    case ErrorKind::UnsupportedDescriptor: return "UnsupportedDescriptor";
    case ErrorKind::InvalidCandidate: return "InvalidCandidate";
    case ErrorKind::NotInLi: return "NotInLi";
    case ErrorKind::DecompositionFailure: return "DecompositionFailure";
    case ErrorKind::NotInComponent: return "NotInComponent";
    case ErrorKind::NoAnisotropicVector: return "NoAnisotropicVector";
    case ErrorKind::WitnessNotFound: return "WitnessNotFound";
    case ErrorKind::NoRegularGenerator: return "NoRegularGenerator";
    case ErrorKind::NoInvertibleWitness: return "NoInvertibleWitness";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace charform
