#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lexsem {

enum class errc {
  syntax,
  unknown_sort,
  unbound_name,
  type_clash,
  tylam_escape,
  step_budget_exceeded,
  invalid_lexicon,
  duplicate,
  not_found,
  no_match,
  no_coercion_path,
  ambiguous_coercion,
  rigidity_violation,
  no_antecedent,
  not_normal,
  not_truth_type,
  residual_lambda,
  higher_order_residue,
  uninterpreted_constant,
  empty_carrier,
  dependent_epsilon,
  carrier_containment,
  io,
};

constexpr std::string_view errc_name(errc code) {
  switch (code) {
    case errc::syntax: return "SyntaxError";
    case errc::unknown_sort: return "UnknownSort";
    case errc::unbound_name: return "UnboundName";
    case errc::type_clash: return "TypeClash";
    case errc::tylam_escape: return "TyLamEscape";
    case errc::step_budget_exceeded: return "StepBudgetExceeded";
    case errc::invalid_lexicon: return "InvalidLexicon";
    case errc::duplicate: return "Duplicate";
    case errc::not_found: return "NotFound";
    case errc::no_match: return "NoMatch";
    case errc::no_coercion_path: return "NoCoercionPath";
    case errc::ambiguous_coercion: return "AmbiguousCoercion";
    case errc::rigidity_violation: return "RigidityViolation";
    case errc::no_antecedent: return "NoAntecedent";
    case errc::not_normal: return "NotNormal";
    case errc::not_truth_type: return "NotTruthType";
    case errc::residual_lambda: return "ResidualLambda";
    case errc::higher_order_residue: return "HigherOrderResidue";
    case errc::uninterpreted_constant: return "UninterpretedConstant";
    case errc::empty_carrier: return "EmptyCarrier";
    case errc::dependent_epsilon: return "DependentEpsilon";
    case errc::carrier_containment: return "CarrierContainment";
    case errc::io: return "IOError";
  }
  return "Error";
}

// Errors raised while composing or type-checking sentences, as opposed to
// malformed input. The CLI maps these to exit status 2.
constexpr bool is_semantic_error(errc code) {
  switch (code) {
    case errc::type_clash:
    case errc::tylam_escape:
    case errc::unbound_name:
    case errc::not_found:
    case errc::no_match:
    case errc::no_coercion_path:
    case errc::ambiguous_coercion:
    case errc::rigidity_violation:
    case errc::no_antecedent:
    case errc::not_normal:
    case errc::not_truth_type:
    case errc::residual_lambda:
    case errc::higher_order_residue:
    case errc::step_budget_exceeded:
      return true;
    default:
      return false;
  }
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  error(errc code, const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(std::string(errc_name(code)) + " at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        code_(code),
        message_(message),
        line_(line),
        column_(column) {}

  errc code() const noexcept { return code_; }
  // The message without the error-kind prefix and location.
  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  errc code_;
  std::string message_;
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

}  // namespace lexsem
