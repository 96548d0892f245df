#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voxsim {

enum class ErrorKind {
  io,
  syntax,
  duplicate_lemma,
  dangling_reference,
  invalid_document,
  unknown_id,
  unknown_word,
  ungrammatical,
  no_referent,
  ambiguous_referent,
  unknown_predicate,
  unbound_slot,
  ambiguity,
  invalid_argument,
  unsatisfiable_goal,
  unsatisfiable_parameter,
  step_error,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for an error of this kind: 1 simulation, 2 language, 3 I/O.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, int line = 0, int column = 0)
      : std::runtime_error(message), kind_(kind), line_(line), column_(column) {}

  ErrorKind kind() const { return kind_; }
  /// 1-based source line (documents) or token position (sentences); 0 if none.
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ErrorKind kind_;
  int line_;
  int column_;
};

}  // namespace voxsim
