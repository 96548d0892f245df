#include "voxsim/error.hpp"

namespace voxsim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::duplicate_lemma: return "duplicate-lemma";
    case ErrorKind::dangling_reference: return "dangling-reference";
    case ErrorKind::invalid_document: return "invalid-document";
    case ErrorKind::unknown_id: return "unknown-id";
    case ErrorKind::unknown_word: return "unknown-word";
    case ErrorKind::ungrammatical: return "ungrammatical";
    case ErrorKind::no_referent: return "no-referent";
    case ErrorKind::ambiguous_referent: return "ambiguous-referent";
    case ErrorKind::unknown_predicate: return "unknown-predicate";
    case ErrorKind::unbound_slot: return "unbound-slot";
    case ErrorKind::ambiguity: return "ambiguity";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::unsatisfiable_goal: return "unsatisfiable-goal";
    case ErrorKind::unsatisfiable_parameter: return "unsatisfiable-parameter";
    case ErrorKind::step_error: return "step-error";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io:
    case ErrorKind::syntax:
    case ErrorKind::duplicate_lemma:
    case ErrorKind::dangling_reference:
    case ErrorKind::invalid_document:
      return 3;
    case ErrorKind::unknown_word:
    case ErrorKind::ungrammatical:
    case ErrorKind::no_referent:
    case ErrorKind::ambiguous_referent:
    case ErrorKind::unknown_predicate:
    case ErrorKind::unbound_slot:
    case ErrorKind::ambiguity:
      return 2;
    default:
      return 1;
  }
}

}  // namespace voxsim
