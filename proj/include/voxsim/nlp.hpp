#pragma once

#include "voxsim/error.hpp"
#include "voxsim/programs.hpp"
#include "voxsim/scene.hpp"
#include "voxsim/voxicon.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace voxsim {

enum class Tag { verb, past_verb, determiner, adjective, noun, preposition };
std::string_view to_string(Tag t);

struct TaggedToken {
  std::string word;  // lowercased surface form
  std::string lemma;
  Tag tag = Tag::noun;
  int position = 0;  // 1-based
};

/// Closed lexicon built from a voxicon: program lemmas and their past forms,
/// object nouns, attribute adjectives, relation prepositions, and "the".
class Lexicon {
 public:
  explicit Lexicon(const Voxicon& voxicon);
  /// All readings of a word, verb readings first.
  std::vector<std::pair<Tag, std::string>> readings(const std::string& word) const;

 private:
  std::multimap<std::string, std::pair<Tag, std::string>> words_;
};

/// Lowercases and splits on whitespace; a final period is dropped.
std::vector<std::string> tokenize(std::string_view sentence);
/// Tags every token; unknown words raise unknown_word with the token position.
std::vector<TaggedToken> tag(std::string_view sentence, const Lexicon& lexicon);

struct NounPhrase {
  std::string head;
  std::vector<std::string> attributes;
  std::string determiner = "the";

  bool operator==(const NounPhrase&) const = default;
};

struct Oblique {
  std::string preposition;
  NounPhrase object;

  bool operator==(const Oblique&) const = default;
};

enum class Mood { imperative, declarative };

struct PredArgStructure {
  Mood mood = Mood::imperative;
  std::string verb;  // lemma
  NounPhrase object;
  std::optional<Oblique> oblique;

  bool operator==(const PredArgStructure&) const = default;
};

/// Imperative `V the JJ* NN (P the JJ* NN)?` or declarative `the JJ* NN V-past`.
PredArgStructure parse(std::string_view sentence, const Voxicon& voxicon);
/// Canonical sentence for a structure; parse(render(pa)) == pa.
std::string render(const PredArgStructure& pa, const Voxicon& voxicon);

struct GroundingFailure {
  ErrorKind kind = ErrorKind::no_referent;
  std::string message;
};

struct GroundingResult {
  std::variant<GroundedEvent, GroundingFailure> value;

  bool ok() const { return std::holds_alternative<GroundedEvent>(value); }
  const GroundedEvent& event() const { return std::get<GroundedEvent>(value); }
  const GroundingFailure& failure() const { return std::get<GroundingFailure>(value); }
};

GroundingResult ground(const PredArgStructure& pa, const Scene& s, const Voxicon& voxicon);

}  // namespace voxsim
