#include "voxsim/nlp.hpp"

#include <algorithm>
#include <cctype>

namespace voxsim {

std::string_view to_string(Tag t) {
  switch (t) {
    case Tag::verb: return "VB";
    case Tag::past_verb: return "VBD";
    case Tag::determiner: return "DT";
    case Tag::adjective: return "JJ";
    case Tag::noun: return "NN";
    case Tag::preposition: return "IN";
  }
  return "?";
}

Lexicon::Lexicon(const Voxicon& voxicon) {
  words_.emplace("the", std::pair{Tag::determiner, std::string("the")});
  for (const auto& [lemma, v] : voxicon.entries()) {
    switch (v.kind) {
      case VoxemeKind::program:
        words_.emplace(lemma, std::pair{Tag::verb, lemma});
        if (v.program && !v.program->past.empty()) words_.emplace(v.program->past, std::pair{Tag::past_verb, lemma});
        break;
      case VoxemeKind::object: words_.emplace(lemma, std::pair{Tag::noun, lemma}); break;
      case VoxemeKind::attribute: words_.emplace(lemma, std::pair{Tag::adjective, lemma}); break;
      case VoxemeKind::relation: words_.emplace(lemma, std::pair{Tag::preposition, lemma}); break;
    }
  }
}

std::vector<std::pair<Tag, std::string>> Lexicon::readings(const std::string& word) const {
  std::vector<std::pair<Tag, std::string>> out;
  auto [lo, hi] = words_.equal_range(word);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : sentence) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  if (!out.empty()) {
    std::string& last = out.back();
    if (last.size() > 1 && last.back() == '.') last.pop_back();
    else if (last == ".") out.pop_back();
  }
  return out;
}

std::vector<TaggedToken> tag(std::string_view sentence, const Lexicon& lexicon) {
  std::vector<TaggedToken> out;
  int pos = 0;
  for (const std::string& w : tokenize(sentence)) {
    ++pos;
    auto rs = lexicon.readings(w);
    if (rs.empty()) throw Error(ErrorKind::unknown_word, "unknown word '" + w + "' at position " + std::to_string(pos), 0, pos);
    out.push_back(TaggedToken{w, rs.front().second, rs.front().first, pos});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view sentence, const Lexicon& lexicon) : lexicon_(lexicon) {
    tokens_ = tokenize(sentence);
    for (std::size_t i = 0; i < tokens_.size(); ++i)
      if (lexicon_.readings(tokens_[i]).empty())
        throw Error(ErrorKind::unknown_word,
                    "unknown word '" + tokens_[i] + "' at position " + std::to_string(i + 1), 0,
                    static_cast<int>(i) + 1);
  }

  PredArgStructure parse() {
    if (tokens_.empty()) fail("empty sentence");
    PredArgStructure pa;
    if (is(0, Tag::determiner)) {
      pa.mood = Mood::declarative;
      pa.object = noun_phrase();
      pa.verb = expect(Tag::past_verb, "a past-tense verb");
    } else {
      pa.mood = Mood::imperative;
      pa.verb = expect(Tag::verb, "a verb");
      pa.object = noun_phrase();
      if (pos_ < tokens_.size()) {
        Oblique ob;
        ob.preposition = expect(Tag::preposition, "a preposition");
        ob.object = noun_phrase();
        pa.oblique = ob;
      }
    }
    if (pos_ < tokens_.size()) fail("unexpected '" + tokens_[pos_] + "'");
    return pa;
  }

 private:
  std::optional<std::string> reading(std::size_t i, Tag t) const {
    if (i >= tokens_.size()) return std::nullopt;
    for (const auto& [tag, lemma] : lexicon_.readings(tokens_[i]))
      if (tag == t) return lemma;
    return std::nullopt;
  }
  bool is(std::size_t i, Tag t) const { return reading(i, t).has_value(); }

  std::string expect(Tag t, const std::string& what) {
    auto lemma = reading(pos_, t);
    if (!lemma) fail(pos_ < tokens_.size() ? "expected " + what + ", got '" + tokens_[pos_] + "'" : "expected " + what);
    ++pos_;
    return *lemma;
  }

  NounPhrase noun_phrase() {
    NounPhrase np;
    np.determiner = expect(Tag::determiner, "'the'");
    while (is(pos_, Tag::adjective) && !is(pos_, Tag::noun)) np.attributes.push_back(*reading(pos_++, Tag::adjective));
    np.head = expect(Tag::noun, "a noun");
    return np;
  }

  [[noreturn]] void fail(const std::string& message) const {
    int at = static_cast<int>(std::min(pos_, tokens_.size())) + 1;
    throw Error(ErrorKind::ungrammatical, message + " at position " + std::to_string(at), 0, at);
  }

  const Lexicon& lexicon_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

std::string render_np(const NounPhrase& np) {
  std::string out = np.determiner;
  for (const auto& a : np.attributes) out += " " + a;
  return out + " " + np.head;
}

}  // namespace

PredArgStructure parse(std::string_view sentence, const Voxicon& voxicon) {
  Lexicon lexicon(voxicon);
  return Parser(sentence, lexicon).parse();
}

std::string render(const PredArgStructure& pa, const Voxicon& voxicon) {
  if (pa.mood == Mood::declarative) {
    const Voxeme* v = voxicon.find(pa.verb);
    std::string past = v && v->program && !v->program->past.empty() ? v->program->past : pa.verb;
    return render_np(pa.object) + " " + past;
  }
  std::string out = pa.verb + " " + render_np(pa.object);
  if (pa.oblique) out += " " + pa.oblique->preposition + " " + render_np(pa.oblique->object);
  return out;
}

// ---------------------------------------------------------------------------
// Grounding

namespace {

struct Failure {
  GroundingFailure f;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message) { throw Failure{GroundingFailure{kind, message}}; }

std::vector<std::string> instances_of(const Scene& s, const std::string& lemma) {
  std::vector<std::string> ids;
  for (const auto& [id, inst] : s.instances())
    if (inst.voxeme == lemma) ids.push_back(id);
  return ids;  // map order, so sorted by id
}

std::string refer(const NounPhrase& np, const Scene& s) {
  auto ids = instances_of(s, np.head);
  if (ids.empty()) fail(ErrorKind::no_referent, "no " + np.head + " in the scene");
  for (const auto& adj : np.attributes) {
    try {
      ids = {resolve_attribute(s, adj, ids)};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ambiguity) fail(ErrorKind::ambiguous_referent, e.what());
      fail(e.kind(), e.what());
    }
  }
  if (ids.size() > 1) {
    std::string list;
    for (const auto& id : ids) list += (list.empty() ? "" : ", ") + id;
    fail(ErrorKind::ambiguous_referent, "'the " + np.head + "' could be any of " + list);
  }
  return ids.front();
}

std::string default_agent(const Scene& s) {
  if (s.is_agent("agent")) return "agent";
  if (!s.agents().empty()) return s.agents().begin()->first;
  fail(ErrorKind::unbound_slot, "the scene has no agent");
}

}  // namespace

GroundingResult ground(const PredArgStructure& pa, const Scene& s, const Voxicon& voxicon) {
  try {
    const Voxeme* v = voxicon.find(pa.verb);
    if (!v || !v->program) fail(ErrorKind::unknown_predicate, "no program for '" + pa.verb + "'");
    const ProgramBody& body = *v->program;

    GroundedEvent ev;
    ev.predicate = pa.verb;
    std::optional<std::string> figure;
    bool object_done = false, oblique_used = false;

    for (const ArgumentSlot& slot : body.args) {
      switch (slot.type) {
        case SlotType::agent:
          if (!slot.optional || pa.mood == Mood::imperative) ev.bindings[slot.name] = default_agent(s);
          break;
        case SlotType::object:
          if (object_done) break;
          figure = refer(pa.object, s);
          ev.bindings[slot.name] = *figure;
          object_done = true;
          break;
        case SlotType::objects: {
          if (object_done) break;
          auto ids = instances_of(s, pa.object.head);
          if (ids.empty()) fail(ErrorKind::no_referent, "no " + pa.object.head + " in the scene");
          ev.bindings[slot.name] = ids;
          object_done = true;
          break;
        }
        case SlotType::location: {
          if (!pa.oblique) {
            if (!slot.optional) fail(ErrorKind::unbound_slot, "'" + pa.verb + "' needs a location");
            break;
          }
          const std::string& prep_word = pa.oblique->preposition;
          auto prep = parse_preposition(prep_word);
          if (!prep || std::find(slot.relations.begin(), slot.relations.end(), prep_word) == slot.relations.end())
            fail(ErrorKind::ungrammatical, "'" + pa.verb + "' does not take '" + prep_word + "'");
          LocationBinding loc{*prep, refer(pa.oblique->object, s), std::nullopt};
          if (figure) {
            try {
              loc.goal = operationalize(*prep, s, loc.ground, *figure);
            } catch (const Error& e) {
              fail(e.kind(), e.what());
            }
          }
          ev.bindings[slot.name] = loc;
          oblique_used = true;
          break;
        }
      }
    }
    if (!object_done) fail(ErrorKind::ungrammatical, "'" + pa.verb + "' takes no object");
    if (pa.oblique && !oblique_used) fail(ErrorKind::ungrammatical, "'" + pa.verb + "' takes no location");

    for (const ParameterDecl& d : body.params) {
      if (!d.unless_bound.empty() && ev.bindings.count(d.unless_bound)) continue;
      ParameterSpec spec{d.name, d.domain, d.min, d.max, Vec2::Zero(), d.subevent};
      if (d.domain == DomainKind::surface_point) {
        for (const auto& [name, b] : ev.bindings)
          if (const auto* loc = std::get_if<LocationBinding>(&b); loc && loc->goal)
            if (const auto* patch = std::get_if<SurfaceRegion>(&loc->goal->region)) spec.extents = patch->extents;
      }
      ev.unspecified.push_back(spec);
    }
    return GroundingResult{ev};
  } catch (const Failure& f) {
    return GroundingResult{f.f};
  }
}

}  // namespace voxsim
