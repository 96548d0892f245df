#include "voxsim/voxicon.hpp"

#include "text_format.hpp"
#include "voxsim/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace voxsim {

using detail::Line;

// ---------------------------------------------------------------------------
// Subevent expressions

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = guard();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  Expr guard() {
    Expr lhs = term();
    skip_ws();
    if (text_.substr(pos_, 2) == "->") {
      pos_ += 2;
      Expr rhs = term();
      Expr g;
      g.head = "->";
      g.call = true;
      g.args = {std::move(lhs), std::move(rhs)};
      return g;
    }
    return lhs;
  }

  Expr term() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail("expected a name");
    Expr e;
    e.head = std::string(text_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      e.call = true;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
        return e;
      }
      while (true) {
        e.args.push_back(guard());
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < text_.size() && text_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    return e;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::syntax,
                "subevent '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

const std::set<std::string, std::less<>> kActions = {"grasp", "ungrasp", "move",      "roll",
                                                     "slide", "turn",    "translate", "rotate"};
const std::set<std::string, std::less<>> kConditions = {"hold", "at", "free"};
const std::set<std::string, std::less<>> kCombinators = {"while", "sequence"};

bool is_builtin(std::string_view head) {
  return kActions.count(head) || kConditions.count(head) || kCombinators.count(head) || head == "->";
}

}  // namespace

Expr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

std::string to_string(const Expr& e) {
  if (e.is_guard()) return to_string(e.args[0]) + " -> " + to_string(e.args[1]);
  if (!e.call) return e.head;
  std::string out = e.head + "(";
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(e.args[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Voxeme accessors

bool SymmetrySpec::rotates_about(int axis) const {
  return std::find(rotational.begin(), rotational.end(), axis) != rotational.end();
}

const ArgumentSlot* ProgramBody::slot(std::string_view name) const {
  for (const auto& s : args)
    if (s.name == name) return &s;
  return nullptr;
}

std::optional<SignedAxis> Voxeme::intrinsic(IntrinsicFace face) const {
  if (!head) return std::nullopt;
  auto it = head->intrinsic_axes.find(face);
  if (it != head->intrinsic_axes.end()) return it->second;
  if (face == IntrinsicFace::bottom) {
    if (auto top = intrinsic(IntrinsicFace::top)) return top->opposite();
  }
  return std::nullopt;
}

std::optional<SignedAxis> Voxeme::resolve(const AxisRef& ref) const {
  if (ref.axis) return ref.axis;
  if (ref.face) return intrinsic(*ref.face);
  return std::nullopt;
}

bool affords(const Voxeme& v, std::string_view behavior) {
  return std::any_of(v.affordances.begin(), v.affordances.end(),
                     [&](const Affordance& a) { return a.behavior == behavior; });
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void collect_unbound(const Expr& e, const std::set<std::string>& bound, std::set<std::string>& unbound) {
  if (!e.call) {
    if (!bound.count(e.head)) unbound.insert(e.head);
    return;
  }
  if (e.head == "sequence" && e.args.size() == 2) {
    collect_unbound(e.args[0], bound, unbound);
    std::set<std::string> inner = bound;
    inner.insert("next");
    inner.insert("prev");
    collect_unbound(e.args[1], inner, unbound);
    return;
  }
  for (const auto& a : e.args) collect_unbound(a, bound, unbound);
}

bool has_terminating_test(const Expr& e) {
  if (e.is_guard()) return true;
  if (kConditions.count(e.head)) return true;
  if (e.call && !is_builtin(e.head)) return true;  // nested program carries its own test
  if (e.head == "sequence")
    return std::any_of(e.args.begin(), e.args.end(), has_terminating_test);
  return false;
}

}  // namespace

std::vector<Diagnostic> validate_voxeme(const Voxeme& v) {
  std::vector<Diagnostic> out;
  auto diag = [&](std::string code, std::string message) {
    out.push_back({std::move(code), v.lemma + ": " + std::move(message)});
  };

  if (v.lemma.empty()) diag("empty-lemma", "lemma is empty");
  if (!(v.default_dimensions.array() > 0.0).all()) diag("nonpositive-dimension", "default dimensions must be positive");

  if (v.kind == VoxemeKind::object) {
    if (!v.head) diag("missing-head", "object voxeme has no geometry head");
    if (v.habitats.empty()) diag("missing-habitat", "object voxeme has no habitat");
  }
  if (v.kind == VoxemeKind::program && !v.program) diag("missing-program-body", "program voxeme has no body");
  if (v.kind == VoxemeKind::attribute && !v.scale) diag("missing-scale", "attribute voxeme has no scale");

  if (v.head) {
    auto top = v.head->intrinsic_axes.find(IntrinsicFace::top);
    auto bottom = v.head->intrinsic_axes.find(IntrinsicFace::bottom);
    if (top != v.head->intrinsic_axes.end() && bottom != v.head->intrinsic_axes.end() &&
        !(bottom->second == top->second.opposite()))
      diag("top-bottom-not-opposite", "intrinsic top and bottom must be opposite axes");
  }

  {
    std::set<Plane> planes(v.symmetry.reflectional.begin(), v.symmetry.reflectional.end());
    std::set<int> axes(v.symmetry.rotational.begin(), v.symmetry.rotational.end());
    if (planes.size() != v.symmetry.reflectional.size() || axes.size() != v.symmetry.rotational.size())
      diag("duplicate-symmetry", "symmetry sets contain duplicates");
  }

  if (v.concavity) {
    const auto& c = *v.concavity;
    Vec3 half = 0.5 * v.default_dimensions;
    const int ax = c.opens_along.axis;
    bool inside = true;
    bool opening_reaches = false;
    for (int i = 0; i < 3; ++i) {
      bool lo_open = (i == ax && c.opens_along.sign < 0);
      bool hi_open = (i == ax && c.opens_along.sign > 0);
      if (!(c.cavity.lo[i] < c.cavity.hi[i])) inside = false;
      if (lo_open ? c.cavity.lo[i] < -half[i] - 1e-12 : c.cavity.lo[i] <= -half[i]) inside = false;
      if (hi_open ? c.cavity.hi[i] > half[i] + 1e-12 : c.cavity.hi[i] >= half[i]) inside = false;
      if (hi_open && std::abs(c.cavity.hi[i] - half[i]) <= 1e-12) opening_reaches = true;
      if (lo_open && std::abs(c.cavity.lo[i] + half[i]) <= 1e-12) opening_reaches = true;
    }
    if (!inside) diag("cavity-outside-extent", "cavity must lie strictly inside the object's extent");
    if (!opening_reaches) diag("cavity-not-open", "cavity must reach the face it opens through");
    if (!v.symmetry.rotational.empty() && !v.symmetry.rotates_about(ax))
      diag("concavity-symmetry-mismatch", "concavity must open along a rotational symmetry axis");
  }

  {
    std::set<std::string> ids;
    for (const auto& h : v.habitats) {
      if (!ids.insert(h.id).second) diag("duplicate-habitat", "habitat '" + h.id + "' declared twice");
      const auto& o = h.orientation;
      if (o.alignment != Alignment::any) {
        if (!(o.tolerance_deg > 0.0 && o.tolerance_deg <= 90.0))
          diag("habitat-tolerance", "habitat '" + h.id + "' needs a tolerance in (0, 90] degrees");
        if (!v.resolve(o.axis)) diag("habitat-axis-unresolved", "habitat '" + h.id + "' names an undeclared face");
      }
    }
  }

  for (const auto& a : v.affordances)
    if (a.behavior.empty()) diag("empty-affordance-behavior", "affordance '" + a.id + "' has no behavior");

  if (v.program) {
    const auto& p = *v.program;
    std::set<std::string> bound;
    for (const auto& s : p.args)
      if (!bound.insert(s.name).second) diag("duplicate-slot", "argument slot '" + s.name + "' declared twice");
    std::set<std::string> unbound;
    std::set<std::string> labels;
    for (const auto& e : p.subevents) {
      collect_unbound(e.expr, bound, unbound);
      labels.insert(e.label);
    }
    for (const auto& name : unbound) diag("unbound-variable", "subevent variable '" + name + "' is not an argument");
    if ((p.kind == ProgramKind::transition || p.kind == ProgramKind::process) && p.subevents.empty())
      diag("empty-body", "program has no subevents");
    if (p.kind == ProgramKind::transition &&
        std::none_of(p.subevents.begin(), p.subevents.end(),
                     [](const Subevent& s) { return has_terminating_test(s.expr); }))
      diag("transition-without-test", "transition program has no terminating test");
    for (const auto& d : p.params) {
      if (d.domain == DomainKind::length && !(d.min >= 0.0 && d.min < d.max))
        diag("invalid-length-domain", "parameter '" + d.name + "' needs 0 <= min < max");
      if (!d.subevent.empty() && !labels.count(d.subevent))
        diag("unknown-param-subevent", "parameter '" + d.name + "' attaches to unknown subevent " + d.subevent);
      if (!d.unless_bound.empty() && !bound.count(d.unless_bound))
        diag("unknown-param-slot", "parameter '" + d.name + "' refers to unknown slot " + d.unless_bound);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Voxicon table

void Voxicon::add(Voxeme v) {
  if (entries_.count(v.lemma)) throw Error(ErrorKind::duplicate_lemma, "duplicate lemma '" + v.lemma + "'");
  std::string key = v.lemma;
  entries_.emplace(std::move(key), std::move(v));
}

const Voxeme* Voxicon::find(std::string_view lemma) const {
  auto it = entries_.find(lemma);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<Voxeme> lookup(const Voxicon& voxicon, std::string_view lemma) {
  if (const Voxeme* v = voxicon.find(lemma)) return *v;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// voxicon/1 reader

namespace {

template <class E>
struct Names {
  E value;
  const char* name;
};

constexpr Names<VoxemeKind> kKindNames[] = {{VoxemeKind::object, "object"},
                                            {VoxemeKind::program, "program"},
                                            {VoxemeKind::attribute, "attribute"},
                                            {VoxemeKind::relation, "relation"}};
constexpr Names<Primitive> kPrimitiveNames[] = {
    {Primitive::box, "box"}, {Primitive::cylinder, "cylinder"}, {Primitive::sheet, "sheet"}};
constexpr Names<IntrinsicFace> kFaceNames[] = {{IntrinsicFace::top, "top"},
                                               {IntrinsicFace::bottom, "bottom"},
                                               {IntrinsicFace::front, "front"},
                                               {IntrinsicFace::side, "side"}};
constexpr Names<Plane> kPlaneNames[] = {{Plane::XY, "XY"}, {Plane::YZ, "YZ"}, {Plane::XZ, "XZ"}};
constexpr Names<Alignment> kAlignmentNames[] = {{Alignment::any, "any"},
                                                {Alignment::aligned, "aligned"},
                                                {Alignment::horizontal, "horizontal"},
                                                {Alignment::vertical, "vertical"}};
constexpr Names<SupportConstraint> kSupportNames[] = {{SupportConstraint::none, "none"},
                                                      {SupportConstraint::rest, "rest"}};
constexpr Names<AffordanceFlavor> kFlavorNames[] = {{AffordanceFlavor::gibsonian, "gibsonian"},
                                                    {AffordanceFlavor::telic, "telic"}};
constexpr Names<ProgramKind> kProgramKindNames[] = {{ProgramKind::state, "state"},
                                                    {ProgramKind::process, "process"},
                                                    {ProgramKind::transition, "transition"},
                                                    {ProgramKind::assignment, "assignment"},
                                                    {ProgramKind::test, "test"}};
constexpr Names<SlotType> kSlotNames[] = {{SlotType::agent, "agent"},
                                          {SlotType::object, "object"},
                                          {SlotType::objects, "objects"},
                                          {SlotType::location, "location"}};
constexpr Names<DomainKind> kDomainNames[] = {
    {DomainKind::angle, "angle"}, {DomainKind::length, "length"}, {DomainKind::surface_point, "surface-point"}};

template <class E, std::size_t N>
std::optional<E> from_name(const Names<E> (&table)[N], std::string_view s) {
  for (const auto& n : table)
    if (s == n.name) return n.value;
  return std::nullopt;
}

template <class E, std::size_t N>
const char* name_of(const Names<E> (&table)[N], E value) {
  for (const auto& n : table)
    if (n.value == value) return n.name;
  return "?";
}

template <class E, std::size_t N>
E expect_name(const Names<E> (&table)[N], const Line& line, std::size_t index, const char* what) {
  const auto& tok = line.at(index);
  if (auto v = from_name(table, tok.text)) return *v;
  line.fail("unknown " + std::string(what) + " '" + tok.text + "'", index);
}

SignedAxis expect_axis(const Line& line, std::size_t index) {
  if (auto a = SignedAxis::parse(line.at(index).text)) return *a;
  line.fail("expected a signed axis like +Y, got '" + line.at(index).text + "'", index);
}

int expect_plain_axis(const Line& line, std::size_t index) {
  const std::string& t = line.at(index).text;
  if (t == "X") return 0;
  if (t == "Y") return 1;
  if (t == "Z") return 2;
  line.fail("expected X, Y or Z, got '" + t + "'", index);
}

AxisRef expect_axis_ref(const Line& line, std::size_t index) {
  AxisRef ref;
  if (auto f = from_name(kFaceNames, line.at(index).text)) {
    ref.face = *f;
  } else {
    ref.axis = expect_axis(line, index);
  }
  return ref;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : lines_(detail::tokenize(text)) {}

  Voxicon read() {
    Voxicon out;
    if (lines_.empty()) return out;
    const Line& header = lines_[0];
    if (header.tokens.size() != 1 || header.tokens[0].text != "voxicon/1")
      header.fail("expected header 'voxicon/1'");
    pos_ = 1;
    std::vector<std::pair<int, Voxeme>> parsed;
    while (pos_ < lines_.size()) {
      int line_no = lines_[pos_].number;
      Voxeme v = entry();
      if (out.find(v.lemma))
        throw Error(ErrorKind::duplicate_lemma,
                    "line " + std::to_string(line_no) + ": duplicate lemma '" + v.lemma + "'", line_no);
      parsed.emplace_back(line_no, v);
      out.add(std::move(v));
    }
    for (const auto& [line_no, v] : parsed) check_references(out, v, line_no);
    return out;
  }

 private:
  const Line& next() {
    if (pos_ >= lines_.size()) {
      int n = lines_.empty() ? 0 : lines_.back().number;
      throw Error(ErrorKind::syntax, "line " + std::to_string(n) + ": unexpected end of document", n);
    }
    return lines_[pos_++];
  }

  Voxeme entry() {
    const Line& line = next();
    Voxeme v;
    v.kind = expect_name(kKindNames, line, 0, "entry kind");
    line.expect_count(3, 3);
    v.lemma = line.at(1).text;
    if (line.at(2).text != "{") line.fail("expected '{'", 2);
    if (v.kind == VoxemeKind::program) v.program = ProgramBody{};
    while (true) {
      const Line& l = next();
      const std::string& key = l.tokens[0].text;
      if (key == "}") {
        l.expect_count(1, 1);
        break;
      }
      statement(v, l, key);
    }
    return v;
  }

  void statement(Voxeme& v, const Line& l, const std::string& key) {
    if (key == "dimensions") {
      l.expect_count(4, 4);
      v.default_dimensions = Vec3(detail::to_number(l, 1), detail::to_number(l, 2), detail::to_number(l, 3));
    } else if (key == "head") {
      l.expect_count(2, 2);
      if (!v.head) v.head = GeometryHead{};
      v.head->primitive = expect_name(kPrimitiveNames, l, 1, "primitive");
    } else if (key == "axis") {
      l.expect_count(3, 3);
      if (!v.head) v.head = GeometryHead{};
      IntrinsicFace face = expect_name(kFaceNames, l, 1, "intrinsic face");
      v.head->intrinsic_axes[face] = expect_axis(l, 2);
    } else if (key == "reflect") {
      l.expect_count(2, 4);
      for (std::size_t i = 1; i < l.tokens.size(); ++i)
        v.symmetry.reflectional.push_back(expect_name(kPlaneNames, l, i, "plane"));
    } else if (key == "rotate") {
      l.expect_count(2, 4);
      for (std::size_t i = 1; i < l.tokens.size(); ++i) v.symmetry.rotational.push_back(expect_plain_axis(l, i));
    } else if (key == "concavity") {
      l.expect_count(8, 8);
      ConcavitySpec c;
      c.opens_along = expect_axis(l, 1);
      c.cavity.lo = Vec3(detail::to_number(l, 2), detail::to_number(l, 3), detail::to_number(l, 4));
      c.cavity.hi = Vec3(detail::to_number(l, 5), detail::to_number(l, 6), detail::to_number(l, 7));
      v.concavity = c;
    } else if (key == "habitat") {
      l.expect_count(3, 3);
      if (l.at(2).text != "{") l.fail("expected '{'", 2);
      v.habitats.push_back(habitat(l.at(1).text));
    } else if (key == "afford") {
      l.expect_count(4, 4);
      v.affordances.push_back({l.at(1).text, expect_name(kFlavorNames, l, 2, "affordance flavor"), l.at(3).text});
    } else if (key == "scale") {
      l.expect_count(3, 3);
      AttributeScale s;
      s.dimension = l.at(1).text;
      if (s.dimension != "volume") l.fail("unsupported scale dimension '" + s.dimension + "'", 1);
      const std::string& order = l.at(2).text;
      if (order != "ascending" && order != "descending") l.fail("expected ascending or descending", 2);
      s.ascending = order == "ascending";
      v.scale = s;
    } else if (v.program) {
      program_statement(*v.program, l, key);
    } else {
      l.fail("unknown key '" + key + "'");
    }
  }

  void program_statement(ProgramBody& p, const Line& l, const std::string& key) {
    if (key == "kind") {
      l.expect_count(2, 2);
      p.kind = expect_name(kProgramKindNames, l, 1, "program kind");
    } else if (key == "past") {
      l.expect_count(2, 2);
      p.past = l.at(1).text;
    } else if (key == "arg") {
      l.expect_count(3, 32);
      ArgumentSlot s;
      s.name = l.at(1).text;
      s.type = expect_name(kSlotNames, l, 2, "slot type");
      for (std::size_t i = 3; i < l.tokens.size(); ++i) {
        if (l.tokens[i].text == "optional") {
          if (i + 1 != l.tokens.size()) l.fail("'optional' must come last", i);
          s.optional = true;
        } else {
          if (s.type != SlotType::location) l.fail("only location slots list relations", i);
          s.relations.push_back(l.tokens[i].text);
        }
      }
      p.args.push_back(std::move(s));
    } else if (key == "subevent") {
      l.expect_count(3, 3);
      if (!l.at(2).quoted) l.fail("subevent expression must be quoted", 2);
      try {
        p.subevents.push_back({l.at(1).text, parse_expr(l.at(2).text)});
      } catch (const Error& e) {
        l.fail(e.what(), 2);
      }
    } else if (key == "param") {
      ParameterDecl d;
      d.name = l.at(1).text;
      d.domain = expect_name(kDomainNames, l, 2, "parameter domain");
      std::size_t i = 3;
      if (d.domain == DomainKind::length) {
        d.min = detail::to_number(l, 3);
        d.max = detail::to_number(l, 4);
        i = 5;
      } else if (d.domain == DomainKind::surface_point) {
        d.min = 0.0;
        d.max = 0.0;
      }
      d.subevent = l.at(i++).text;
      if (i < l.tokens.size()) {
        if (l.tokens[i].text != "unless") l.fail("expected 'unless'", i);
        d.unless_bound = l.at(i + 1).text;
        i += 2;
      }
      if (i != l.tokens.size()) l.fail("unexpected value", i);
      p.params.push_back(std::move(d));
    } else {
      l.fail("unknown program key '" + key + "'");
    }
  }

  Habitat habitat(const std::string& id) {
    Habitat h;
    h.id = id;
    while (true) {
      const Line& l = next();
      const std::string& key = l.tokens[0].text;
      if (key == "}") break;
      if (key == "orient") {
        l.expect_count(3, 5);
        h.orientation.axis = expect_axis_ref(l, 1);
        h.orientation.alignment = expect_name(kAlignmentNames, l, 2, "alignment");
        std::size_t i = 3;
        if (h.orientation.alignment == Alignment::aligned) h.orientation.target = expect_axis(l, i++);
        if (h.orientation.alignment != Alignment::any) h.orientation.tolerance_deg = detail::to_number(l, i++);
        if (i != l.tokens.size()) l.fail("unexpected value", i);
      } else if (key == "support") {
        l.expect_count(2, 2);
        h.support = expect_name(kSupportNames, l, 1, "support constraint");
      } else {
        l.fail("unknown habitat key '" + key + "'");
      }
    }
    return h;
  }

  static void check_expr_refs(const Voxicon& vx, const Expr& e, int line_no, const std::string& lemma) {
    if (e.call && !is_builtin(e.head)) {
      const Voxeme* target = vx.find(e.head);
      if (!target || (target->kind != VoxemeKind::program && target->kind != VoxemeKind::relation))
        throw Error(ErrorKind::dangling_reference,
                    "line " + std::to_string(line_no) + ": " + lemma + " refers to unknown program or relation '" +
                        e.head + "'",
                    line_no);
    }
    for (const auto& a : e.args) check_expr_refs(vx, a, line_no, lemma);
  }

  static void check_references(const Voxicon& vx, const Voxeme& v, int line_no) {
    if (!v.program) return;
    for (const auto& s : v.program->args) {
      for (const auto& rel : s.relations) {
        const Voxeme* target = vx.find(rel);
        if (!target || target->kind != VoxemeKind::relation)
          throw Error(ErrorKind::dangling_reference,
                      "line " + std::to_string(line_no) + ": " + v.lemma + " slot " + s.name +
                          " refers to unknown relation '" + rel + "'",
                      line_no);
      }
    }
    for (const auto& s : v.program->subevents) check_expr_refs(vx, s.expr, line_no, v.lemma);
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

Voxicon load_voxicon(std::string_view text) { return Reader(text).read(); }

Voxicon load_voxicon_file(const std::filesystem::path& path) {
  return load_voxicon(detail::read_file(path.string()));
}

// ---------------------------------------------------------------------------
// voxicon/1 writer

namespace {

std::string vec_text(const Vec3& v) {
  return detail::format_number(v.x()) + " " + detail::format_number(v.y()) + " " + detail::format_number(v.z());
}

std::string axis_ref_text(const AxisRef& r) {
  if (r.face) return name_of(kFaceNames, *r.face);
  if (r.axis) return r.axis->str();
  return "?";
}

}  // namespace

std::string serialize(const Voxicon& voxicon) {
  std::ostringstream out;
  out << "voxicon/1\n";
  for (const auto& [lemma, v] : voxicon.entries()) {
    out << "\n" << name_of(kKindNames, v.kind) << " " << lemma << " {\n";
    if (v.head) {
      out << "  head " << name_of(kPrimitiveNames, v.head->primitive) << "\n";
      for (const auto& [face, axis] : v.head->intrinsic_axes)
        out << "  axis " << name_of(kFaceNames, face) << " " << axis.str() << "\n";
    }
    if (v.kind == VoxemeKind::object || v.default_dimensions != Vec3::Ones())
      out << "  dimensions " << vec_text(v.default_dimensions) << "\n";
    if (!v.symmetry.reflectional.empty()) {
      out << "  reflect";
      for (Plane p : v.symmetry.reflectional) out << " " << name_of(kPlaneNames, p);
      out << "\n";
    }
    if (!v.symmetry.rotational.empty()) {
      out << "  rotate";
      for (int a : v.symmetry.rotational) out << " " << static_cast<char>('X' + a);
      out << "\n";
    }
    if (v.concavity)
      out << "  concavity " << v.concavity->opens_along.str() << " " << vec_text(v.concavity->cavity.lo) << " "
          << vec_text(v.concavity->cavity.hi) << "\n";
    for (const auto& h : v.habitats) {
      out << "  habitat " << h.id << " {\n";
      const auto& o = h.orientation;
      out << "    orient " << axis_ref_text(o.axis) << " " << name_of(kAlignmentNames, o.alignment);
      if (o.alignment == Alignment::aligned) out << " " << o.target.str();
      if (o.alignment != Alignment::any) out << " " << detail::format_number(o.tolerance_deg);
      out << "\n    support " << name_of(kSupportNames, h.support) << "\n  }\n";
    }
    for (const auto& a : v.affordances)
      out << "  afford " << a.id << " " << name_of(kFlavorNames, a.flavor) << " " << a.behavior << "\n";
    if (v.scale) out << "  scale " << v.scale->dimension << " " << (v.scale->ascending ? "ascending" : "descending") << "\n";
    if (v.program) {
      const auto& p = *v.program;
      out << "  kind " << name_of(kProgramKindNames, p.kind) << "\n";
      if (!p.past.empty()) out << "  past " << p.past << "\n";
      for (const auto& s : p.args) {
        out << "  arg " << s.name << " " << name_of(kSlotNames, s.type);
        for (const auto& r : s.relations) out << " " << r;
        if (s.optional) out << " optional";
        out << "\n";
      }
      for (const auto& s : p.subevents) out << "  subevent " << s.label << " \"" << to_string(s.expr) << "\"\n";
      for (const auto& d : p.params) {
        out << "  param " << d.name << " " << name_of(kDomainNames, d.domain);
        if (d.domain == DomainKind::length)
          out << " " << detail::format_number(d.min) << " " << detail::format_number(d.max);
        out << " " << d.subevent;
        if (!d.unless_bound.empty()) out << " unless " << d.unless_bound;
        out << "\n";
      }
    }
    out << "}\n";
  }
  return out.str();
}

std::string_view to_string(VoxemeKind k) { return name_of(kKindNames, k); }
std::string_view to_string(ProgramKind k) { return name_of(kProgramKindNames, k); }

}  // namespace voxsim
