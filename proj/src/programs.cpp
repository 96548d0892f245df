#include "voxsim/programs.hpp"

#include "text_format.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace voxsim {

std::string to_string(const ParameterValue& v) {
  if (const double* d = std::get_if<double>(&v)) return detail::format_number(*d);
  const Vec2& p = std::get<Vec2>(v);
  return detail::format_number(p.x()) + " " + detail::format_number(p.y());
}

const std::string* GroundedEvent::id(const std::string& slot) const {
  auto it = bindings.find(slot);
  return it == bindings.end() ? nullptr : std::get_if<std::string>(&it->second);
}

const LocationBinding* GroundedEvent::location(const std::string& slot) const {
  auto it = bindings.find(slot);
  return it == bindings.end() ? nullptr : std::get_if<LocationBinding>(&it->second);
}

std::optional<std::string> GroundedEvent::figure() const {
  if (const std::string* a2 = id("A2")) return *a2;
  return std::nullopt;
}

std::vector<ParameterSpec> GroundedEvent::open_parameters() const {
  std::vector<ParameterSpec> out;
  for (const auto& spec : unspecified)
    if (!parameters.count(spec.name)) out.push_back(spec);
  return out;
}

std::string Env::resolve(const std::string& name) const {
  auto it = vars.find(name);
  return it == vars.end() ? name : it->second;
}

std::string_view to_string(EventStatus s) { return s == EventStatus::started ? "started" : "completed"; }

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::budget_exhausted: return "budget-exhausted";
    case RunStatus::failed: return "failed";
  }
  return "failed";
}

Vec3 heading(double degrees) {
  double t = deg_to_rad(degrees);
  return Vec3(std::cos(t), 0.0, -std::sin(t));
}

// ---------------------------------------------------------------------------
// Kinematics

std::vector<RollStep> roll_kinematics(double radius, const Vec3& direction, double distance, double step_length) {
  if (!(radius > 0.0)) throw Error(ErrorKind::invalid_argument, "rolling radius must be positive");
  if (!(step_length > 0.0)) throw Error(ErrorKind::invalid_argument, "step length must be positive");
  if (distance < 0.0) throw Error(ErrorKind::invalid_argument, "roll distance must not be negative");
  if (direction.norm() < 1e-12 || std::abs(direction.normalized().dot(kWorldUp)) > 1e-9)
    throw Error(ErrorKind::invalid_argument, "roll direction must be horizontal");
  std::vector<RollStep> out;
  if (distance == 0.0) return out;
  Vec3 dir = direction.normalized();
  Vec3 axis = kWorldUp.cross(dir).normalized();
  auto n = static_cast<std::size_t>(std::ceil(distance / step_length - 1e-9));
  double len = distance / static_cast<double>(n);
  out.assign(n, RollStep{dir * len, axis, len / radius});
  return out;
}

double rolling_radius(const Scene& s, std::string_view id) {
  Vec3 size = world_region(s, id).hull.bounds().size();
  return 0.5 * std::min(size.x(), size.z());
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

const std::set<std::string, std::less<>> kActions = {"grasp", "ungrasp", "move",      "roll",
                                                     "slide", "turn",    "translate", "rotate"};

struct Bindings {
  const ProgramBody* body = nullptr;
  std::map<std::string, std::string> names;                   // slot -> id or variable
  std::map<std::string, std::vector<std::string>> lists;      // objects slots
  std::map<std::string, LocationBinding> locations;           // location slots
  std::map<std::string, ParameterValue> params;
  std::string goal_key;
};

struct Compiler {
  const Voxicon& voxicon;
  const Scene& scene;
  std::vector<ParameterSpec> pending;
  int goals = 0;

  std::string next_key() {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "g%03d", goals++);
    return buf;
  }

  std::string name(const Bindings& f, const Expr& e) const {
    if (e.call) throw Error(ErrorKind::invalid_argument, "expected a variable, got '" + to_string(e) + "'");
    auto it = f.names.find(e.head);
    if (it != f.names.end()) return it->second;
    return e.head;  // assignment variables such as next / prev
  }

  std::optional<double> number(const Bindings& f, const std::string& param) const {
    auto it = f.params.find(param);
    if (it == f.params.end()) return std::nullopt;
    if (const double* d = std::get_if<double>(&it->second)) return *d;
    return std::nullopt;
  }

  const LocationBinding* location_of(const Bindings& f) const {
    for (const auto& [slot, loc] : f.locations) return &loc;
    return nullptr;
  }

  Condition condition(const Bindings& f, const Expr& e) const {
    Condition c;
    if (e.head == "hold" && e.args.size() == 2) {
      c.kind = Condition::Kind::hold;
      c.a = name(f, e.args[0]);
      c.b = name(f, e.args[1]);
    } else if (e.head == "at" && e.args.size() == 2) {
      c.kind = Condition::Kind::at;
      c.a = name(f, e.args[0]);
      c.b = f.goal_key;
    } else if (e.head == "free" && e.args.size() == 1) {
      c.kind = Condition::Kind::free;
      c.a = name(f, e.args[0]);
    } else {
      throw Error(ErrorKind::unknown_predicate, "unknown condition '" + to_string(e) + "'");
    }
    return c;
  }

  Program action(const Bindings& f, const Expr& e) {
    Program p;
    p.kind = ProgramKind::process;
    const std::string& h = e.head;
    if (h == "grasp" || h == "ungrasp") {
      if (e.args.size() != 2) throw Error(ErrorKind::invalid_argument, "'" + h + "' takes two arguments");
      PrimitiveAction a;
      a.kind = h == "grasp" ? PrimitiveAction::Kind::grasp : PrimitiveAction::Kind::ungrasp;
      a.agent = name(f, e.args[0]);
      a.target = name(f, e.args[1]);
      a.goal_key = f.goal_key;
      p.action = a;
      return p;
    }
    if (e.args.size() != 1) throw Error(ErrorKind::invalid_argument, "'" + h + "' takes one argument");
    Motion m;
    m.target = name(f, e.args[0]);
    m.goal_key = f.goal_key;
    if (h == "move") {
      m.kind = Motion::Kind::move;
      if (const LocationBinding* loc = location_of(f)) {
        m.location = *loc;
      } else {
        m.direction_deg = number(f, "direction");
        m.distance = number(f, "distance");
      }
    } else if (h == "roll" || h == "slide" || h == "translate") {
      m.kind = h == "roll" ? Motion::Kind::roll : Motion::Kind::slide;
      m.direction_deg = number(f, "direction");
      m.distance = number(f, "distance");
    } else {
      m.kind = Motion::Kind::turn;
      m.angle_deg = number(f, "angle");
    }
    if (auto it = f.params.find("point"); it != f.params.end())
      if (const Vec2* uv = std::get_if<Vec2>(&it->second)) m.surface_point = *uv;
    p.motion = m;
    return p;
  }

  Program expr(const Bindings& f, const Expr& e) {
    if (e.is_guard()) {
      Program p;
      p.kind = ProgramKind::transition;
      Program test;
      test.kind = ProgramKind::test;
      test.condition = condition(f, e.args[0]);
      p.children.push_back(std::move(test));
      p.children.push_back(expr(f, e.args[1]));
      return p;
    }
    if (e.head == "while") {
      if (e.args.size() != 2) throw Error(ErrorKind::invalid_argument, "while takes a condition and a body");
      Program p = action(f, e.args[1]);
      p.condition = condition(f, e.args[0]);
      return p;
    }
    if (e.head == "sequence") return sequence(f, e);
    if (kActions.count(e.head)) return action(f, e);
    if (const Voxeme* v = voxicon.find(e.head); v && v->program) return call(f, e, *v);
    if (e.head == "hold" || e.head == "at" || e.head == "free") {
      Program p;
      p.kind = ProgramKind::test;
      p.condition = condition(f, e);
      return p;
    }
    throw Error(ErrorKind::unknown_predicate, "unknown subevent '" + to_string(e) + "'");
  }

  // sequence(list, body): body runs once per consecutive pair, with `prev`
  // and `next` assigned before each run.
  Program sequence(const Bindings& f, const Expr& e) {
    if (e.args.size() != 2) throw Error(ErrorKind::invalid_argument, "sequence takes a list and a body");
    auto it = f.lists.find(e.args[0].head);
    if (it == f.lists.end())
      throw Error(ErrorKind::unbound_slot, "'" + e.args[0].head + "' is not bound to a list of objects");
    const auto& items = it->second;
    Program p;
    p.kind = ProgramKind::transition;
    for (std::size_t i = 1; i < items.size(); ++i) {
      for (auto [var, val] : {std::pair{"prev", items[i - 1]}, std::pair{"next", items[i]}}) {
        Program a;
        a.kind = ProgramKind::assignment;
        a.variable = var;
        a.value = val;
        p.children.push_back(std::move(a));
      }
      p.children.push_back(expr(f, e.args[1]));
    }
    if (p.children.empty()) {
      // Fewer than two items: nothing to sequence, still a well-formed no-op.
      Program a;
      a.kind = ProgramKind::assignment;
      a.variable = "next";
      a.value = items.empty() ? "" : items.front();
      p.children.push_back(std::move(a));
    }
    return p;
  }

  // Nested program call such as put(A1, next, on(prev)).
  Program call(const Bindings& outer, const Expr& e, const Voxeme& v) {
    const ProgramBody& body = *v.program;
    if (e.args.size() > body.args.size())
      throw Error(ErrorKind::invalid_argument, "too many arguments for '" + v.lemma + "'");
    Bindings f;
    f.body = &body;
    f.goal_key = next_key();
    for (std::size_t i = 0; i < body.args.size(); ++i) {
      const ArgumentSlot& slot = body.args[i];
      if (i >= e.args.size()) {
        if (!slot.optional) throw Error(ErrorKind::unbound_slot, "'" + v.lemma + "' needs " + slot.name);
        continue;
      }
      const Expr& a = e.args[i];
      if (slot.type == SlotType::location) {
        auto prep = a.call && a.args.size() == 1 ? parse_preposition(a.head) : std::nullopt;
        if (!prep) throw Error(ErrorKind::invalid_argument, "expected a relation for " + slot.name);
        f.locations[slot.name] = LocationBinding{*prep, name(outer, a.args[0]), std::nullopt};
      } else if (slot.type == SlotType::objects) {
        auto it = outer.lists.find(a.head);
        if (it == outer.lists.end()) throw Error(ErrorKind::unbound_slot, "expected a list for " + slot.name);
        f.lists[slot.name] = it->second;
      } else {
        f.names[slot.name] = name(outer, a);
      }
    }
    Program p = body_program(f, body);
    p.label = to_string(e);
    return p;
  }

  Program body_program(const Bindings& f, const ProgramBody& body) {
    Program root;
    root.kind = body.kind;
    for (const Subevent& se : body.subevents) {
      Program child = expr(f, se.expr);
      child.label = to_string(se.expr);
      child.subevent = se.label;
      root.children.push_back(std::move(child));
    }
    if (root.children.empty()) throw Error(ErrorKind::invalid_argument, "program body is empty");
    return root;
  }
};

}  // namespace

Program compile(const GroundedEvent& event, const Voxicon& voxicon, const Scene& scene) {
  const Voxeme* v = voxicon.find(event.predicate);
  if (!v || !v->program) throw Error(ErrorKind::unknown_predicate, "no program for '" + event.predicate + "'");
  const ProgramBody& body = *v->program;

  Bindings f;
  f.body = &body;
  Compiler c{voxicon, scene, {}, 0};
  f.goal_key = c.next_key();
  for (const ArgumentSlot& slot : body.args) {
    auto it = event.bindings.find(slot.name);
    if (it == event.bindings.end()) {
      if (!slot.optional)
        throw Error(ErrorKind::unbound_slot, "'" + event.predicate + "' needs a binding for " + slot.name);
      continue;
    }
    const SlotBinding& b = it->second;
    switch (slot.type) {
      case SlotType::agent:
      case SlotType::object: {
        const std::string* id = std::get_if<std::string>(&b);
        if (!id) throw Error(ErrorKind::invalid_argument, slot.name + " must name one entity");
        if (!scene.has(*id) && !scene.is_agent(*id)) throw Error(ErrorKind::unknown_id, "unknown entity '" + *id + "'");
        if (slot.type == SlotType::object && !scene.has(*id))
          throw Error(ErrorKind::invalid_argument, slot.name + " must be an object, not agent '" + *id + "'");
        f.names[slot.name] = *id;
        break;
      }
      case SlotType::objects: {
        const auto* ids = std::get_if<std::vector<std::string>>(&b);
        if (!ids) throw Error(ErrorKind::invalid_argument, slot.name + " must be a list of objects");
        for (const auto& id : *ids) scene.instance(id);
        f.lists[slot.name] = *ids;
        break;
      }
      case SlotType::location: {
        const LocationBinding* loc = std::get_if<LocationBinding>(&b);
        if (!loc) throw Error(ErrorKind::invalid_argument, slot.name + " must be a relation");
        std::string_view prep = to_string(loc->prep);
        if (std::find(slot.relations.begin(), slot.relations.end(), prep) == slot.relations.end())
          throw Error(ErrorKind::invalid_argument,
                      "'" + event.predicate + "' does not take '" + std::string(prep) + "' for " + slot.name);
        scene.instance(loc->ground);
        f.locations[slot.name] = *loc;
        break;
      }
    }
  }

  std::vector<ParameterSpec> pending;
  for (const ParameterDecl& d : body.params) {
    if (!d.unless_bound.empty() && event.bindings.count(d.unless_bound)) continue;
    if (auto it = event.parameters.find(d.name); it != event.parameters.end()) {
      f.params[d.name] = it->second;
      continue;
    }
    auto spec = std::find_if(event.unspecified.begin(), event.unspecified.end(),
                             [&](const ParameterSpec& s) { return s.name == d.name; });
    if (spec != event.unspecified.end()) {
      pending.push_back(*spec);
    } else {
      pending.push_back(ParameterSpec{d.name, d.domain, d.min, d.max, Vec2::Zero(), d.subevent});
    }
  }

  Program root = c.body_program(f, body);
  root.label = event.predicate;
  root.pending = std::move(pending);
  if (auto fig = event.figure()) root.figure = *fig;
  return root;
}

// ---------------------------------------------------------------------------
// Interpretation

namespace {

struct Exec {
  Env& env;
  const SimConfig& cfg;
  int step;
  std::vector<EventRecord>& events;
};

std::string carrier_of(const Scene& s, const std::string& id) {
  std::string top = id;
  while (s.has(top) && s.instance(top).attached_to) top = *s.instance(top).attached_to;
  return top;
}

bool holds(const Condition& c, const Scene& s, const Env& env, const SimConfig& cfg) {
  switch (c.kind) {
    case Condition::Kind::hold: {
      std::string held = env.resolve(c.b);
      return s.has(held) && s.instance(held).attached_to == env.resolve(c.a);
    }
    case Condition::Kind::at: {
      auto it = env.goals.find(c.b);
      if (it == env.goals.end()) return false;
      return (s.pose_of(env.resolve(c.a)).position - it->second.pose.position).norm() <= cfg.at_tolerance;
    }
    case Condition::Kind::free:
      return !s.instance(env.resolve(c.a)).attached_to.has_value();
  }
  return false;
}

Scene apply(const PrimitiveAction& a, const Scene& s, Env& env, const SimConfig& cfg) {
  const std::string target = env.resolve(a.target);
  auto movable = [&](const std::string& id) {
    if (!s.has(id) && !s.is_agent(id)) throw Error(ErrorKind::step_error, "no instance '" + id + "'");
    if (s.has(id) && s.instance(id).attached_to)
      throw Error(ErrorKind::step_error,
                  "'" + id + "' is attached to '" + *s.instance(id).attached_to + "' and cannot move on its own");
  };
  switch (a.kind) {
    case PrimitiveAction::Kind::translate: {
      movable(target);
      Pose p = s.pose_of(target);
      p.position += a.displacement;
      if (a.degrees != 0.0) p.rotation = Quat(Eigen::AngleAxisd(deg_to_rad(a.degrees), a.axis)) * p.rotation;
      return s.with_pose(target, p);
    }
    case PrimitiveAction::Kind::rotate: {
      movable(target);
      Pose p = s.pose_of(target);
      Vec3 pivot = a.pivot.empty() ? p.position : s.pose_of(env.resolve(a.pivot)).position;
      Quat r(Eigen::AngleAxisd(deg_to_rad(a.degrees), a.axis));
      p.position = pivot + r * (p.position - pivot);
      p.rotation = r * p.rotation;
      return s.with_pose(target, p);
    }
    case PrimitiveAction::Kind::grasp: {
      const std::string agent = env.resolve(a.agent);
      if (!s.has(target)) throw Error(ErrorKind::step_error, "no instance '" + target + "' to grasp");
      if (!s.has(agent) && !s.is_agent(agent)) throw Error(ErrorKind::step_error, "no agent '" + agent + "'");
      const auto& held_by = s.instance(target).attached_to;
      if (held_by && *held_by == agent) return s;
      if (held_by && s.is_agent(*held_by))
        throw Error(ErrorKind::step_error, "'" + target + "' is already held by '" + *held_by + "'");
      if (cfg.reach_check && (s.pose_of(agent).position - s.pose_of(target).position).norm() > cfg.reach)
        throw Error(ErrorKind::step_error, "'" + target + "' is out of reach");
      try {
        return s.attached(target, agent);
      } catch (const Error& e) {
        throw Error(ErrorKind::step_error, e.what());
      }
    }
    case PrimitiveAction::Kind::ungrasp: {
      const std::string agent = env.resolve(a.agent);
      if (!s.has(target) || s.instance(target).attached_to != agent)
        throw Error(ErrorKind::step_error, "'" + agent + "' is not holding '" + target + "'");
      Scene out = s.detached(target);
      auto it = env.goals.find(a.goal_key);
      if (it != env.goals.end() && it->second.goal && it->second.goal->attach_to_ground)
        return out.attached(target, it->second.goal->ground);
      return settle(out, target);
    }
  }
  return s;
}

void push_translation(std::vector<PrimitiveAction>& q, const std::string& mover, const Vec3& delta,
                      const SimConfig& cfg) {
  double len = delta.norm();
  if (len < 1e-12) return;
  auto n = static_cast<int>(std::ceil(len / cfg.step_length - 1e-9));
  PrimitiveAction a;
  a.kind = PrimitiveAction::Kind::translate;
  a.target = mover;
  a.displacement = delta / n;
  for (int i = 0; i < n; ++i) q.push_back(a);
}

void push_rotation(std::vector<PrimitiveAction>& q, const std::string& mover, const std::string& pivot,
                   const Quat& from, const Quat& to, const SimConfig& cfg) {
  Eigen::AngleAxisd aa(to * from.inverse());
  double deg = rad_to_deg(aa.angle());
  if (deg < 1e-9) return;
  auto n = static_cast<int>(std::ceil(deg / cfg.step_angle_deg - 1e-9));
  PrimitiveAction a;
  a.kind = PrimitiveAction::Kind::rotate;
  a.target = mover;
  a.axis = aa.axis();
  a.degrees = deg / n;
  a.pivot = pivot;
  for (int i = 0; i < n; ++i) q.push_back(a);
}

// True when the figure's material at `pose` overlaps anything but `ignore`.
bool blocked(const Scene& s, const std::string& figure, const Pose& pose, const std::set<std::string>& ignore) {
  auto mine = region_at(s, figure, pose).material();
  for (const auto& [id, inst] : s.instances()) {
    if (id == figure || ignore.count(id)) continue;
    if (contact(mine, world_region(s, id).material(), s.tolerances().contact) == Contact::overlapping) return true;
  }
  return false;
}

std::vector<PrimitiveAction> plan_path(const Scene& s, const std::string& figure, const Pose& end,
                                       const std::set<std::string>& ignore, const SimConfig& cfg) {
  const std::string mover = carrier_of(s, figure);
  const Pose start = s.instance(figure).pose;
  std::vector<PrimitiveAction> q;

  bool straight = rotation_angle(start.rotation, end.rotation) < 1e-9;
  if (straight) {
    Vec3 delta = end.position - start.position;
    auto n = std::max(1, static_cast<int>(std::ceil(delta.norm() / cfg.step_length - 1e-9)));
    for (int i = 1; i <= n && straight; ++i)
      straight = !blocked(s, figure, Pose{start.position + delta * (double(i) / n), start.rotation}, ignore);
  }
  if (straight) {
    push_translation(q, mover, end.position - start.position, cfg);
    return q;
  }

  // Up, turn, over, down.
  double top = s.ground_height();
  auto riders = s.descendants(figure);
  for (const auto& [id, inst] : s.instances()) {
    if (id == figure || std::find(riders.begin(), riders.end(), id) != riders.end()) continue;
    top = std::max(top, world_region(s, id).hull.bounds().hi.y());
  }
  double lift = top + 0.5 * s.dimensions(figure).norm() + cfg.lift_clearance;
  lift = std::max({lift, start.position.y(), end.position.y()});
  Vec3 up(start.position.x(), lift, start.position.z());
  Vec3 over(end.position.x(), lift, end.position.z());
  push_translation(q, mover, up - start.position, cfg);
  push_rotation(q, mover, figure, start.rotation, end.rotation, cfg);
  push_translation(q, mover, over - up, cfg);
  push_translation(q, mover, end.position - over, cfg);
  return q;
}

std::vector<PrimitiveAction> plan_motion(const Motion& m, const Scene& s, Env& env, const SimConfig& cfg) {
  const std::string target = env.resolve(m.target);
  if (!s.has(target)) throw Error(ErrorKind::step_error, "no instance '" + target + "'");
  auto need = [&](const std::optional<double>& v, const char* what) {
    if (!v) throw Error(ErrorKind::step_error, std::string("parameter '") + what + "' is unresolved");
    return *v;
  };
  std::vector<PrimitiveAction> q;

  switch (m.kind) {
    case Motion::Kind::move: {
      if (m.location) {
        const std::string ground = env.resolve(m.location->ground);
        PlacementGoal goal = operationalize(m.location->prep, s, ground, target);
        if (m.surface_point) goal.surface_point = m.surface_point;
        Pose pose = plan_placement(s, target, goal);
        std::set<std::string> ignore;
        if (goal.allow_interpenetration) ignore.insert(goal.ground);
        for (const auto& d : s.descendants(target)) ignore.insert(d);
        env.goals[m.goal_key] = Env::Planned{goal, pose, target};
        return plan_path(s, target, pose, ignore, cfg);
      }
      double dist = need(m.distance, "distance");
      Vec3 delta = heading(need(m.direction_deg, "direction")) * dist;
      Pose end = s.instance(target).pose;
      end.position += delta;
      env.goals[m.goal_key] = Env::Planned{std::nullopt, end, target};
      push_translation(q, carrier_of(s, target), delta, cfg);
      return q;
    }
    case Motion::Kind::roll: {
      double r = rolling_radius(s, target);
      double step = std::min(cfg.step_length, r * deg_to_rad(cfg.step_angle_deg));
      for (const RollStep& rs :
           roll_kinematics(r, heading(need(m.direction_deg, "direction")), need(m.distance, "distance"), step)) {
        PrimitiveAction a;
        a.kind = PrimitiveAction::Kind::translate;
        a.target = target;
        a.displacement = rs.translation;
        a.axis = rs.axis;
        a.degrees = rad_to_deg(rs.angle_rad);
        q.push_back(a);
      }
      return q;
    }
    case Motion::Kind::slide:
      push_translation(q, target, heading(need(m.direction_deg, "direction")) * need(m.distance, "distance"), cfg);
      return q;
    case Motion::Kind::turn: {
      double deg = std::abs(need(m.angle_deg, "angle"));
      if (deg < 1e-9) return q;
      auto n = static_cast<int>(std::ceil(deg / cfg.step_angle_deg - 1e-9));
      PrimitiveAction a;
      a.kind = PrimitiveAction::Kind::rotate;
      a.target = target;
      a.axis = kWorldUp;
      a.degrees = *m.angle_deg / n;
      for (int i = 0; i < n; ++i) q.push_back(a);
      return q;
    }
  }
  return q;
}

void log(Exec& x, const Program& p, EventStatus status) {
  if (!p.label.empty()) x.events.push_back(EventRecord{x.step, p.label, p.subevent, status});
}

// Advances the node by one action or test; true once it is finished.
bool advance(Program& p, Scene& s, Exec& x) {
  if (!p.started) {
    p.started = true;
    log(x, p, EventStatus::started);
  }
  bool finished = false;
  if (!p.children.empty()) {
    if (advance(p.children[p.pc], s, x)) ++p.pc;
    finished = p.pc >= p.children.size();
  } else {
    switch (p.kind) {
      case ProgramKind::assignment:
        x.env.vars[p.variable] = x.env.resolve(p.value);
        finished = true;
        break;
      case ProgramKind::state:
      case ProgramKind::test:
        if (!p.condition) throw Error(ErrorKind::step_error, "test without a condition");
        if (!holds(*p.condition, s, x.env, x.cfg))
          throw Error(ErrorKind::step_error, "test failed" + (p.label.empty() ? std::string() : ": " + p.label));
        finished = true;
        break;
      case ProgramKind::process:
      case ProgramKind::transition:
        if (p.condition && !holds(*p.condition, s, x.env, x.cfg)) {
          finished = true;
          break;
        }
        if (p.action) {
          s = apply(*p.action, s, x.env, x.cfg);
          finished = true;
          break;
        }
        if (!p.motion) throw Error(ErrorKind::step_error, "process without a body");
        if (!p.planned) {
          p.queue = plan_motion(*p.motion, s, x.env, x.cfg);
          p.queue_pos = 0;
          p.planned = true;
        }
        if (p.queue_pos < p.queue.size()) s = apply(p.queue[p.queue_pos++], s, x.env, x.cfg);
        finished = p.queue_pos >= p.queue.size();
        break;
    }
  }
  if (finished) {
    p.done = true;
    log(x, p, EventStatus::completed);
  }
  return finished;
}

}  // namespace

StepResult step(const Program& p, const Scene& s, Env& env, const SimConfig& config, int step_index) {
  if (p.done) throw Error(ErrorKind::step_error, "program already finished");
  StepResult r{p, s, false, {}};
  Exec x{env, config, step_index, r.events};
  r.done = advance(r.program, r.scene, x);
  return r;
}

Trajectory run(const Program& p, const Scene& s, int max_steps, const SimConfig& config, const RunOptions& options) {
  if (max_steps <= 0) throw Error(ErrorKind::invalid_argument, "max_steps must be positive");
  Trajectory t;
  t.figure = p.figure;
  t.frames.push_back(Frame{0, s});
  auto track = [&](const Scene& scene) {
    if (!t.figure.empty() && scene.has(t.figure)) t.path.push_back(scene.instance(t.figure).pose.position);
  };
  track(s);

  if (!p.pending.empty()) {
    t.status = RunStatus::failed;
    t.failure_kind = ErrorKind::unsatisfiable_parameter;
    t.failure = "parameter '" + p.pending.front().name + "' is unresolved";
    return t;
  }

  Program prog = p;
  Scene scene = s;
  t.status = RunStatus::budget_exhausted;
  for (int k = 1; k <= max_steps; ++k) {
    bool done = false;
    Scene before = scene;
    try {
      Exec x{t.env, config, k, t.events};
      done = advance(prog, scene, x);
    } catch (const Error& e) {
      t.status = RunStatus::failed;
      t.failure = e.what();
      t.failure_kind = e.kind();
      break;
    } catch (const std::exception& e) {
      t.status = RunStatus::failed;
      t.failure = e.what();
      t.failure_kind = ErrorKind::step_error;
      break;
    }
    if (options.keep_frames || t.frames.size() < 2)
      t.frames.push_back(Frame{k, scene});
    else
      t.frames.back() = Frame{k, scene};
    track(scene);
    if (options.observer && !options.observer(k, before, scene)) {
      t.status = RunStatus::failed;
      t.failure = "constraint violated at step " + std::to_string(k);
      t.failure_kind = ErrorKind::step_error;
      break;
    }
    if (done) {
      t.status = RunStatus::completed;
      break;
    }
  }
  return t;
}

}  // namespace voxsim
