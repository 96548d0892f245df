#include "voxsim/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace voxsim {

using json = nlohmann::ordered_json;

std::vector<RelationEntry> relation_matrix(const Scene& s) {
  std::vector<std::string> ids;
  for (const auto& [id, inst] : s.instances()) ids.push_back(id);
  const std::size_t n = ids.size();
  std::vector<RCC8Relation> rel(n * n, RCC8Relation::EQ);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      rel[i * n + j] = relation(s, ids[i], ids[j]);
      rel[j * n + i] = converse(rel[i * n + j]);
    }
  std::vector<RelationEntry> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) out.push_back(RelationEntry{ids[i], ids[j], rel[i * n + j]});
  return out;
}

void apply_config(std::string_view json_text, Tolerances& tol, PipelineOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_document, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::invalid_document, "config: expected a JSON object");
  auto& mc = options.montecarlo;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number())
      throw Error(ErrorKind::invalid_document, "config: '" + key + "' must be a number");
    double v = value.get<double>();
    if (key == "contact") tol.contact = v;
    else if (key == "orientation_deg") tol.orientation_deg = v;
    else if (key == "voxel_resolution") tol.voxel_resolution = v;
    else if (key == "step_length") mc.sim.step_length = v;
    else if (key == "step_angle_deg") mc.sim.step_angle_deg = v;
    else if (key == "at_tolerance") mc.sim.at_tolerance = v;
    else if (key == "lift_clearance") mc.sim.lift_clearance = v;
    else if (key == "alpha") mc.alpha = v;
    else if (key == "rho") mc.rho = v;
    else if (key == "kappa") mc.kappa = v;
    else if (key == "samples") mc.samples = static_cast<int>(v);
    else if (key == "max_steps") options.max_steps = static_cast<int>(v);
    else throw Error(ErrorKind::invalid_document, "config: unknown key '" + key + "'");
  }
  if (!(tol.contact > 0.0) || !(tol.voxel_resolution > 0.0) || !(mc.sim.step_length > 0.0) ||
      !(mc.sim.step_angle_deg > 0.0) || mc.samples < 1 || options.max_steps < 1)
    throw Error(ErrorKind::invalid_document, "config: tolerances, steps and counts must be positive");
}

CommandResult run_sentence(std::string_view sentence, const Scene& s, const PipelineOptions& options) {
  CommandResult r;
  r.sentence = std::string(sentence);
  r.seed = options.montecarlo.seed;
  r.samples = options.montecarlo.samples;
  try {
    const Voxicon& voxicon = s.voxicon();
    r.parsed = parse(sentence, voxicon);
    GroundingResult g = ground(*r.parsed, s, voxicon);
    if (!g.ok()) throw Error(g.failure().kind, g.failure().message);
    r.event = g.event();

    MonteCarloConfig mc = options.montecarlo;
    mc.max_steps = options.max_steps;
    Resolution res = resolve(*r.event, s, voxicon, mc);
    r.event = res.event;
    r.parameters = res.reports;

    Program program = compile(*r.event, voxicon, s);
    Trajectory t = run(program, s, options.max_steps, mc.sim);

    if (auto it = t.env.goals.find("g000"); it != t.env.goals.end() && it->second.goal) {
      r.goal = it->second.goal;
    } else {
      for (const auto& [slot, b] : r.event->bindings)
        if (const auto* loc = std::get_if<LocationBinding>(&b); loc && loc->goal) r.goal = loc->goal;
    }
    if (r.goal && !program.figure.empty())
      r.satisfaction_distance = satisfaction_distance(t.final_scene(), *r.goal, program.figure);
    r.relations = relation_matrix(t.final_scene());

    if (t.status == RunStatus::failed) {
      r.error = Error(t.failure_kind.value_or(ErrorKind::step_error), t.failure);
    } else if (t.status == RunStatus::budget_exhausted) {
      r.error = Error(ErrorKind::step_error, "step budget of " + std::to_string(options.max_steps) + " exhausted");
    }
    r.trajectory = std::move(t);
  } catch (const Error& e) {
    r.error = e;
  }
  if (r.error) r.exit_code = exit_code(r.error->kind());
  return r;
}

// ---------------------------------------------------------------------------
// Records

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json quat(const Quat& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

json binding_json(const SlotBinding& b) {
  if (const auto* id = std::get_if<std::string>(&b)) return *id;
  if (const auto* ids = std::get_if<std::vector<std::string>>(&b)) return *ids;
  const auto& loc = std::get<LocationBinding>(b);
  return std::string(to_string(loc.prep)) + "(" + loc.ground + ")";
}

json value_json(const ParameterValue& v) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  const Vec2& p = std::get<Vec2>(v);
  return json::array({p.x(), p.y()});
}

std::string_view target_name(PlacementGoal::Target t) {
  switch (t) {
    case PlacementGoal::Target::top: return "top";
    case PlacementGoal::Target::vertical_face: return "vertical-face";
    case PlacementGoal::Target::cavity: return "cavity";
    case PlacementGoal::Target::interior: return "interior";
  }
  return "?";
}

std::string_view domain_name(DomainKind d) {
  switch (d) {
    case DomainKind::angle: return "angle";
    case DomainKind::length: return "length";
    case DomainKind::surface_point: return "surface-point";
  }
  return "?";
}

json error_json(const Error& e) {
  json j;
  j["kind"] = std::string(to_string(e.kind()));
  j["message"] = e.what();
  if (e.column() > 0) j["position"] = e.column();
  if (e.line() > 0) j["line"] = e.line();
  return j;
}

}  // namespace

std::string result_record(const CommandResult& r) {
  json j;
  j["format"] = "result/1";
  j["sentence"] = r.sentence;
  if (r.trajectory) {
    j["status"] = std::string(to_string(r.trajectory->status));
    j["steps"] = r.trajectory->frames.back().step;
  } else {
    j["status"] = "error";
  }
  j["exit_code"] = r.exit_code;
  if (r.error) j["error"] = error_json(*r.error);
  if (r.event) {
    j["predicate"] = r.event->predicate;
    json b = json::object();
    for (const auto& [slot, binding] : r.event->bindings) b[slot] = binding_json(binding);
    j["bindings"] = b;
  }
  if (r.goal) {
    json g;
    g["prep"] = std::string(to_string(r.goal->prep));
    g["ground"] = r.goal->ground;
    g["target"] = std::string(target_name(r.goal->target));
    json rels = json::array();
    for (RCC8Relation rel : r.goal->relations.members()) rels.push_back(std::string(to_string(rel)));
    g["relations"] = rels;
    j["goal"] = g;
  }
  j["satisfaction_distance"] = r.satisfaction_distance ? json(*r.satisfaction_distance) : json(nullptr);

  json mc;
  mc["seed"] = r.seed;
  mc["samples"] = r.samples;
  json params = json::array();
  for (const auto& p : r.parameters) {
    json e;
    e["name"] = p.spec.name;
    e["domain"] = std::string(domain_name(p.spec.domain));
    e["value"] = value_json(p.value);
    e["prototypical"] = p.prototypical;
    e["verdict"] = p.estimate.verdict == PrototypeEstimate::Verdict::value ? "value" : "none-evident";
    if (p.estimate.value) e["prototype"] = value_json(*p.estimate.value);
    e["dispersion"] = p.estimate.dispersion;
    e["accepted"] = p.estimate.accepted;
    e["rejected"] = p.estimate.rejected;
    params.push_back(e);
  }
  mc["parameters"] = params;
  j["montecarlo"] = mc;

  json rels = json::array();
  for (const auto& e : r.relations) rels.push_back(json::array({e.a, e.b, std::string(to_string(e.relation))}));
  j["relations"] = rels;
  return j.dump();
}

std::string relations_record(const std::vector<RelationEntry>& relations) {
  json j;
  j["format"] = "relations/1";
  json rels = json::array();
  for (const auto& e : relations) rels.push_back(json::array({e.a, e.b, std::string(to_string(e.relation))}));
  j["relations"] = rels;
  return j.dump();
}

std::string error_record(const Error& e) {
  json j;
  j["format"] = "error/1";
  j["exit_code"] = exit_code(e.kind());
  j["error"] = error_json(e);
  return j.dump();
}

std::string error_record(const CommandResult& r) {
  json j;
  j["format"] = "error/1";
  j["sentence"] = r.sentence;
  j["exit_code"] = r.exit_code;
  if (r.error) j["error"] = error_json(*r.error);
  return j.dump();
}

std::string result_text(const CommandResult& r) {
  std::ostringstream out;
  out << r.sentence << "\n";
  if (r.trajectory)
    out << "  status: " << to_string(r.trajectory->status) << " after " << r.trajectory->frames.back().step
        << " steps\n";
  if (r.error) out << "  error: " << to_string(r.error->kind()) << ": " << r.error->what() << "\n";
  if (r.event) {
    out << "  " << r.event->predicate << "(";
    bool first = true;
    for (const auto& [slot, b] : r.event->bindings) {
      out << (first ? "" : ", ") << slot << " = " << binding_json(b).dump();
      first = false;
    }
    out << ")\n";
  }
  for (const auto& p : r.parameters)
    out << "  " << p.spec.name << " = " << to_string(p.value) << (p.prototypical ? " (prototype, " : " (sampled, ")
        << p.estimate.accepted << "/" << p.estimate.accepted + p.estimate.rejected << " accepted)\n";
  if (r.satisfaction_distance) out << "  satisfaction distance: " << *r.satisfaction_distance << "\n";
  for (const auto& e : r.relations)
    if (e.relation != RCC8Relation::DC && e.a < e.b)
      out << "  " << to_string(e.relation) << "(" << e.a << ", " << e.b << ")\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// traj/1

std::string trajectory_lines(const Trajectory& t, std::string_view sentence) {
  std::ostringstream out;
  json head;
  head["format"] = "traj/1";
  if (!sentence.empty()) head["sentence"] = std::string(sentence);
  head["figure"] = t.figure;
  head["status"] = std::string(to_string(t.status));
  head["frames"] = t.frames.size();
  head["events"] = t.events.size();
  out << head.dump() << "\n";
  for (std::size_t i = 0; i < t.frames.size(); ++i) {
    const Frame& f = t.frames[i];
    json j;
    j["frame"] = f.step;
    if (i < t.path.size()) j["path"] = vec(t.path[i]);
    json poses = json::object();
    for (const auto& [id, a] : f.scene.agents()) poses[id] = json{{"p", vec(a.pose.position)}, {"q", quat(a.pose.rotation)}};
    for (const auto& [id, inst] : f.scene.instances()) {
      json p{{"p", vec(inst.pose.position)}, {"q", quat(inst.pose.rotation)}};
      if (inst.attached_to) p["attached_to"] = *inst.attached_to;
      poses[id] = p;
    }
    j["poses"] = poses;
    out << j.dump() << "\n";
  }
  for (const EventRecord& e : t.events) {
    json j;
    j["event"] = e.step;
    j["label"] = e.label;
    if (!e.subevent.empty()) j["subevent"] = e.subevent;
    j["status"] = std::string(to_string(e.status));
    out << j.dump() << "\n";
  }
  return out.str();
}

std::vector<TrajectoryFile> read_trajectories(std::string_view text) {
  std::vector<TrajectoryFile> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  auto bad = [&](const std::string& why) {
    return Error(ErrorKind::invalid_document, "traj line " + std::to_string(number) + ": " + why, number);
  };
  auto to_vec = [&](const json& a) {
    if (!a.is_array() || a.size() != 3) throw bad("expected a 3-vector");
    return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
  };
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw bad(e.what());
    }
    try {
      if (j.contains("format")) {
        if (j["format"] != "traj/1") throw bad("expected format traj/1");
        TrajectoryFile f;
        f.figure = j.value("figure", "");
        f.status = j.value("status", "");
        out.push_back(std::move(f));
        continue;
      }
      if (out.empty()) throw bad("record before the traj/1 header");
      TrajectoryFile& f = out.back();
      if (j.contains("frame")) {
        TrajectoryFile::FrameRecord fr;
        fr.step = j["frame"].get<int>();
        if (j.contains("path")) fr.path_point = to_vec(j["path"]);
        for (const auto& [id, p] : j["poses"].items()) {
          const json& q = p.at("q");
          fr.poses[id] = Pose{to_vec(p.at("p")), Quat(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                                                       q[3].get<double>())};
        }
        f.frames.push_back(std::move(fr));
      } else if (j.contains("event")) {
        EventRecord e;
        e.step = j["event"].get<int>();
        e.label = j.at("label").get<std::string>();
        e.subevent = j.value("subevent", "");
        e.status = j.at("status") == "started" ? EventStatus::started : EventStatus::completed;
        f.events.push_back(std::move(e));
      } else {
        throw bad("unknown record");
      }
    } catch (const json::exception& e) {
      throw bad(e.what());
    }
  }
  return out;
}

}  // namespace voxsim
