#pragma once

#include "voxsim/error.hpp"
#include "voxsim/predicates.hpp"
#include "voxsim/scene.hpp"
#include "voxsim/voxicon.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace voxsim {

struct SimConfig {
  double step_length = 0.05;     // meters per translation step
  double step_angle_deg = 5.0;   // degrees per rotation step
  double at_tolerance = 0.01;    // at(A2, A3) distance
  double lift_clearance = 0.05;  // headroom above the tallest object when lifting
  bool reach_check = false;      // grasp requires the figure within reach of the agent
  double reach = 1.0;
};

// ---------------------------------------------------------------------------
// Grounded events

/// A parameter the sentence leaves open. Angles are degrees in [min, max),
/// lengths meters in [min, max], surface points patch coordinates inside
/// +-extents/2.
struct ParameterSpec {
  std::string name;
  DomainKind domain = DomainKind::angle;
  double min = 0.0;
  double max = 360.0;
  Vec2 extents = Vec2::Zero();
  std::string subevent;
};

using ParameterValue = std::variant<double, Vec2>;
std::string to_string(const ParameterValue& v);

/// A relational argument such as on(table-1). The goal is recomputed against
/// the scene when the move that needs it starts.
struct LocationBinding {
  Preposition prep = Preposition::on;
  std::string ground;
  std::optional<PlacementGoal> goal;  // as operationalized at grounding time
};

using SlotBinding = std::variant<std::string, std::vector<std::string>, LocationBinding>;

struct GroundedEvent {
  std::string predicate;
  std::map<std::string, SlotBinding> bindings;
  std::vector<ParameterSpec> unspecified;
  std::map<std::string, ParameterValue> parameters;  // bound values

  const std::string* id(const std::string& slot) const;
  const LocationBinding* location(const std::string& slot) const;
  /// Instance id that moves (A2 by convention), if bound to a single object.
  std::optional<std::string> figure() const;
  /// Specs without a bound value.
  std::vector<ParameterSpec> open_parameters() const;
};

// ---------------------------------------------------------------------------
// Programs

struct Condition {
  enum class Kind { hold, at, free };
  Kind kind = Kind::free;
  std::string a;  // hold: holder; at, free: object
  std::string b;  // hold: held object; at: goal key
};

struct PrimitiveAction {
  enum class Kind { translate, rotate, grasp, ungrasp };
  Kind kind = Kind::translate;
  std::string agent;   // grasp / ungrasp
  std::string target;  // what moves, or what is grasped
  Vec3 displacement = Vec3::Zero();
  Vec3 axis = Vec3::UnitY();
  double degrees = 0.0;
  std::string pivot;  // rotate about this instance's position; the target's own when empty
  std::string goal_key;  // ungrasp: the planned goal that decides attachment on release
};

/// Process body that expands into primitive steps when it starts. A
/// translate step may carry a rotation about the target's own center, which
/// is how rolling couples the two.
struct Motion {
  enum class Kind { move, roll, slide, turn };
  Kind kind = Kind::move;
  std::string target;
  std::string goal_key;                    // move: where the planned pose is kept
  std::optional<LocationBinding> location;  // move toward a relation
  std::optional<double> direction_deg;     // unguided move, roll, slide
  std::optional<double> distance;
  std::optional<double> angle_deg;  // turn
  std::optional<Vec2> surface_point;
};

struct Program {
  ProgramKind kind = ProgramKind::transition;
  std::string label;     // canonical subevent text, or the predicate for a root
  std::string subevent;  // E1, E2, ... when compiled from a voxicon entry

  std::optional<Condition> condition;     // state, test, process continue-condition
  std::optional<PrimitiveAction> action;  // one-shot process
  std::optional<Motion> motion;           // multi-step process
  std::vector<Program> children;          // transition
  std::string variable, value;            // assignment

  // Execution state.
  std::size_t pc = 0;
  bool started = false;
  bool done = false;
  bool planned = false;
  std::vector<PrimitiveAction> queue;
  std::size_t queue_pos = 0;

  /// Root only: parameters still open when compiled (running with any open
  /// fails) and the instance whose path is tracked.
  std::vector<ParameterSpec> pending;
  std::string figure;
};

/// Poses planned by moves, and assignment variables.
struct Env {
  struct Planned {
    std::optional<PlacementGoal> goal;
    Pose pose;
    std::string figure;
  };
  std::map<std::string, std::string> vars;
  std::map<std::string, Planned> goals;

  std::string resolve(const std::string& name) const;
};

Program compile(const GroundedEvent& event, const Voxicon& voxicon, const Scene& scene);

enum class EventStatus { started, completed };
std::string_view to_string(EventStatus s);

struct EventRecord {
  int step = 0;
  std::string label;
  std::string subevent;
  EventStatus status = EventStatus::started;
};

struct StepResult {
  Program program;
  Scene scene;
  bool done = false;
  std::vector<EventRecord> events;
};

/// One action or one test. Errors surface as voxsim::Error(step_error, ...).
StepResult step(const Program& p, const Scene& s, Env& env, const SimConfig& config = {}, int step_index = 1);

enum class RunStatus { completed, budget_exhausted, failed };
std::string_view to_string(RunStatus s);

struct Frame {
  int step = 0;
  Scene scene;
};

struct Trajectory {
  std::vector<Frame> frames;
  std::vector<EventRecord> events;
  std::vector<Vec3> path;  // figure reference position per frame
  std::string figure;
  RunStatus status = RunStatus::completed;
  std::string failure;
  std::optional<ErrorKind> failure_kind;
  Env env;

  const Scene& final_scene() const { return frames.back().scene; }
};

struct RunOptions {
  bool keep_frames = true;  // false keeps only the first and last frame
  /// Called after every step with the new scene; returning false stops the run as failed.
  std::function<bool(int step, const Scene& before, const Scene& after)> observer;
};

Trajectory run(const Program& p, const Scene& s, int max_steps, const SimConfig& config = {},
               const RunOptions& options = {});

struct RollStep {
  Vec3 translation;
  Vec3 axis;
  double angle_rad;
};

/// Rolling without slipping: per-step translation along `direction` and
/// rotation about up x direction by step/radius.
std::vector<RollStep> roll_kinematics(double radius, const Vec3& direction, double distance, double step_length);
/// Effective radius: half the smallest horizontal extent of the instance's box.
double rolling_radius(const Scene& s, std::string_view id);

/// Horizontal unit vector for a compass angle: 0 deg is +X (east), 90 deg is -Z.
Vec3 heading(double degrees);

}  // namespace voxsim
