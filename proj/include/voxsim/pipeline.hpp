#pragma once

#include "voxsim/error.hpp"
#include "voxsim/montecarlo.hpp"
#include "voxsim/nlp.hpp"
#include "voxsim/programs.hpp"
#include "voxsim/rcc.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voxsim {

struct RelationEntry {
  std::string a, b;
  RCC8Relation relation;
};

/// One relation per ordered pair of instances, in id order; the pair (b, a)
/// carries the converse of (a, b).
std::vector<RelationEntry> relation_matrix(const Scene& s);
/// relations/1 record for a matrix.
std::string relations_record(const std::vector<RelationEntry>& relations);
/// Error record for a failure outside any sentence (loading files, config).
std::string error_record(const Error& e);

struct PipelineOptions {
  MonteCarloConfig montecarlo;
  int max_steps = 5000;
};

/// Engine settings read from a JSON object; unknown keys are an error.
/// Keys: contact, orientation_deg, voxel_resolution, step_length,
/// step_angle_deg, at_tolerance, lift_clearance, alpha, rho, kappa, samples,
/// max_steps.
void apply_config(std::string_view json_text, Tolerances& tol, PipelineOptions& options);

/// Everything one sentence produced, successful or not.
struct CommandResult {
  std::string sentence;
  int exit_code = 0;
  std::optional<Error> error;
  std::optional<PredArgStructure> parsed;
  std::optional<GroundedEvent> event;
  std::vector<ParameterReport> parameters;
  std::optional<Trajectory> trajectory;
  std::optional<PlacementGoal> goal;
  std::optional<double> satisfaction_distance;
  std::vector<RelationEntry> relations;
  std::uint64_t seed = 0;
  int samples = 0;

  /// Scene after the command; the input scene when nothing ran.
  const Scene* final_scene() const { return trajectory ? &trajectory->final_scene() : nullptr; }
};

/// parse -> ground -> resolve -> compile -> run -> report.
CommandResult run_sentence(std::string_view sentence, const Scene& s, const PipelineOptions& options);

/// result/1 record, one line of JSON without the trailing newline.
std::string result_record(const CommandResult& r);
/// Error record for the diagnostic stream.
std::string error_record(const CommandResult& r);
std::string result_text(const CommandResult& r);

/// traj/1: a header line, one line per frame, then one line per event.
std::string trajectory_lines(const Trajectory& t, std::string_view sentence = {});

struct TrajectoryFile {
  struct FrameRecord {
    int step = 0;
    std::map<std::string, Pose> poses;  // instances and agents
    std::optional<Vec3> path_point;
  };
  std::string figure;
  std::string status;
  std::vector<FrameRecord> frames;
  std::vector<EventRecord> events;
};

/// Reads traj/1 text; several trajectories may follow each other.
std::vector<TrajectoryFile> read_trajectories(std::string_view text);

}  // namespace voxsim
