#pragma once

#include "voxsim/programs.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace voxsim {

struct MonteCarloConfig {
  double alpha = 0.2;  // minimum acceptance fraction
  double rho = 0.4;    // minimum mean resultant length for angles
  double kappa = 0.5;  // maximum coefficient of variation for lengths and points
  int samples = 200;
  std::uint64_t seed = 0;
  int max_steps = 5000;
  SimConfig sim;
};

/// What survives of one sampled run.
struct TrajectorySummary {
  RunStatus status = RunStatus::failed;
  bool interpenetration = false;
  bool habitat_violation = false;
  bool egress_violation = false;
  int steps = 0;
  std::string reason;
  std::optional<Scene> final_scene;

  bool accepted() const {
    return status == RunStatus::completed && !interpenetration && !habitat_violation && !egress_violation;
  }
};

struct Sample {
  ParameterValue value;
  std::map<std::string, ParameterValue> assignment;  // every open parameter of the run
  bool accepted = false;
  TrajectorySummary summary;
};

struct PrototypeEstimate {
  enum class Verdict { value, none_evident };
  Verdict verdict = Verdict::none_evident;
  std::optional<ParameterValue> value;
  /// Angles: 1 - mean resultant length. Lengths: coefficient of variation.
  /// Points: RMS spread over the patch half-diagonal.
  double dispersion = 0.0;
  int accepted = 0;
  int rejected = 0;
  std::uint64_t seed = 0;

  double acceptance() const {
    int n = accepted + rejected;
    return n == 0 ? 0.0 : static_cast<double>(accepted) / n;
  }
};

/// Runs a fully bound event and checks the acceptance constraints: completed,
/// no new interpenetration in any frame, habitats hold at the end, and
/// strictly increasing distance from the start for unguided motion.
TrajectorySummary evaluate(const GroundedEvent& event, const Scene& s, const Voxicon& voxicon,
                           const MonteCarloConfig& config);

/// n uniform draws of `spec`; other open parameters are drawn uniformly too.
std::vector<Sample> sample(const ParameterSpec& spec, const GroundedEvent& event, const Scene& s,
                           const Voxicon& voxicon, int n, std::uint64_t seed, const MonteCarloConfig& config);

PrototypeEstimate prototype(const std::vector<Sample>& samples, const ParameterSpec& spec,
                            const MonteCarloConfig& config, std::uint64_t seed = 0);

struct ParameterReport {
  ParameterSpec spec;
  ParameterValue value;
  bool prototypical = false;
  PrototypeEstimate estimate;
};

struct Resolution {
  GroundedEvent event;
  std::vector<ParameterReport> reports;
};

/// Binds every open parameter: its prototype when one exists and replays
/// cleanly, otherwise an accepted sample.
Resolution resolve(const GroundedEvent& event, const Scene& s, const Voxicon& voxicon, const MonteCarloConfig& config);

/// Per-index generator seed; samples are independent of evaluation order.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace voxsim
