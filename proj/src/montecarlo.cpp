#include "voxsim/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace voxsim {

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

ParameterValue draw(const ParameterSpec& spec, std::mt19937_64& rng) {
  if (spec.domain == DomainKind::surface_point) {
    std::uniform_real_distribution<double> u(-0.5 * spec.extents.x(), 0.5 * spec.extents.x());
    std::uniform_real_distribution<double> v(-0.5 * spec.extents.y(), 0.5 * spec.extents.y());
    double a = u(rng);
    return Vec2(a, v(rng));
  }
  std::uniform_real_distribution<double> d(spec.min, spec.max);
  return d(rng);
}

bool unguided(const Program& p) {
  if (p.motion) {
    const Motion& m = *p.motion;
    if (m.kind == Motion::Kind::roll || m.kind == Motion::Kind::slide) return true;
    if (m.kind == Motion::Kind::move && !m.location) return true;
  }
  for (const Program& c : p.children)
    if (unguided(c)) return true;
  return false;
}

std::string pair_key(const std::string& a, const std::string& b) { return a < b ? a + "|" + b : b + "|" + a; }

}  // namespace

TrajectorySummary evaluate(const GroundedEvent& event, const Scene& s, const Voxicon& voxicon,
                           const MonteCarloConfig& config) {
  TrajectorySummary out;
  Program program;
  try {
    program = compile(event, voxicon, s);
  } catch (const Error& e) {
    out.reason = e.what();
    return out;
  }

  const double eps = s.tolerances().contact;
  std::set<std::string> allowed;
  for (auto a = s.instances().begin(); a != s.instances().end(); ++a)
    for (auto b = std::next(a); b != s.instances().end(); ++b)
      if (interpenetrates(s, a->first, b->first)) allowed.insert(pair_key(a->first, b->first));
  if (auto fig = event.figure()) {
    for (const auto& [slot, b] : event.bindings)
      if (const auto* loc = std::get_if<LocationBinding>(&b); loc && loc->goal && loc->goal->allow_interpenetration)
        allowed.insert(pair_key(*fig, loc->ground));
  }

  const bool check_egress = unguided(program) && !program.figure.empty();
  const Vec3 origin = check_egress ? s.instance(program.figure).pose.position : Vec3::Zero();
  double last = 0.0;

  RunOptions opts;
  opts.keep_frames = false;
  opts.observer = [&](int, const Scene& before, const Scene& after) {
    for (const auto& [id, inst] : after.instances()) {
      const Pose& old = before.instance(id).pose;
      if ((old.position - inst.pose.position).norm() < 1e-15 && old.rotation.coeffs() == inst.pose.rotation.coeffs())
        continue;
      Aabb mine = world_region(after, id).hull.bounds().expanded(-eps);
      for (const auto& [other, oinst] : after.instances()) {
        if (other == id || allowed.count(pair_key(id, other))) continue;
        Aabb theirs = world_region(after, other).hull.bounds();
        if ((mine.hi.array() <= theirs.lo.array()).any() || (mine.lo.array() >= theirs.hi.array()).any()) continue;
        if (interpenetrates(after, id, other)) {
          out.interpenetration = true;
          out.reason = "'" + id + "' interpenetrates '" + other + "'";
          return false;
        }
      }
    }
    if (check_egress) {
      Vec3 p = after.instance(program.figure).pose.position;
      if ((p - before.instance(program.figure).pose.position).norm() > 1e-15) {
        double d = (p - origin).norm();
        if (!(d > last)) {
          out.egress_violation = true;
          out.reason = "path turns back toward its start";
          return false;
        }
        last = d;
      }
    }
    return true;
  };

  Trajectory t = run(program, s, config.max_steps, config.sim, opts);
  out.steps = static_cast<int>(t.frames.back().step);
  out.status = t.status;
  if (t.status == RunStatus::failed && out.reason.empty()) out.reason = t.failure;
  if (t.status == RunStatus::budget_exhausted) out.reason = "step budget exhausted";
  const Scene& last_scene = t.final_scene();
  if (t.status == RunStatus::completed) {
    for (const auto& [id, inst] : last_scene.instances()) {
      if (inst.attached_to) continue;
      auto violated = check_habitat(last_scene, id);
      if (!violated.empty()) {
        out.habitat_violation = true;
        out.reason = "'" + id + "' violates habitat " + violated.front();
        break;
      }
    }
  }
  out.final_scene = last_scene;
  return out;
}

std::vector<Sample> sample(const ParameterSpec& spec, const GroundedEvent& event, const Scene& s,
                           const Voxicon& voxicon, int n, std::uint64_t seed, const MonteCarloConfig& config) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "sample count must be at least 1");
  const auto open = event.open_parameters();
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng(sample_seed(seed, static_cast<std::uint64_t>(i)));
    Sample smp;
    smp.value = draw(spec, rng);
    smp.assignment[spec.name] = smp.value;
    for (const auto& other : open)
      if (other.name != spec.name) smp.assignment[other.name] = draw(other, rng);
    GroundedEvent bound = event;
    for (const auto& [name, value] : smp.assignment) bound.parameters[name] = value;
    smp.summary = evaluate(bound, s, voxicon, config);
    smp.accepted = smp.summary.accepted();
    smp.summary.final_scene.reset();
    out.push_back(std::move(smp));
  }
  return out;
}

PrototypeEstimate prototype(const std::vector<Sample>& samples, const ParameterSpec& spec,
                            const MonteCarloConfig& config, std::uint64_t seed) {
  PrototypeEstimate est;
  est.seed = seed;
  for (const Sample& smp : samples) (smp.accepted ? est.accepted : est.rejected)++;
  if (est.accepted == 0) return est;
  const bool enough = est.acceptance() >= config.alpha;
  const double n = est.accepted;

  switch (spec.domain) {
    case DomainKind::angle: {
      double c = 0.0, s = 0.0;
      for (const Sample& smp : samples)
        if (smp.accepted) {
          double t = deg_to_rad(std::get<double>(smp.value));
          c += std::cos(t);
          s += std::sin(t);
        }
      c /= n;
      s /= n;
      double r = std::hypot(c, s);
      est.dispersion = 1.0 - r;
      if (enough && r >= config.rho) {
        double mean = rad_to_deg(std::atan2(s, c));
        if (mean < 0.0) mean += 360.0;
        est.verdict = PrototypeEstimate::Verdict::value;
        est.value = mean;
      }
      break;
    }
    case DomainKind::length: {
      double sum = 0.0, sq = 0.0;
      for (const Sample& smp : samples)
        if (smp.accepted) {
          double v = std::get<double>(smp.value);
          sum += v;
          sq += v * v;
        }
      double mean = sum / n;
      double var = std::max(0.0, sq / n - mean * mean);
      est.dispersion = mean > 0.0 ? std::sqrt(var) / mean : std::numeric_limits<double>::infinity();
      if (enough && est.dispersion <= config.kappa) {
        est.verdict = PrototypeEstimate::Verdict::value;
        est.value = mean;
      }
      break;
    }
    case DomainKind::surface_point: {
      Vec2 mean = Vec2::Zero();
      for (const Sample& smp : samples)
        if (smp.accepted) mean += std::get<Vec2>(smp.value);
      mean /= n;
      double sq = 0.0;
      for (const Sample& smp : samples)
        if (smp.accepted) sq += (std::get<Vec2>(smp.value) - mean).squaredNorm();
      double half_diag = 0.5 * spec.extents.norm();
      est.dispersion = half_diag > 0.0 ? std::sqrt(sq / n) / half_diag : 0.0;
      if (enough && est.dispersion <= config.kappa) {
        est.verdict = PrototypeEstimate::Verdict::value;
        est.value = mean;
      }
      break;
    }
  }
  return est;
}

Resolution resolve(const GroundedEvent& event, const Scene& s, const Voxicon& voxicon, const MonteCarloConfig& config) {
  Resolution res{event, {}};
  const auto open = event.open_parameters();
  if (open.empty()) return res;

  std::vector<std::vector<Sample>> all;
  std::vector<std::mt19937_64> pickers;
  for (std::size_t i = 0; i < open.size(); ++i) {
    std::uint64_t seed = sample_seed(config.seed, 1000003ULL * (i + 1));
    auto samples = sample(open[i], event, s, voxicon, config.samples, seed, config);
    PrototypeEstimate est = prototype(samples, open[i], config, config.seed);
    if (est.accepted == 0)
      throw Error(ErrorKind::unsatisfiable_parameter,
                  "no accepted value for '" + open[i].name + "' in " + std::to_string(config.samples) + " samples");
    ParameterReport rep{open[i], 0.0, false, est};
    pickers.emplace_back(seed);
    std::vector<const Sample*> ok;
    for (const Sample& smp : samples)
      if (smp.accepted) ok.push_back(&smp);
    const Sample* pick = ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(pickers.back())];
    if (est.verdict == PrototypeEstimate::Verdict::value) {
      rep.value = *est.value;
      rep.prototypical = true;
    } else {
      rep.value = pick->value;
    }
    res.reports.push_back(rep);
    all.push_back(std::move(samples));
  }

  GroundedEvent bound = event;
  for (const auto& rep : res.reports) bound.parameters[rep.spec.name] = rep.value;
  if (!evaluate(bound, s, voxicon, config).accepted()) {
    // The combination does not replay cleanly; fall back to one accepted run.
    const auto& first = all.front();
    std::vector<const Sample*> ok;
    for (const Sample& smp : first)
      if (smp.accepted) ok.push_back(&smp);
    std::mt19937_64 rng(sample_seed(config.seed, 7));
    const Sample* pick = ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
    bound = event;
    for (auto& rep : res.reports) {
      rep.value = pick->assignment.at(rep.spec.name);
      rep.prototypical = false;
      bound.parameters[rep.spec.name] = rep.value;
    }
  }
  res.event = bound;
  return res;
}

}  // namespace voxsim
