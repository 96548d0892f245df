#include "voxsim/pipeline.hpp"
#include "voxsim/scene.hpp"
#include "voxsim/voxicon.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace voxsim;

struct Settings {
  std::string scene_path;
  std::string voxicon_path;
  std::string config_path;
  std::string out_path;
  std::string format = "record";
  std::uint64_t seed = 0;
  int samples = 0;
  int max_steps = 0;
};

struct Session {
  std::shared_ptr<const Voxicon> voxicon;
  Scene initial;
  Scene current;
  PipelineOptions options;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Session open_session(const Settings& st) {
  auto voxicon = std::make_shared<const Voxicon>(st.voxicon_path.empty() ? load_voxicon(stock_voxicon_text())
                                                                          : load_voxicon_file(st.voxicon_path));
  Tolerances tol;
  PipelineOptions options;
  if (!st.config_path.empty()) apply_config(read_file(st.config_path), tol, options);
  options.montecarlo.seed = st.seed;
  if (st.samples > 0) options.montecarlo.samples = st.samples;
  if (st.max_steps > 0) options.max_steps = st.max_steps;
  Scene scene = st.scene_path.empty() ? load_scene(stock_scene_text(), voxicon, tol)
                                      : load_scene_file(st.scene_path, voxicon, tol);
  return Session{voxicon, scene, scene, options};
}

void print_relations(const Scene& s, const std::string& format) {
  auto rel = relation_matrix(s);
  if (format == "record") {
    std::cout << relations_record(rel) << "\n";
    return;
  }
  for (const auto& e : rel) std::cout << to_string(e.relation) << "(" << e.a << ", " << e.b << ")\n";
}

/// Runs one sentence against the session scene and reports it. The scene
/// advances only when the command completes.
int command(Session& session, const std::string& sentence, const Settings& st, std::ostream* traj) {
  CommandResult r = run_sentence(sentence, session.current, session.options);
  if (r.trajectory) {
    std::cout << (st.format == "text" ? result_text(r) : result_record(r) + "\n");
    if (traj) *traj << trajectory_lines(*r.trajectory, sentence);
    if (r.trajectory->status == RunStatus::completed) session.current = r.trajectory->final_scene();
  }
  if (r.error) std::cerr << error_record(r) << "\n";
  std::cout.flush();
  return r.exit_code;
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  if (path.empty()) return nullptr;
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*f) throw Error(ErrorKind::io, "cannot write " + path);
  return f;
}

int repl(Session& session, const Settings& st) {
  std::string line;
  std::cerr << "> " << std::flush;
  while (std::getline(std::cin, line)) {
    auto first = line.find_first_not_of(" \t\r");
    line = first == std::string::npos ? "" : line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (line.empty()) {
    } else if (line == ":quit" || line == ":q") {
      break;
    } else if (line == ":reset") {
      session.current = session.initial;
    } else if (line == ":relations") {
      print_relations(session.current, st.format);
    } else if (line.rfind(":save", 0) == 0) {
      std::string path = line.size() > 5 ? line.substr(5) : "";
      path.erase(0, path.find_first_not_of(' '));
      try {
        if (path.empty()) throw Error(ErrorKind::io, ":save needs a path");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io, "cannot write " + path);
        out << serialize(session.current);
      } catch (const Error& e) {
        std::cerr << error_record(e) << "\n";
      }
    } else if (line[0] == ':') {
      std::cerr << error_record(Error(ErrorKind::invalid_argument, "unknown command " + line)) << "\n";
    } else {
      command(session, line, st, nullptr);
    }
    std::cerr << "> " << std::flush;
  }
  return 0;
}

int batch(Session& session, const Settings& st, const std::string& path) {
  std::istringstream in(read_file(path));
  auto traj = open_out(st.out_path);
  std::string line;
  int status = 0;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    int code = command(session, line, st, traj.get());
    if (status == 0) status = code;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Headless semantic simulator for motion sentences"};
  app.require_subcommand(1);
  Settings st;
  auto common = [&st](CLI::App* sub, bool with_out) {
    sub->add_option("--scene", st.scene_path, "scene/1 file (default: bundled stock scene)");
    sub->add_option("--voxicon", st.voxicon_path, "voxicon/1 file (default: bundled stock voxicon)");
    sub->add_option("--config", st.config_path, "JSON file with tolerance and sampling overrides");
    sub->add_option("--seed", st.seed, "Monte-Carlo seed");
    sub->add_option("--samples", st.samples, "Monte-Carlo samples per open parameter")->check(CLI::PositiveNumber);
    sub->add_option("--max-steps", st.max_steps, "step budget per run")->check(CLI::PositiveNumber);
    sub->add_option("--format", st.format, "output format")->check(CLI::IsMember({"text", "record"}));
    if (with_out) sub->add_option("--out", st.out_path, "write the traj/1 trajectory here");
  };

  std::string sentence, batch_file;
  auto* run_cmd = app.add_subcommand("run", "Simulate one sentence");
  run_cmd->add_option("sentence", sentence, "e.g. \"put the ball on the table\"")->required();
  common(run_cmd, true);
  auto* rel_cmd = app.add_subcommand("relations", "Print the RCC8 relation of every ordered instance pair");
  std::string scene_file;
  rel_cmd->add_option("scene_file", scene_file, "scene/1 file (same as --scene)");
  common(rel_cmd, false);
  auto* repl_cmd = app.add_subcommand("repl", "Read sentences from standard input against an evolving scene");
  common(repl_cmd, false);
  auto* batch_cmd = app.add_subcommand("batch", "Run a file of sentences, one per line, against an evolving scene");
  batch_cmd->add_option("file", batch_file, "sentence file")->required();
  common(batch_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!scene_file.empty()) st.scene_path = scene_file;
  try {
    Session session = open_session(st);
    if (*run_cmd) {
      auto traj = open_out(st.out_path);
      return command(session, sentence, st, traj.get());
    }
    if (*rel_cmd) {
      print_relations(session.current, st.format);
      return 0;
    }
    if (*repl_cmd) return repl(session, st);
    return batch(session, st, batch_file);
  } catch (const Error& e) {
    std::cerr << error_record(e) << "\n";
    return exit_code(e.kind());
  }
}
