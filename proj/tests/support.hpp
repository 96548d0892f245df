#pragma once

#include "voxsim/error.hpp"
#include "voxsim/scene.hpp"
#include "voxsim/voxicon.hpp"

#include <memory>
#include <string>

namespace vtest {

inline std::shared_ptr<const voxsim::Voxicon> stock_voxicon() {
  static const auto v = std::make_shared<const voxsim::Voxicon>(voxsim::load_voxicon(voxsim::stock_voxicon_text()));
  return v;
}

inline voxsim::Scene stock_scene() { return voxsim::load_scene(voxsim::stock_scene_text(), stock_voxicon()); }

inline std::string data_path(const std::string& name) { return std::string(VOXSIM_TEST_DATA) + "/" + name; }

inline voxsim::Scene fixture(const std::string& name) {
  return voxsim::load_scene_file(data_path(name), stock_voxicon());
}

/// An empty scene on the stock voxicon, floor at 0.
inline voxsim::Scene empty_scene() { return voxsim::Scene(stock_voxicon()); }

inline voxsim::Scene place(const voxsim::Scene& s, const std::string& id, const std::string& lemma,
                           const voxsim::Vec3& position, const voxsim::Quat& rotation = voxsim::Quat::Identity(),
                           const voxsim::Vec3& scale = voxsim::Vec3::Ones()) {
  voxsim::SceneInstance inst;
  inst.id = id;
  inst.voxeme = lemma;
  inst.pose.position = position;
  inst.pose.rotation = rotation;
  inst.scale = scale;
  return s.with_instance(inst);
}

}  // namespace vtest
