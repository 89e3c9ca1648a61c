#pragma once

#include <string>
#include <vector>

#include "runner/config.hpp"

namespace gwp::runner {

struct PresetInfo {
  std::string name;
  std::string description;
};

const std::vector<PresetInfo>& preset_list();
/// Full configuration of a preset; `paper_scale` restores the published run
/// lengths where the default is shortened.
Config preset_config(const std::string& name, bool paper_scale);

}  // namespace gwp::runner
