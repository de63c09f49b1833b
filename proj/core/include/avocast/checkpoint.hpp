#pragma once

#include <filesystem>
#include <string>

#include "avocast/data.hpp"
#include "avocast/model.hpp"

namespace avocast {

// Everything needed to run the model on new data: architecture, split
// ratios, the fitted feature spec, and every parameter tensor. The payload
// is raw little-endian doubles, so a save/load round trip is bit-exact.
struct Checkpoint {
  ModelConfig config;
  SplitRatios ratios;
  FeatureSpec spec;
  ModelParams params;
  std::string metadata;  // free-form, typically the resolved run config
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace avocast
