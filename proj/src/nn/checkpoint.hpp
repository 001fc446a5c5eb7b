#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "nn/parameter_store.hpp"

namespace argpair::nn {

// Checkpoint layout:
//   8-byte magic "APCKPT01"
//   uint64 little-endian header length
//   header JSON {"params": [{name, shape, offset, dtype}...], "meta": {...}}
//   raw little-endian value blob (offsets are byte offsets into the blob)
void save_checkpoint(const ParameterStore& store, const nlohmann::json& meta,
                     const std::string& path);

struct LoadedCheckpoint {
  std::unique_ptr<ParameterStore> store;
  std::string meta_json;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace argpair::nn
