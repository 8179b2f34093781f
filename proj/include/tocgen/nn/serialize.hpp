#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tocgen/nn/tensor.hpp"

namespace tocgen::nn {

// Versioned binary weight container. Byte layout (little-endian):
//   magic "TOCW" | u32 version=1 | u32 tensor_count
//   per tensor: u32 name_len | name bytes | u32 ndim | u32 dims[ndim]
//               | f32 data[prod(dims)] row-major
inline constexpr char kWeightsMagic[4] = {'T', 'O', 'C', 'W'};
inline constexpr std::uint32_t kWeightsVersion = 1;

std::string serialize_weights(
    const std::vector<std::pair<std::string, const Tensor*>>& tensors);

std::map<std::string, Tensor> deserialize_weights(const std::string& bytes);

void save_weights(const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, const Tensor*>>& tensors);

/// Throws ModelVersionError on bad magic/version, ParseError on truncation.
std::map<std::string, Tensor> load_weights(const std::filesystem::path& path);

}  // namespace tocgen::nn
