#pragma once

#include <json.hpp>

namespace tocgen::detail {

nlohmann::ordered_json feature_layout_json();
void check_feature_layout(const nlohmann::ordered_json& j, const char* kind);

}  // namespace tocgen::detail
