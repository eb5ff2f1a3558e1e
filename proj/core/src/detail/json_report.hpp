#pragma once

#include <nlohmann/json.hpp>

#include "meshtok/entropy.hpp"

namespace meshtok::detail {

nlohmann::ordered_json report_to_json(const EntropyReport& report, bool per_mesh);

}  // namespace meshtok::detail
