#pragma once

#include <string>

#include "ciot/frontend.hpp"

namespace testing_support {

inline std::string corpus_path(const std::string& name) { return std::string(CIOT_CORPUS_DIR) + "/" + name; }

inline ciot::Model parking_model() { return ciot::parse_file(corpus_path("parking_node.ciot")).model; }

}  // namespace testing_support
