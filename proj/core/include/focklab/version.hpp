#pragma once

namespace focklab {

inline constexpr const char* kVersion = "0.1.0";

}
