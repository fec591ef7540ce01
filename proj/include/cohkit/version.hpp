#pragma once

namespace cohkit {

inline constexpr const char* kVersion = "0.1.0";

}
