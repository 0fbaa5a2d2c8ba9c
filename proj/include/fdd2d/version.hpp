#pragma once

namespace fdd2d {

inline constexpr const char* version = "0.1.0";

} // namespace fdd2d
