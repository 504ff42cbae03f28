#pragma once

namespace spinfreeze {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spinfreeze
