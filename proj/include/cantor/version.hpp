#pragma once

namespace cantor {

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace cantor
