#pragma once

namespace msburden {

inline constexpr const char* library_name = "msburden";
inline constexpr const char* library_version = "0.1.0";

}  // namespace msburden
