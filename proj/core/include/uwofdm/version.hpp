// Library identification and file-format schema constants.
#pragma once

namespace uwofdm {

inline constexpr const char* kLibraryName = "uwofdm-lab";
inline constexpr int kVersionMajor = 1;
inline constexpr int kVersionMinor = 0;
inline constexpr int kCsvSchema = 1;
inline constexpr const char* kGenmatMagic = "uwofdm-genmat v1";

}  // namespace uwofdm
