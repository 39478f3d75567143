#pragma once

namespace twoblock {

/// Tool version string. Participates in certificate identity and cache keys,
/// so bump it whenever any computation that feeds a certificate changes.
inline constexpr const char* TOOL_VERSION = "1.0.0";

} // namespace twoblock
