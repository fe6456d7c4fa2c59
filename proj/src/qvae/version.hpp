#pragma once

namespace qvae {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qvae
