#ifndef FRACAVITY_VERSION_HPP
#define FRACAVITY_VERSION_HPP

namespace fracavity {
inline constexpr const char* kVersion = "0.1.0";
}

#endif  // FRACAVITY_VERSION_HPP
