#ifndef CCFL_VERSION_HPP
#define CCFL_VERSION_HPP

namespace ccfl {
inline constexpr const char* kVersion = "0.1.0";
}  // namespace ccfl

#endif  // CCFL_VERSION_HPP
