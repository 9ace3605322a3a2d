#ifndef CQLAB_VERSION_HPP
#define CQLAB_VERSION_HPP

namespace cqlab {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace cqlab

#endif
