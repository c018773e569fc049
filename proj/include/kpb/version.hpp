#pragma once

namespace kpb {
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "kpbound-report/1";
}  // namespace kpb
