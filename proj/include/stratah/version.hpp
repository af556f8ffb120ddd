#pragma once

namespace stratah {

inline constexpr const char* version_string = "0.1.0";

// Machine-report schema version; bump only on breaking key changes.
inline constexpr int report_schema_version = 1;

}  // namespace stratah
