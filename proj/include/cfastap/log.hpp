#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace cfastap {

using WarningSink = std::function<void(std::string_view)>;

// Installs a process-wide sink for warnings and returns the previous one.
// The default sink writes to stderr; an empty sink discards warnings.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace cfastap
