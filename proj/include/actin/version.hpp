#pragma once

namespace actin {

inline const char* version = "0.1.0";

} // namespace actin
