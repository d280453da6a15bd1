// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace riscav {

// Shortest decimal string that parses back to exactly the same double.
// Used for every CSV number so outputs are byte-stable and round-trip exact.
inline std::string format_double(double value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

// Compact fixed-significance formatting for plot labels.
inline std::string format_sig(double value, int significant = 6) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, value);
    return std::string(buf);
}

} // namespace riscav
