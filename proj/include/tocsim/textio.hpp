#pragma once

#include <charconv>
#include <string>

namespace tocsim {

/// Shortest decimal string that round-trips to the same double. Keeps every
/// emitted file byte-stable and re-parsable without precision loss.
inline std::string fmt_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

}  // namespace tocsim
