// format.hpp — shortest round-trip decimal formatting for reproducible file output
#pragma once

#include <charconv>
#include <string>

namespace nmqj {

inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace nmqj
