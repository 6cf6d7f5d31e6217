#ifndef SCRIPTID_NUM_FORMAT_HPP
#define SCRIPTID_NUM_FORMAT_HPP

#include <charconv>
#include <string>
#include <string_view>

#include "scriptid/error.hpp"

namespace scriptid {

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& what) {
    double v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InputError("bad decimal in " + what + ": '" + std::string(s) + "'");
    return v;
}

inline long parse_long(std::string_view s, const std::string& what) {
    long v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InputError("bad integer in " + what + ": '" + std::string(s) + "'");
    return v;
}

} // namespace scriptid

#endif // SCRIPTID_NUM_FORMAT_HPP
