#pragma once

#include <cstdlib>
#include <string>
#include <unistd.h>

namespace patchroute::cli {

// ANSI color only on a terminal and when NO_COLOR is unset.
inline bool use_color() {
    static const bool enabled = [] {
        if (std::getenv("NO_COLOR") != nullptr) return false;
        return isatty(fileno(stdout)) == 1;
    }();
    return enabled;
}

inline std::string green(const std::string& s) {
    return use_color() ? "\033[32m" + s + "\033[0m" : s;
}

inline std::string red(const std::string& s) {
    return use_color() ? "\033[31m" + s + "\033[0m" : s;
}

inline std::string yellow(const std::string& s) {
    return use_color() ? "\033[33m" + s + "\033[0m" : s;
}

} // namespace patchroute::cli
