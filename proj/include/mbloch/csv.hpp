#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace mbloch::csv {

// All numeric CSV output goes through here: '.' decimal point, comma
// separator, 17 significant digits (round-trip exact for doubles).
inline std::string format(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void header(std::ostream& os, std::span<const std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i)
        os << (i ? "," : "") << names[i];
    os << '\n';
}

inline void row(std::ostream& os, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        os << (i ? "," : "") << format(values[i]);
    os << '\n';
}

// Row with a trailing non-numeric cell (regime tags and the like).
inline void row(std::ostream& os, std::span<const double> values,
                const std::string& tail) {
    for (double v : values) os << format(v) << ',';
    os << tail << '\n';
}

} // namespace mbloch::csv
