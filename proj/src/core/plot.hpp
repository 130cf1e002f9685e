#pragma once

#include <optional>
#include <string>

#include "core/lab.hpp"

namespace tfres {

struct AxesSpec {
    std::string x;
    std::string y;
    std::optional<std::string> group;  // one series per distinct value
    bool log_x = false;
    bool log_y = false;
    std::optional<double> hline;       // horizontal reference line
    std::string hline_label;
    std::string title;
};

// Standalone SVG. Rows with a non-"ok" status, missing cells, or non-positive
// values on a log axis are skipped. Byte-deterministic for identical input.
std::string emit_plot(const Table& table, const AxesSpec& axes);

}  // namespace tfres
