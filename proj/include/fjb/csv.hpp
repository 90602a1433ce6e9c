#pragma once

#include "fjb/scenario.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace fjb
{
    /// Header row in ResultRow field order.
    const std::string& csv_header();

    /// Nine significant digits; "inf" for infinities.
    std::string format_double(double value);

    void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
}
