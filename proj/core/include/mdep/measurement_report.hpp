#pragma once

#include <cstddef>
#include <string>

namespace mdep {

/// How many measurements each party can choose between in a protocol.
/// A setting choice exists only when some party has more than one.
struct MeasurementChoiceReport {
    std::string protocol;
    std::size_t parties = 0;
    std::size_t measurements_per_party = 0;
    bool setting_choice = false;

    friend bool operator==(const MeasurementChoiceReport&, const MeasurementChoiceReport&) = default;
};

}  // namespace mdep
