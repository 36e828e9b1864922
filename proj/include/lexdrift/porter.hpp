#pragma once

#include <string>
#include <string_view>

namespace lexdrift {

enum class PorterVariant {
    /// The rule set as originally published in 1980.
    Original,
    /// The author's later reference C implementation: `bli -> ble` replaces
    /// `abli -> able`, `logi -> log` is added, and words of length <= 2 are
    /// left alone.
    ReferenceC,
};

/// Porter stemmer over a lowercase ASCII word. The result can be empty
/// (the original rule set maps "s" to "").
[[nodiscard]] std::string porter_stem(std::string_view word,
                                      PorterVariant variant = PorterVariant::Original);

} // namespace lexdrift
