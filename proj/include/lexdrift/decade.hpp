#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace lexdrift {

/// Collection identifier: one of the seven decade sub-collections, or the
/// union of all of them.
enum class Decade : std::uint8_t {
    d1830s,
    d1840s,
    d1850s,
    d1860s,
    d1870s,
    d1880s,
    d1890s,
    Full,
};

inline constexpr std::array<Decade, 7> kDecades = {
    Decade::d1830s, Decade::d1840s, Decade::d1850s, Decade::d1860s,
    Decade::d1870s, Decade::d1880s, Decade::d1890s,
};

inline constexpr int kFirstYear = 1831;
inline constexpr int kLastYear = 1899;

[[nodiscard]] std::string_view to_string(Decade d) noexcept;

/// Accepts "1830s" .. "1890s" and "FULL" (case-insensitive).
[[nodiscard]] std::optional<Decade> parse_decade(std::string_view label) noexcept;

/// Same as parse_decade but throws NotFoundError naming the label.
[[nodiscard]] Decade decade_from_label(std::string_view label);

/// Decade i covers years 10i+1 .. 10i+10, so 1840 belongs to the 1830s and
/// 1899 to the 1890s. Years outside [1831, 1899] throw OutOfRangeError.
[[nodiscard]] Decade assign_decade(int year);

/// Human-readable year span in the "1841-50" style ("1831-99" for FULL).
[[nodiscard]] std::string_view year_span(Decade d) noexcept;

} // namespace lexdrift
