#include "lexdrift/decade.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "lexdrift/errors.hpp"

namespace lexdrift {

namespace {

constexpr std::array<std::string_view, 8> kLabels = {
    "1830s", "1840s", "1850s", "1860s", "1870s", "1880s", "1890s", "FULL",
};

constexpr std::array<std::string_view, 8> kSpans = {
    "1831-40", "1841-50", "1851-60", "1861-70", "1871-80", "1881-90", "1891-99", "1831-99",
};

} // namespace

std::string_view to_string(Decade d) noexcept { return kLabels[static_cast<std::size_t>(d)]; }

std::string_view year_span(Decade d) noexcept { return kSpans[static_cast<std::size_t>(d)]; }

std::optional<Decade> parse_decade(std::string_view label) noexcept
{
    std::string upper(label);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) {
        return static_cast<char>(std::toupper(c));
    });
    for (std::size_t i = 0; i < kLabels.size(); ++i) {
        std::string expected(kLabels[i]);
        std::transform(expected.begin(), expected.end(), expected.begin(), [](unsigned char c) {
            return static_cast<char>(std::toupper(c));
        });
        if (upper == expected) {
            return static_cast<Decade>(i);
        }
    }
    return std::nullopt;
}

Decade decade_from_label(std::string_view label)
{
    if (auto d = parse_decade(label)) {
        return *d;
    }
    throw NotFoundError("unknown collection '" + std::string(label) + "'");
}

Decade assign_decade(int year)
{
    if (year < kFirstYear || year > kLastYear) {
        throw OutOfRangeError("year " + std::to_string(year) + " outside corpus span "
                              + std::to_string(kFirstYear) + "-" + std::to_string(kLastYear));
    }
    // 1831..1840 -> 0, 1841..1850 -> 1, ...
    auto const slot = (year - kFirstYear) / 10;
    return static_cast<Decade>(slot);
}

} // namespace lexdrift
