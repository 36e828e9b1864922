#include "lexdrift/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "lexdrift/errors.hpp"

namespace lexdrift {

namespace {

/// Σ t(t-1)/2 over runs of equal adjacent values.
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq&& equal)
{
    std::int64_t total = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && equal(i, j)) {
            ++j;
        }
        auto const t = static_cast<std::int64_t>(j - i);
        total += t * (t - 1) / 2;
        i = j;
    }
    return total;
}

/// Stable merge sort of `v` that returns the number of strict inversions.
std::int64_t sort_counting_inversions(std::vector<double>& v)
{
    std::vector<double> buf(v.size());
    std::int64_t swaps = 0;
    for (std::size_t width = 1; width < v.size(); width *= 2) {
        for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
            std::size_t const mid = std::min(lo + width, v.size());
            std::size_t const hi = std::min(lo + 2 * width, v.size());
            std::size_t i = lo;
            std::size_t j = mid;
            std::size_t k = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {
                    swaps += static_cast<std::int64_t>(mid - i);
                    buf[k++] = v[j++];
                } else {
                    buf[k++] = v[i++];
                }
            }
            while (i < mid) {
                buf[k++] = v[i++];
            }
            while (j < hi) {
                buf[k++] = v[j++];
            }
        }
        std::swap(v, buf);
    }
    return swaps;
}

void check_distribution(TermDistribution const& d, char const* name)
{
    double sum = 0.0;
    for (auto const& [term, w] : d) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ValidationError(std::string("distribution ") + name + " has invalid weight for '"
                                  + term + "'");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError(std::string("distribution ") + name + " is not normalised (sum "
                              + std::to_string(sum) + ")");
    }
}

} // namespace

std::string_view to_string(Metric m) noexcept
{
    switch (m) {
    case Metric::Jaccard:
        return "jaccard";
    case Metric::Jsd:
        return "jsd";
    case Metric::Tau:
        return "tau";
    }
    return "?";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept
{
    if (name == "jaccard") {
        return Metric::Jaccard;
    }
    if (name == "jsd") {
        return Metric::Jsd;
    }
    if (name == "tau") {
        return Metric::Tau;
    }
    return std::nullopt;
}

double jaccard(std::set<std::string> const& a, std::set<std::string> const& b)
{
    if (a.empty() && b.empty()) {
        return 1.0;
    }
    std::size_t common = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    auto const uni = a.size() + b.size() - common;
    return static_cast<double>(common) / static_cast<double>(uni);
}

RankPairs align_rankings(RankedList const& a, RankedList const& b)
{
    RankPairs out;
    std::unordered_map<std::string, std::size_t> slot;

    auto const add_list = [&](RankedList const& list, bool first) {
        double rank = 0.0;
        for (std::size_t i = 0; i < list.entries.size(); ++i) {
            auto const& e = list.entries[i];
            if (i == 0 || e.score != list.entries[i - 1].score) {
                rank = static_cast<double>(i + 1);
            }
            auto [it, inserted] = slot.try_emplace(e.doc_id, out.docs.size());
            if (inserted) {
                out.docs.push_back(e.doc_id);
                out.rank_a.push_back(0.0);
                out.rank_b.push_back(0.0);
            } else if ((first ? out.rank_a : out.rank_b)[it->second] != 0.0) {
                throw ValidationError("ranked list repeats doc id '" + e.doc_id + "'");
            }
            (first ? out.rank_a : out.rank_b)[it->second] = rank;
        }
    };
    add_list(a, true);
    add_list(b, false);

    auto const absent_a = static_cast<double>(std::max(a.depth, a.entries.size()) + 1);
    auto const absent_b = static_cast<double>(std::max(b.depth, b.entries.size()) + 1);
    for (std::size_t i = 0; i < out.docs.size(); ++i) {
        if (out.rank_a[i] == 0.0) {
            out.rank_a[i] = absent_a;
        }
        if (out.rank_b[i] == 0.0) {
            out.rank_b[i] = absent_b;
        }
    }
    return out;
}

double kendall_tau(RankedList const& a, RankedList const& b)
{
    if (a.empty() && b.empty()) {
        throw ValidationError("Kendall's tau is undefined for two empty lists");
    }
    auto const pairs = align_rankings(a, b);
    std::size_t const n = pairs.docs.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (pairs.rank_a[i] != pairs.rank_a[j]) {
            return pairs.rank_a[i] < pairs.rank_a[j];
        }
        return pairs.rank_b[i] < pairs.rank_b[j];
    });
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = pairs.rank_a[order[i]];
        ys[i] = pairs.rank_b[order[i]];
    }

    auto const total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
    auto const ties_x = tied_pairs(n, [&](std::size_t i, std::size_t j) { return xs[i] == xs[j]; });
    auto const ties_xy = tied_pairs(
        n, [&](std::size_t i, std::size_t j) { return xs[i] == xs[j] && ys[i] == ys[j]; });
    auto const swaps = sort_counting_inversions(ys);
    auto const ties_y = tied_pairs(n, [&](std::size_t i, std::size_t j) { return ys[i] == ys[j]; });

    auto const concordant_minus_discordant = total - ties_x - ties_y + ties_xy - 2 * swaps;
    double const denom = std::sqrt(static_cast<double>(total - ties_x)
                                   * static_cast<double>(total - ties_y));
    if (denom == 0.0) {
        return 0.0;
    }
    return static_cast<double>(concordant_minus_discordant) / denom;
}

double js_divergence(TermDistribution const& p, TermDistribution const& q, LogBase base)
{
    check_distribution(p, "p");
    check_distribution(q, "q");

    auto const half_kl = [](double x, double m) { return x > 0.0 ? 0.5 * x * std::log(x / m) : 0.0; };

    double acc = 0.0;
    auto ip = p.begin();
    auto iq = q.begin();
    while (ip != p.end() || iq != q.end()) {
        double pv = 0.0;
        double qv = 0.0;
        if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
            pv = (ip++)->second;
        } else if (ip == p.end() || iq->first < ip->first) {
            qv = (iq++)->second;
        } else {
            pv = (ip++)->second;
            qv = (iq++)->second;
        }
        double const m = 0.5 * (pv + qv);
        acc += half_kl(pv, m) + half_kl(qv, m);
    }

    double const upper = base == LogBase::Two ? 1.0 : std::log(2.0);
    if (base == LogBase::Two) {
        acc /= std::log(2.0);
    }
    return std::clamp(acc, 0.0, upper);
}

MetricCell aggregate(std::span<double const> values, Metric metric)
{
    MetricCell cell;
    cell.metric = metric;
    cell.n = values.size();
    if (values.empty()) {
        return cell;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    auto const n = static_cast<double>(values.size());
    cell.mean = sum / n;
    double sq = 0.0;
    for (double v : values) {
        sq += (v - cell.mean) * (v - cell.mean);
    }
    cell.std = std::sqrt(sq / n);
    return cell;
}

} // namespace lexdrift
