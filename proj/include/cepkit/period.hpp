#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cepkit/errors.hpp"

namespace cepkit {

/// Sampling frequency of a panel.
enum class Frequency { Monthly, Biannual, Yearly };

inline int periods_per_year(Frequency f) {
    switch (f) {
        case Frequency::Monthly: return 12;
        case Frequency::Biannual: return 2;
        case Frequency::Yearly: return 1;
    }
    return 0;
}

std::string frequency_name(Frequency f);
Frequency parse_frequency(std::string_view name);

/// One period of a frequency-tagged time index.
/// Labels: months "YYYY-MM", half-years "YYYY-H1"/"YYYY-H2", years "YYYY".
struct Period {
    Frequency freq = Frequency::Yearly;
    int year = 0;
    int sub = 1;  // 1-based position within the year

    /// Sequential index; consecutive periods differ by exactly 1.
    long ordinal() const { return static_cast<long>(year) * periods_per_year(freq) + (sub - 1); }

    std::string label() const;
    static Period parse(std::string_view label, Frequency freq);

    Period next() const;

    friend bool operator==(const Period& a, const Period& b) {
        return a.freq == b.freq && a.year == b.year && a.sub == b.sub;
    }
    friend bool operator!=(const Period& a, const Period& b) { return !(a == b); }
    friend bool operator<(const Period& a, const Period& b) { return a.ordinal() < b.ordinal(); }
};

/// Consecutive periods [first, first + n).
std::vector<Period> period_range(Period first, int n);

/// Calendar date, used only for daily-to-monthly aggregation.
struct Date {
    int year = 0;
    int month = 1;
    int day = 1;
    static Date parse(std::string_view label);  // "YYYY-MM-DD"
};

}  // namespace cepkit
