#include "cepkit/period.hpp"

#include <charconv>
#include <cstdio>

namespace cepkit {

namespace {

int parse_int(std::string_view s, std::string_view what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error::input("MalformedRow", "cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::string frequency_name(Frequency f) {
    switch (f) {
        case Frequency::Monthly: return "monthly";
        case Frequency::Biannual: return "biannual";
        case Frequency::Yearly: return "yearly";
    }
    return "?";
}

Frequency parse_frequency(std::string_view name) {
    if (name == "monthly") return Frequency::Monthly;
    if (name == "biannual") return Frequency::Biannual;
    if (name == "yearly") return Frequency::Yearly;
    throw Error::input("MalformedRow", "unknown frequency '" + std::string(name) + "'");
}

std::string Period::label() const {
    char buf[16];
    switch (freq) {
        case Frequency::Monthly: std::snprintf(buf, sizeof buf, "%04d-%02d", year, sub); break;
        case Frequency::Biannual: std::snprintf(buf, sizeof buf, "%04d-H%d", year, sub); break;
        case Frequency::Yearly: std::snprintf(buf, sizeof buf, "%04d", year); break;
    }
    return std::string(buf);
}

Period Period::parse(std::string_view s, Frequency freq) {
    Period p;
    p.freq = freq;
    switch (freq) {
        case Frequency::Monthly: {
            if (s.size() != 7 || s[4] != '-')
                throw Error::input("MalformedRow", "expected period 'YYYY-MM', got '" + std::string(s) + "'");
            p.year = parse_int(s.substr(0, 4), "year");
            p.sub = parse_int(s.substr(5, 2), "month");
            if (p.sub < 1 || p.sub > 12)
                throw Error::input("MalformedRow", "month out of range in '" + std::string(s) + "'");
            break;
        }
        case Frequency::Biannual: {
            if (s.size() != 7 || s[4] != '-' || s[5] != 'H')
                throw Error::input("MalformedRow", "expected period 'YYYY-H1' or 'YYYY-H2', got '" + std::string(s) + "'");
            p.year = parse_int(s.substr(0, 4), "year");
            p.sub = parse_int(s.substr(6, 1), "half-year");
            if (p.sub < 1 || p.sub > 2)
                throw Error::input("MalformedRow", "half-year out of range in '" + std::string(s) + "'");
            break;
        }
        case Frequency::Yearly: {
            if (s.size() != 4)
                throw Error::input("MalformedRow", "expected period 'YYYY', got '" + std::string(s) + "'");
            p.year = parse_int(s, "year");
            p.sub = 1;
            break;
        }
    }
    return p;
}

Period Period::next() const {
    Period p = *this;
    if (p.sub < periods_per_year(freq)) {
        ++p.sub;
    } else {
        p.sub = 1;
        ++p.year;
    }
    return p;
}

std::vector<Period> period_range(Period first, int n) {
    std::vector<Period> out;
    out.reserve(static_cast<std::size_t>(n));
    Period p = first;
    for (int i = 0; i < n; ++i) {
        out.push_back(p);
        p = p.next();
    }
    return out;
}

Date Date::parse(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw Error::input("MalformedRow", "expected date 'YYYY-MM-DD', got '" + std::string(s) + "'");
    Date d;
    d.year = parse_int(s.substr(0, 4), "year");
    d.month = parse_int(s.substr(5, 2), "month");
    d.day = parse_int(s.substr(8, 2), "day");
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        throw Error::input("MalformedRow", "date out of range in '" + std::string(s) + "'");
    return d;
}

}  // namespace cepkit
