#include "cepkit/panel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cepkit/errors.hpp"

namespace cepkit {

PanelDataset::PanelDataset(std::vector<std::string> countries, std::vector<Period> time_index)
    : countries_(std::move(countries)), time_index_(std::move(time_index)) {
    if (countries_.empty() || time_index_.empty())
        throw Error::input("UnbalancedPanel", "empty dataset: 0 countries or 0 periods");
    std::set<std::string> uniq(countries_.begin(), countries_.end());
    if (uniq.size() != countries_.size())
        throw Error::input("MalformedRow", "duplicate country code in country list");
    for (std::size_t t = 1; t < time_index_.size(); ++t) {
        if (time_index_[t].freq != time_index_[0].freq)
            throw Error::input("UnbalancedPanel", "mixed frequencies in time index");
        if (time_index_[t].ordinal() != time_index_[t - 1].ordinal() + 1)
            throw Error::input("UnbalancedPanel",
                               "time index not uniformly spaced at " + time_index_[t].label());
    }
}

void PanelDataset::insert_variable(const std::string& name, const std::string& unit,
                                   Eigen::MatrixXd values) {
    if (values.rows() != n_periods() || values.cols() != n_countries())
        throw Error::input("UnbalancedPanel", "variable '" + name + "' has shape " +
                                                  std::to_string(values.rows()) + "x" +
                                                  std::to_string(values.cols()) + ", expected " +
                                                  std::to_string(n_periods()) + "x" +
                                                  std::to_string(n_countries()));
    if (name == "RES") {
        // RES is a share of gross generation, stored as a fraction.
        for (int t = 0; t < values.rows(); ++t)
            for (int j = 0; j < values.cols(); ++j) {
                double v = values(t, j);
                if (!std::isnan(v) && (v < -1e-12 || v > 1.0 + 1e-12))
                    throw Error::input("InvalidVariable",
                                       "RES must lie in [0,1]; got " + std::to_string(v) + " at " +
                                           time_index_[t].label() + "/" + countries_[j]);
            }
    }
    variables_[name] = Variable{unit, std::move(values)};
}

PanelDataset PanelDataset::with_variable(const std::string& name, const std::string& unit,
                                         Eigen::MatrixXd values) const {
    PanelDataset out = *this;
    out.insert_variable(name, unit, std::move(values));
    return out;
}

std::vector<std::string> PanelDataset::variable_names() const {
    std::vector<std::string> names;
    names.reserve(variables_.size());
    for (const auto& [name, _] : variables_) names.push_back(name);
    return names;
}

const Eigen::MatrixXd& PanelDataset::values(const std::string& name) const {
    auto it = variables_.find(name);
    if (it == variables_.end())
        throw Error::input("UnknownVariable", "no variable named '" + name + "'");
    return it->second.values;
}

const std::string& PanelDataset::unit(const std::string& name) const {
    auto it = variables_.find(name);
    if (it == variables_.end())
        throw Error::input("UnknownVariable", "no variable named '" + name + "'");
    return it->second.unit;
}

int PanelDataset::country_index(const std::string& country) const {
    auto it = std::find(countries_.begin(), countries_.end(), country);
    if (it == countries_.end())
        throw Error::input("UnknownCountry", "no country '" + country + "' in dataset");
    return static_cast<int>(it - countries_.begin());
}

Eigen::VectorXd PanelDataset::series(const std::string& name, const std::string& country) const {
    return values(name).col(country_index(country));
}

bool PanelDataset::has_missing(const std::string& name) const { return missing_count(name) > 0; }

long PanelDataset::missing_count(const std::string& name) const {
    const auto& m = values(name);
    long n = 0;
    for (int t = 0; t < m.rows(); ++t)
        for (int j = 0; j < m.cols(); ++j)
            if (std::isnan(m(t, j))) ++n;
    return n;
}

MonthlyAverages monthly_average(const std::vector<std::pair<Date, double>>& daily) {
    MonthlyAverages out;
    if (daily.empty()) return out;

    auto key = [](const Date& d) { return d.year * 12 + (d.month - 1); };
    int lo = key(daily.front().first), hi = lo;
    for (const auto& [d, _] : daily) {
        lo = std::min(lo, key(d));
        hi = std::max(hi, key(d));
    }

    std::vector<std::vector<double>> buckets(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [d, v] : daily) buckets[static_cast<std::size_t>(key(d) - lo)].push_back(v);

    for (int k = lo; k <= hi; ++k) {
        out.months.push_back(Period{Frequency::Monthly, k / 12, k % 12 + 1});
        auto& vals = buckets[static_cast<std::size_t>(k - lo)];
        if (vals.empty()) {
            out.values.push_back(std::nullopt);
            continue;
        }
        // Sort before summing so the mean is invariant under input reordering.
        std::sort(vals.begin(), vals.end());
        double sum = 0.0;
        for (double v : vals) sum += v;
        out.values.push_back(sum / static_cast<double>(vals.size()));
    }
    return out;
}

}  // namespace cepkit
