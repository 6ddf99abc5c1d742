#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cepkit/period.hpp"

namespace cepkit {

/// Balanced country x time panel. Matrices are T x J (rows = periods,
/// columns = countries, column order matching countries()). Missing cells
/// are stored as NaN; they are always explicit, never implied.
///
/// Datasets are immutable after construction and safe to share across
/// threads; with_variable() returns an extended copy.
class PanelDataset {
public:
    PanelDataset(std::vector<std::string> countries, std::vector<Period> time_index);

    PanelDataset with_variable(const std::string& name, const std::string& unit,
                               Eigen::MatrixXd values) const;

    const std::vector<std::string>& countries() const { return countries_; }
    const std::vector<Period>& time_index() const { return time_index_; }
    Frequency frequency() const { return time_index_.front().freq; }
    int n_periods() const { return static_cast<int>(time_index_.size()); }
    int n_countries() const { return static_cast<int>(countries_.size()); }

    std::vector<std::string> variable_names() const;
    bool has_variable(const std::string& name) const { return variables_.count(name) > 0; }
    const Eigen::MatrixXd& values(const std::string& name) const;
    const std::string& unit(const std::string& name) const;

    Eigen::VectorXd series(const std::string& name, const std::string& country) const;
    int country_index(const std::string& country) const;

    bool has_missing(const std::string& name) const;
    /// Count of missing (NaN) cells in a variable.
    long missing_count(const std::string& name) const;

    static bool is_missing(double v) { return std::isnan(v); }
    static double missing() { return std::numeric_limits<double>::quiet_NaN(); }

private:
    struct Variable {
        std::string unit;
        Eigen::MatrixXd values;
    };

    void insert_variable(const std::string& name, const std::string& unit, Eigen::MatrixXd values);

    std::vector<std::string> countries_;
    std::vector<Period> time_index_;
    std::map<std::string, Variable> variables_;
};

/// Monthly means of a dated daily series, spanning the first through last
/// observed month. Months with no observations are flagged missing.
struct MonthlyAverages {
    std::vector<Period> months;
    std::vector<std::optional<double>> values;
};

MonthlyAverages monthly_average(const std::vector<std::pair<Date, double>>& daily);

}  // namespace cepkit
