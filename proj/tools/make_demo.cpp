// Generates the bundled synthetic demo panels (data/demo). The series
// are drawn from known processes so the pipeline's outputs can be checked
// against ground truth; magnitudes loosely follow European electricity
// data but carry no real observations.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cepkit/ingest.hpp"
#include "cepkit/panel.hpp"
#include "cepkit/rng.hpp"

using namespace cepkit;

namespace {

const std::vector<std::string> kCountries{"AU", "DK", "FI", "FR", "GE", "GR", "IT", "PT", "SE", "SP"};

constexpr std::uint64_t kSeed = 20080101;

// rng streams
enum Stream : std::uint64_t {
    kResM = 1,
    kGrossM,
    kFuelM,
    kNoiseM,
    kResB,
    kPbB,
    kNoiseB,
    kYearly,
    kWholesaleP
};

double gauss(std::uint64_t stream, int j, int t) {
    return rng::gauss(kSeed, stream, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(t));
}
double gauss2(std::uint64_t stream, int j, int t, int k) {
    return rng::gauss(kSeed, stream, static_cast<std::uint64_t>(j),
                      static_cast<std::uint64_t>(t) * 16 + static_cast<std::uint64_t>(k));
}

void save(const PanelDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    write_csv(ds, out);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

PanelDataset monthly_panel() {
    const int T = 108;
    const int J = static_cast<int>(kCountries.size());
    auto idx = period_range(Period{Frequency::Monthly, 2008, 1}, T);
    PanelDataset ds(kCountries, idx);

    // True wholesale-price process parameters.
    const double res_slope[10] = {-16.7, -31.6, -42.0, -42.8, -29.5, -16.4, -17.5, -11.8, -26.6, -50.6};
    const double oil_slope[10] = {0.11, -0.11, -0.17, 0.26, 0.04, 0.20, 0.30, 0.02, -0.17, 0.07};
    const double coal_slope[10] = {0.13, 0.21, 0.17, 0.13, 0.19, 0.11, 0.07, 0.01, 0.31, -0.04};
    const double gas_slope[10] = {-0.06, 1.76, 4.28, -4.36, -1.50, -4.68, -3.41, -2.40, 4.98, -2.34};
    const double carbon_slope[10] = {0.97, 0.01, 0.09, 0.09, 0.67, 0.33, 0.17, 0.54, -0.14, 0.18};
    const double consm_slope[10] = {0.008, 0.000, 0.007, 0.000, 0.000, 0.002, 0.001, -0.004, 0.002, 0.000};
    const double temp_slope[10] = {-0.11, -0.93, -0.87, 0.02, -0.37, 0.20, 0.35, 0.24, -1.10, 0.35};
    const double netbal_slope[10] = {0.000, 0.006, 0.005, -0.001, 0.000, 0.000, 0.002, -0.006, -0.004, 0.002};
    const double cwe_coef = -1.2, nwe_coef = -2.1;
    const double fe[10] = {42, 45, 47, 44, 41, 55, 58, 48, 39, 46};

    Eigen::MatrixXd renew(T, J), gross(T, J), oil(T, J), coal(T, J), gas(T, J), carbon(T, J),
        consm(T, J), temp(T, J), netbal(T, J), price(T, J);

    // Innovations: AR lags at 1, 12 and 24 over cross-correlated shocks.
    const std::vector<std::pair<int, double>> ar{{1, 0.27}, {12, -0.23}, {24, -0.17}};
    const int burn = 120;
    Eigen::MatrixXd eta(T + burn, J);
    for (int t = 0; t < T + burn; ++t) {
        double shared = gauss(kNoiseM, 999, t);
        for (int j = 0; j < J; ++j) {
            double e = 2.0 * (0.55 * shared + 0.835 * gauss(kNoiseM, j, t));
            double v = e;
            for (auto [l, ph] : ar)
                if (t - l >= 0) v += ph * eta(t - l, j);
            eta(t, j) = v;
        }
    }

    for (int j = 0; j < J; ++j) {
        double base_share = 0.18 + 0.035 * j;
        for (int t = 0; t < T; ++t) {
            int month = idx[static_cast<std::size_t>(t)].sub;
            double season = std::cos(2.0 * M_PI * (month - 1) / 12.0);
            double share = base_share + 0.002 * (t / 12.0) + 0.06 * season + 0.05 * gauss(kResM, j, t);
            share = std::clamp(share, 0.03, 0.92);
            double g = 5200.0 + 420.0 * j + 300.0 * season + 120.0 * gauss(kGrossM, j, t);
            gross(t, j) = g;
            renew(t, j) = share * g;
            oil(t, j) = 62.0 + 14.0 * std::sin(2.0 * M_PI * t / 36.0) + 4.0 * gauss2(kFuelM, j, t, 0);
            coal(t, j) = 71.0 + 9.0 * std::cos(2.0 * M_PI * t / 48.0) + 3.5 * gauss2(kFuelM, j, t, 1);
            gas(t, j) = 21.0 + 3.5 * std::sin(2.0 * M_PI * t / 30.0) + 1.5 * gauss2(kFuelM, j, t, 2);
            carbon(t, j) = 13.0 + 4.5 * std::cos(2.0 * M_PI * t / 60.0) + 1.8 * gauss2(kFuelM, j, t, 3);
            consm(t, j) = 2600.0 + 160.0 * j + 260.0 * season + 90.0 * gauss2(kFuelM, j, t, 4);
            temp(t, j) = 9.0 + 0.6 * j - 8.5 * std::cos(2.0 * M_PI * (month - 7) / 12.0) +
                         1.8 * gauss2(kFuelM, j, t, 5);
            netbal(t, j) = 420.0 * gauss2(kFuelM, j, t, 6);
        }
    }

    long cwe_cut = Period{Frequency::Monthly, 2010, 11}.ordinal();
    long nwe_cut = Period{Frequency::Monthly, 2014, 2}.ordinal();
    for (int t = 0; t < T; ++t) {
        int month = idx[static_cast<std::size_t>(t)].sub;
        double seas_effect = 2.4 * std::cos(2.0 * M_PI * (month - 1) / 12.0);
        double cwe = idx[static_cast<std::size_t>(t)].ordinal() >= cwe_cut ? 1.0 : 0.0;
        double nwe = idx[static_cast<std::size_t>(t)].ordinal() >= nwe_cut ? 1.0 : 0.0;
        for (int j = 0; j < J; ++j) {
            double share = renew(t, j) / gross(t, j);
            price(t, j) = fe[j] + seas_effect + res_slope[j] * share + oil_slope[j] * oil(t, j) +
                          coal_slope[j] * coal(t, j) + gas_slope[j] * gas(t, j) +
                          carbon_slope[j] * carbon(t, j) + consm_slope[j] * consm(t, j) +
                          temp_slope[j] * temp(t, j) + netbal_slope[j] * netbal(t, j) +
                          cwe_coef * cwe + nwe_coef * nwe + eta(t + burn, j);
        }
    }

    ds = ds.with_variable("RENEW", "GWh", renew);
    ds = ds.with_variable("GROSS", "GWh", gross);
    ds = ds.with_variable("BRENTOIL", "USD/bbl", oil);
    ds = ds.with_variable("COAL", "USD/t", coal);
    ds = ds.with_variable("GAS", "EUR/MWh", gas);
    ds = ds.with_variable("CARBON", "EUR/t", carbon);
    ds = ds.with_variable("CONSM", "GWh", consm);
    ds = ds.with_variable("TEMP", "C", temp);
    ds = ds.with_variable("NETBAL", "GWh", netbal);
    ds = ds.with_variable("P", "EUR/MWh", price);
    return ds;
}

PanelDataset biannual_panel() {
    const int T = 18;
    const int J = static_cast<int>(kCountries.size());
    auto idx = period_range(Period{Frequency::Biannual, 2008, 1}, T);
    PanelDataset ds(kCountries, idx);

    const double res_effect[10] = {55, 83, 120, 106, 50, 48, 200, 42, 55, 22};
    const double pb_effect[10] = {-0.8, -0.5, -1.7, -0.5, -0.8, -0.4, -2.9, -2.4, -0.9, -1.1};
    const double alpha[10] = {120, 260, 95, 90, 160, 105, 130, 125, 150, 115};

    Eigen::MatrixXd res(T, J), pb(T, J), wholesale(T, J), household(T, J);
    Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(T + 40, J);
    for (int t = 0; t < T + 40; ++t) {
        double shared = gauss(kNoiseB, 999, t);
        for (int j = 0; j < J; ++j) {
            double e = 1.6 * (0.5 * shared + 0.866 * gauss(kNoiseB, j, t));
            eta(t, j) = e + (t > 0 ? 0.55 * eta(t - 1, j) : 0.0);
        }
    }
    for (int j = 0; j < J; ++j) {
        double level = -2.0 + 0.4 * j;  // deficit-to-GDP level
        for (int t = 0; t < T; ++t) {
            double share = std::clamp(0.16 + 0.03 * j + 0.01 * t + 0.05 * gauss(kResB, j, t), 0.02, 0.9);
            res(t, j) = share;
            level += 0.9 * gauss(kPbB, j, t);
            pb(t, j) = level;
            wholesale(t, j) = 45.0 + 2.0 * gauss2(kPbB, j, t, 7);
        }
        for (int t = 0; t < T; ++t) {
            double dpb = t >= 2 ? pb(t - 1, j) - pb(t - 2, j) : 0.0;
            double wedge = alpha[j] + res_effect[j] * res(t, j) + pb_effect[j] * dpb + eta(t + 40, j);
            household(t, j) = wedge + wholesale(t, j);
        }
    }

    ds = ds.with_variable("RES", "fraction", res);
    ds = ds.with_variable("PB", "pct_gdp", pb);
    ds = ds.with_variable("P", "EUR/MWh", wholesale);
    ds = ds.with_variable("H", "EUR/MWh", household);
    return ds;
}

PanelDataset yearly_panel() {
    const int T = 9;  // 2008..2016
    const int J = static_cast<int>(kCountries.size());
    auto idx = period_range(Period{Frequency::Yearly, 2008, 1}, T);
    PanelDataset ds(kCountries, idx);

    const double ghg_2008[10] = {89128, 68453, 72975, 541886, 1000000, 134630, 557990, 79335, 65348, 421075};
    const double consm_2008[10] = {70000, 36000, 88000, 520000, 560000, 56000, 340000, 53000, 150000, 270000};
    const double res_2008[10] = {0.30, 0.22, 0.28, 0.15, 0.12, 0.10, 0.18, 0.27, 0.45, 0.20};
    const double consm_growth[10] = {0.009, -0.011, -0.003, -0.003, 0.003, -0.012, -0.012, -0.003, -0.015, 0.001};
    const double res_growth[10] = {0.018, 0.10, 0.025, 0.035, 0.069, 0.15, 0.071, 0.079, 0.010, 0.10};
    // dlog(GHG) = b0 + b1 dlog(CONSM) + b2 dlog(RES) + sigma eps
    const double b0[10] = {-0.018, -0.020, -0.016, -0.012, -0.009, -0.030, -0.018, -0.013, -0.015, -0.019};
    const double b1 = 0.6, b2 = -0.08, sigma = 0.012;

    Eigen::MatrixXd ghg(T, J), consm(T, J), res(T, J);
    for (int j = 0; j < J; ++j) {
        double g = ghg_2008[j], c = consm_2008[j], r = res_2008[j];
        for (int t = 0; t < T; ++t) {
            ghg(t, j) = g;
            consm(t, j) = c;
            res(t, j) = std::min(r, 0.95);
            double dc = std::log1p(consm_growth[j]) + 0.02 * gauss2(kYearly, j, t, 0);
            double dr = std::log1p(res_growth[j]) + 0.08 * gauss2(kYearly, j, t, 1);
            double dg = b0[j] + b1 * dc + b2 * dr + sigma * gauss2(kYearly, j, t, 2);
            c *= std::exp(dc);
            r *= std::exp(dr);
            g *= std::exp(dg);
        }
    }
    ds = ds.with_variable("GHG", "kt", ghg);
    ds = ds.with_variable("CONSM", "GWh", consm);
    ds = ds.with_variable("RES", "fraction", res);
    return ds;
}

}  // namespace

int main(int argc, char** argv) {
    std::filesystem::path out = argc > 1 ? argv[1] : "data/demo";
    std::filesystem::create_directories(out);

    save(monthly_panel(), out / "monthly_panel.csv");
    save(biannual_panel(), out / "biannual_panel.csv");
    save(yearly_panel(), out / "yearly_panel.csv");

    write_text(out / "schema_monthly.txt",
               "# wholesale price panel\n"
               "variable P EUR/MWh\n"
               "variable RENEW GWh\n"
               "variable GROSS GWh\n"
               "variable BRENTOIL USD/bbl\n"
               "variable COAL USD/t\n"
               "variable GAS EUR/MWh\n"
               "variable CARBON EUR/t\n"
               "variable CONSM GWh\n"
               "variable TEMP C\n"
               "variable NETBAL GWh\n"
               "derived RES fraction res_share\n"
               "derived CWE dummy step_dummy\n"
               "derived NWE dummy step_dummy\n");
    write_text(out / "schema_biannual.txt",
               "# household price panel\n"
               "variable H EUR/MWh\n"
               "variable P EUR/MWh\n"
               "variable RES fraction\n"
               "variable PB pct_gdp\n"
               "derived WEDGE EUR/MWh wedge\n"
               "derived DPB pct_gdp lagged_diff\n");
    write_text(out / "schema_yearly.txt",
               "# yearly CEP variables\n"
               "variable GHG kt\n"
               "variable CONSM GWh\n"
               "variable RES fraction\n");

    write_text(out / "spec_wholesale.json", R"({
  "derive": [
    {"name": "RES", "unit": "fraction", "kind": "res_share", "a": "RENEW", "b": "GROSS"},
    {"name": "CWE", "unit": "dummy", "kind": "step_dummy", "cutover": "2010-11"},
    {"name": "NWE", "unit": "dummy", "kind": "step_dummy", "cutover": "2014-02"}
  ],
  "model": {
    "dependent": "P",
    "regressors": [
      {"name": "RES", "scope": "per_country"},
      {"name": "BRENTOIL", "scope": "per_country"},
      {"name": "COAL", "scope": "per_country"},
      {"name": "GAS", "scope": "per_country"},
      {"name": "CARBON", "scope": "per_country"},
      {"name": "CONSM", "scope": "per_country"},
      {"name": "TEMP", "scope": "per_country"},
      {"name": "NETBAL", "scope": "per_country"}
    ],
    "fixed_effects": ["country", "seasonal"],
    "dummies": ["CWE", "NWE"],
    "ar": [1, 12, 24],
    "weighting": "cross_section_sur",
    "covariance": "pcse"
  },
  "layout": "T1"
}
)");
    write_text(out / "spec_wedge.json", R"({
  "derive": [
    {"name": "WEDGE", "unit": "EUR/MWh", "kind": "wedge", "a": "H", "b": "P"},
    {"name": "DPB", "unit": "pct_gdp", "kind": "lagged_diff", "a": "PB"}
  ],
  "model": {
    "dependent": "WEDGE",
    "regressors": [
      {"name": "RES", "scope": "per_country"},
      {"name": "DPB", "scope": "per_country"}
    ],
    "fixed_effects": ["country"],
    "ar": [1],
    "weighting": "cross_section_sur",
    "covariance": "pcse"
  },
  "layout": "T2"
}
)");
    write_text(out / "run_demo.json", R"({
  "monthly": {"input": "monthly_panel.csv", "schema": "schema_monthly.txt", "spec": "spec_wholesale.json"},
  "biannual": {"input": "biannual_panel.csv", "schema": "schema_biannual.txt", "spec": "spec_wedge.json"},
  "yearly": {"input": "yearly_panel.csv", "schema": "schema_yearly.txt"},
  "targets": "",
  "scenarios": ["A", "B", "C"],
  "n_paths": 20000,
  "master_seed": 42,
  "format": "both"
}
)");

    std::cout << "demo dataset written to " << out << "\n";
    return 0;
}
