#include "cepkit/derive.hpp"

#include <cmath>

#include "cepkit/errors.hpp"

namespace cepkit {

Derivation Derivation::res_share(std::string renewables, std::string gross) {
    return Derivation{Kind::ResShare, std::move(renewables), std::move(gross), {}};
}
Derivation Derivation::wedge(std::string household, std::string wholesale) {
    return Derivation{Kind::Wedge, std::move(household), std::move(wholesale), {}};
}
Derivation Derivation::lagged_diff(std::string input) {
    return Derivation{Kind::LaggedDiff, std::move(input), {}, {}};
}
Derivation Derivation::step_dummy(Period cutover) {
    return Derivation{Kind::StepDummy, {}, {}, cutover};
}
Derivation Derivation::net_balance(std::string exports, std::string imports) {
    return Derivation{Kind::NetBalance, std::move(exports), std::move(imports), {}};
}

namespace {

const Eigen::MatrixXd& input_or_throw(const PanelDataset& ds, const std::string& name) {
    if (!ds.has_variable(name))
        throw Error::input("MissingInput", "derivation input '" + name + "' not in dataset");
    return ds.values(name);
}

}  // namespace

PanelDataset derive_variable(const PanelDataset& ds, const std::string& name,
                             const Derivation& rule, const std::string& unit) {
    const int T = ds.n_periods();
    const int J = ds.n_countries();
    Eigen::MatrixXd out(T, J);

    switch (rule.kind) {
        case Derivation::Kind::ResShare: {
            const auto& num = input_or_throw(ds, rule.a);
            const auto& den = input_or_throw(ds, rule.b);
            for (int t = 0; t < T; ++t)
                for (int j = 0; j < J; ++j) {
                    double n = num(t, j), d = den(t, j);
                    if (PanelDataset::is_missing(n) || PanelDataset::is_missing(d)) {
                        out(t, j) = PanelDataset::missing();
                    } else if (d == 0.0) {
                        throw Error::numerical(
                            "DivisionByZeroGross",
                            "gross generation is 0 at " + ds.time_index()[static_cast<std::size_t>(t)].label() +
                                "/" + ds.countries()[static_cast<std::size_t>(j)]);
                    } else {
                        out(t, j) = n / d;
                    }
                }
            break;
        }
        case Derivation::Kind::Wedge:
        case Derivation::Kind::NetBalance: {
            const auto& a = input_or_throw(ds, rule.a);
            const auto& b = input_or_throw(ds, rule.b);
            out = a - b;  // NaN propagates
            break;
        }
        case Derivation::Kind::LaggedDiff: {
            const auto& x = input_or_throw(ds, rule.a);
            for (int j = 0; j < J; ++j) {
                out(0, j) = PanelDataset::missing();
                if (T > 1) out(1, j) = PanelDataset::missing();
                for (int t = 2; t < T; ++t) out(t, j) = x(t - 1, j) - x(t - 2, j);
            }
            break;
        }
        case Derivation::Kind::StepDummy: {
            if (rule.cutover.freq != ds.frequency())
                throw Error::input("MissingInput", "step dummy cut-over frequency does not match dataset");
            long cut = rule.cutover.ordinal();
            for (int t = 0; t < T; ++t) {
                double v = ds.time_index()[static_cast<std::size_t>(t)].ordinal() >= cut ? 1.0 : 0.0;
                for (int j = 0; j < J; ++j) out(t, j) = v;
            }
            break;
        }
    }
    return ds.with_variable(name, unit, std::move(out));
}

}  // namespace cepkit
