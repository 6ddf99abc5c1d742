#pragma once

#include <string>

#include "cepkit/panel.hpp"

namespace cepkit {

/// Constructed-variable rules.
///   ResShare:   a / b              (renewable generation over gross generation)
///   Wedge:      a - b              (household retail price minus wholesale price)
///   LaggedDiff: a[t-1] - a[t-2]    (lagged first difference; first two periods missing)
///   StepDummy:  0 before `cutover`, 1 from it onward
///   NetBalance: a - b              (exports minus imports)
struct Derivation {
    enum class Kind { ResShare, Wedge, LaggedDiff, StepDummy, NetBalance };
    Kind kind;
    std::string a;
    std::string b;       // unused for LaggedDiff / StepDummy
    Period cutover;      // StepDummy only

    static Derivation res_share(std::string renewables, std::string gross);
    static Derivation wedge(std::string household, std::string wholesale);
    static Derivation lagged_diff(std::string input);
    static Derivation step_dummy(Period cutover);
    static Derivation net_balance(std::string exports, std::string imports);
};

/// Append a derived variable; missing input cells propagate to the output.
PanelDataset derive_variable(const PanelDataset& ds, const std::string& name,
                             const Derivation& rule, const std::string& unit);

}  // namespace cepkit
