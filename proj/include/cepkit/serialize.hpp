#pragma once

#include <json.hpp>
#include <string>

#include "cepkit/diagnostics.hpp"
#include "cepkit/fit_result.hpp"
#include "cepkit/forecast.hpp"
#include "cepkit/targets.hpp"

namespace cepkit {

// Canonical serialization: nlohmann::json objects keep keys sorted, and
// doubles render shortest-round-trip, so equal values always produce
// identical text. Golden-file tests depend on this.

nlohmann::json fit_to_json(const FitResult& fit);
std::string serialize_fit(const FitResult& fit);

nlohmann::json report_to_json(const TestReport& report);

nlohmann::json model_to_json(const ForecastModel& model);
std::string serialize_model(const ForecastModel& model);
ForecastModel parse_forecast_model(const nlohmann::json& j);

nlohmann::json model_to_json(const PooledGrowthModel& model);
std::string serialize_model(const PooledGrowthModel& model);
PooledGrowthModel parse_growth_model(const nlohmann::json& j);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario parse_scenario(const nlohmann::json& j);

}  // namespace cepkit
