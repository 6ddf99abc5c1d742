#pragma once

#include "cepkit/fit_result.hpp"
#include "cepkit/model_spec.hpp"
#include "cepkit/panel.hpp"

namespace cepkit {

/// Unified estimator behind all fit entry points. Dispatches on the
/// spec: plain OLS; iterated feasible GLS with cross-section SUR
/// weighting; AR-filtered (Cochrane-Orcutt style) estimation of ARMA
/// error models; and their combination. Covariance per spec.covariance,
/// with PCSE as the Beck-Katz sandwich around the final-stage design.
FitResult fit_panel(const PanelDataset& ds, const ModelSpec& spec, const FitOptions& opts = {});

/// OLS stage only (weighting None, no ARMA terms).
FitResult fit_ols(const PanelDataset& ds, const ModelSpec& spec, const FitOptions& opts = {});

/// Iterated FGLS with cross-section SUR weights and PCSE covariance.
FitResult fit_fgls_sur(const PanelDataset& ds, const ModelSpec& spec, const FitOptions& opts = {});

/// Regression with ARMA errors via iterated filtering.
FitResult fit_arma_errors(const PanelDataset& ds, const ModelSpec& spec,
                          const FitOptions& opts = {});

/// Swamy-Arora random-effects GLS over pooled regressors. The country
/// effect is treated as random; used as the Hausman comparator.
FitResult fit_random_effects(const PanelDataset& ds, const ModelSpec& spec,
                             const FitOptions& opts = {});

/// Per-country regression of dlog(dependent) on dlog(regressors) with
/// intercepts (yearly growth model). Innovation sd per country is stored
/// in details as "sigma[<country>]".
FitResult fit_pooled_growth(const PanelDataset& ds, const std::string& dependent = "GHG",
                            const std::vector<std::string>& regressors = {"CONSM", "RES"},
                            const FitOptions& opts = {});

}  // namespace cepkit
