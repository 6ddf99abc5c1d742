"""Panel electricity-price regressions, diagnostics and CEP target simulations."""

import json as _json

from ._core import (  # noqa: F401
    Ar2Model,
    FitResult,
    PanelDataset,
    PooledGrowthModel,
    TestReport,
    TobitModel,
    TrajectoryEnsemble,
    TrendModel,
    aic,
    average_growth_rates,
    builtin_scenario_json,
    builtin_targets_json,
    chi2_sf,
    compliance_probability,
    consumption_projection_and_target,
    derive_variable,
    durbin_watson,
    fit_ar2,
    fit_ols as _fit_ols,
    fit_panel as _fit_panel,
    fit_fgls_sur as _fit_fgls_sur,
    fit_pooled_growth,
    fit_random_effects as _fit_random_effects,
    fit_tobit,
    fit_trend,
    ghg_target,
    hausman,
    ingest_csv,
    ingest_csv_file,
    make_growth_model,
    quantiles,
    res_target,
    run_report,
    simulate,
    simulate_growth as _simulate_growth,
    vif,
    wald_slope_equality,
)

__version__ = "0.1.0"


def _spec_text(spec):
    return spec if isinstance(spec, str) else _json.dumps(spec)


def fit_panel(ds, spec):
    """Fit a panel regression; `spec` is a dict or JSON string."""
    return _fit_panel(ds, _spec_text(spec))


def fit_ols(ds, spec):
    return _fit_ols(ds, _spec_text(spec))


def fit_fgls_sur(ds, spec):
    return _fit_fgls_sur(ds, _spec_text(spec))


def fit_random_effects(ds, spec):
    return _fit_random_effects(ds, _spec_text(spec))


def simulate_growth(model, scenario, end_year, n_paths, seed, workers=1):
    """Simulate the pooled growth model; `scenario` is a name ('A'/'B'/'C'
    handled upstream), dict, or JSON string."""
    return _simulate_growth(model, _spec_text(scenario), end_year, n_paths, seed, workers)


def builtin_scenario(name):
    return _json.loads(builtin_scenario_json(name))
