"""Rotating-receiver channel measurement toolkit.

Thin wrapper around the compiled extension. Documents cross the boundary
as text in the versioned formats (mms/1, pat/1, scm/1); computed results
come back as plain dicts and lists.
"""

try:
    # Installed wheel: the extension lives inside this package.
    from ._mmscm import (
        aoi_angles,
        canonicalize_scm,
        compat_margin,
        coverage_summary,
        dataset_metrics,
        eval_fit,
        fit_dataset,
        fit_points,
        fspl_db,
        los_probability,
        normalize_measurement,
        preset_names,
        run_trials,
        synth_measurement,
        umi_los_db,
        umi_nlos_db,
        validate_measurement,
    )
except ImportError:
    # In-tree build: the extension sits next to the package on sys.path.
    from _mmscm import (
        aoi_angles,
        canonicalize_scm,
        compat_margin,
        coverage_summary,
        dataset_metrics,
        eval_fit,
        fit_dataset,
        fit_points,
        fspl_db,
        los_probability,
        normalize_measurement,
        preset_names,
        run_trials,
        synth_measurement,
        umi_los_db,
        umi_nlos_db,
        validate_measurement,
    )

__version__ = "0.1.0"

__all__ = [
    "aoi_angles",
    "canonicalize_scm",
    "compat_margin",
    "coverage_summary",
    "dataset_metrics",
    "eval_fit",
    "fit_dataset",
    "fit_points",
    "fspl_db",
    "los_probability",
    "normalize_measurement",
    "preset_names",
    "run_trials",
    "synth_measurement",
    "umi_los_db",
    "umi_nlos_db",
    "validate_measurement",
]
