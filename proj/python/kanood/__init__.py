"""KAN-based out-of-distribution detection."""

try:
    # installed wheel: the compiled module lives inside the package
    from ._kanood import (
        Detector,
        SplineGrid,
        auroc,
        basis_eval,
        basis_grad,
        fit_detector,
        fpr_at_95,
        gen_five_peaks,
        gen_friedman,
        load_detector,
        overall_average,
        seed_sweep_stats,
        welch_t_test,
    )
except ImportError:
    # in-tree builds put the module on sys.path directly
    from _kanood import (
        Detector,
        SplineGrid,
        auroc,
        basis_eval,
        basis_grad,
        fit_detector,
        fpr_at_95,
        gen_five_peaks,
        gen_friedman,
        load_detector,
        overall_average,
        seed_sweep_stats,
        welch_t_test,
    )

__all__ = [
    "Detector",
    "SplineGrid",
    "auroc",
    "basis_eval",
    "basis_grad",
    "fit_detector",
    "fpr_at_95",
    "gen_five_peaks",
    "gen_friedman",
    "load_detector",
    "overall_average",
    "seed_sweep_stats",
    "welch_t_test",
]
