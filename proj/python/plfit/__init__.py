"""Large-scale path loss, LOS probability and shadow fading models."""

from ._core import (
    GENERATOR,
    Dataset,
    DomainError,
    EmpiricalLosCurve,
    EmptyDatasetError,
    FitReport,
    FormatError,
    SingularDesignError,
    __version__,
    abg_path_loss,
    ci_dual_path_loss,
    ci_path_loss,
    derive_distance,
    empirical_los_curve,
    fi_dual_path_loss,
    fi_path_loss,
    fit,
    fit_los_model,
    fspl_1m,
    generate_pathloss,
    los_probability,
    mean_path_loss,
    parse_csv,
    partition,
    read_csv,
    run_cli,
    sf_line,
    shadow_fading_profile,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
