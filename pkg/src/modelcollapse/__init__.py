"""Model collapse under recursive density fitting and resampling."""

__version__ = "0.1.0"

from .distributions import (  # noqa: E402
    PRESETS,
    Gamma,
    MixtureSpec,
    Normal,
    SampleSet,
    Uniform,
    get_preset,
    make_rng,
    mixture_pdf,
    sample_component,
    sample_mixture,
)
from .estimators import (  # noqa: E402
    GaussianModel,
    KdeModel,
    fit_gaussian,
    fit_kde,
    gaussian_sample,
    kde_log_density,
    kde_sample,
)
from .metrics import (  # noqa: E402
    Histogram,
    gaussian_w2_squared,
    histogram_density,
    kl_divergence,
    wasserstein1,
)
from .theory import (  # noqa: E402
    SampleSchedule,
    expected_w2_squared,
    predicted_variance,
    variance_of_w2_squared,
)
from .chain import (  # noqa: E402
    ChainConfig,
    ChainResult,
    EnsembleResult,
    GenerationRecord,
    count_modes,
    preset_config,
    run_chain,
    run_ensemble,
)
