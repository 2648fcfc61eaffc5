"""Spin-pseudospin entanglement dynamics in the graphene-Rashba model."""

__version__ = "0.1.0"

from .averages import (  # noqa: E402
    AveragingSpec,
    EnsembleStats,
    ensemble_average,
    rectified_frequency,
    time_averaged_concurrence,
)
from .dynamics import (  # noqa: E402
    TimeGrid,
    effective_fields,
    evolve,
    integrate_schrodinger_oracle,
    make_propagator,
    trajectory,
)
from .entanglement import chsh_beta, concurrence, concurrence_oracle  # noqa: E402
from .model import (  # noqa: E402
    ModelParams,
    analytic_eigensystem,
    build_hamiltonian,
    kpoint_from_cartesian,
    numeric_eigensystem,
)
from .states import (  # noqa: E402
    BlochAngles,
    SpinorState,
    bloch_vectors,
    named_state,
    product_state,
    random_haar_state,
    random_separable_state,
)
