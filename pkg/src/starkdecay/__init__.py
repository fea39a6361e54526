"""starkdecay: quantum Ito calculus for a two-level emitter whose decay is
suppressed by gauge-channel (Stark) coupling to the vacuum field.

The increment algebra (`ito_algebra`) carries the exact multiplication
table of the vacuum noise increments and closed-form Ito exponentials; the
reduced dynamics (`lindblad`) exposes the decay rate
gamma = 2 chi^2 (1 - cos eta)/eta^2, the decaying-level shift
delta = chi^2 (eta - sin eta)/eta^2, and closed-form/RK4 propagation; the
`collision` module validates everything against a repeated-interaction
simulator and a quantum-jump Monte Carlo unraveling; `physical_params`
maps physical emitter data to the dimensionless couplings (chi, eta).
"""

__version__ = "0.1.0"

from .collision import (
    CollisionConfig,
    ConvergenceStudy,
    McResult,
    convergence_study,
    mc_unravel,
    run_collisions,
    step_unitary,
)
from .ito_algebra import (
    ItoElement,
    QsdeCoefficients,
    coefficient_functions,
    emitter_generator,
    ito_exp,
    multiply,
)
from .lindblad import (
    VACUUM,
    LindbladModel,
    VacuumState,
    closed_form_evolution,
    decay_rate,
    density_matrix,
    derive_master_equation,
    lindblad_model,
    numerical_evolution,
    stark_shift,
    suppression_factor,
    validate_density_matrix,
)
from .physical_params import (
    LevelSystem,
    ResonanceSpec,
    map_one_quantum,
    map_two_quantum,
    pi_composite,
    pi_k,
    pi_two_photon,
)

__all__ = [
    "CollisionConfig",
    "ConvergenceStudy",
    "ItoElement",
    "LevelSystem",
    "LindbladModel",
    "McResult",
    "QsdeCoefficients",
    "ResonanceSpec",
    "VACUUM",
    "VacuumState",
    "__version__",
    "closed_form_evolution",
    "coefficient_functions",
    "convergence_study",
    "decay_rate",
    "density_matrix",
    "derive_master_equation",
    "emitter_generator",
    "ito_exp",
    "lindblad_model",
    "map_one_quantum",
    "map_two_quantum",
    "mc_unravel",
    "multiply",
    "numerical_evolution",
    "pi_composite",
    "pi_k",
    "pi_two_photon",
    "run_collisions",
    "stark_shift",
    "step_unitary",
    "suppression_factor",
    "validate_density_matrix",
]
