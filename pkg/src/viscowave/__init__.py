"""Wave propagation in viscoelastic media with completely monotone relaxation.

Modules
-------
kernels
    Relaxation kernels, material models and their transforms.
laplace_inversion
    Talbot, branch-cut and residue inverse Laplace transforms.
duality
    Creep compliance from a relaxation model and back.
dispersion
    Complex wavenumber, attenuation, phase velocity and regime classification.
wavefield
    Green's function synthesis by Bromwich-line quadrature.
"""

__version__ = "0.1.0"

from .dispersion import (
    Regime,
    RegimeReport,
    attenuation,
    c_infinity,
    classify_from_creep,
    classify_model,
    dispersion_curve,
    high_freq_exponent,
    phase_velocity,
    wavenumber,
)
from .duality import (
    CreepCurve,
    NewtonianEstimate,
    creep_from_model,
    duality_residual,
    limits_c0_cprime0,
    newtonian_from_creep,
    volterra_solve_creep,
)
from .errors import (
    DomainError,
    IllConditionedError,
    IndeterminateLimitError,
    InputError,
    IntegrationError,
    InvariantError,
    InversionError,
    ModelSchemaError,
    NumericalError,
    SingularMediumError,
    ViscoWaveError,
)
from .kernels import (
    CompositeKernel,
    MaterialModel,
    PowerLaw,
    PronySeries,
    StretchedExponential,
    ZeroKernel,
    cm_check,
    load_model,
    q_function,
)
from .laplace_inversion import TransformFunction, invert_auto, invert_branchcut, invert_residues, invert_talbot
from .wavefield import FieldSample, IntegrationControls, causality_check, green_point, seismogram, snapshot
