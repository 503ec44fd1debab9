"""Quadratic symmetry algebras of three superintegrable systems, with numerical oracles.

Subpackages cover the deformed-oscillator algebra engine, the concrete system
catalog, an exact operator verifier built on truncated Taylor jets, finite
difference spectral oracles, the R^8 -> R^5 x S^3 quadratic transformation,
and a CLI that emits JSON verification reports.
"""

__version__ = "0.1.0"

from .algebra import (
    FockRealization,
    PhiFamily,
    QuadraticAlgebraConstants,
    RepresentationCandidate,
    StructureFunction,
    build_fock_realization,
    find_representations,
    oscillator_realization,
    structure_function_general,
    verify_casimir,
    verify_commutation,
)
from .catalog import (
    Kepler5DParams,
    Oscillator8DParams,
    SpectrumRecord,
    YCMParams,
    kepler5d_constants,
    kepler5d_m_parameters,
    kepler5d_spectrum,
    osc8d_constants,
    osc8d_m_parameters,
    osc8d_spectrum,
    ycm_parabolic_s_parameters,
    ycm_spectrum_duality,
    ycm_spectrum_parabolic,
)
from .hurwitz import (
    DualityMap,
    Point5Fiber,
    Point8,
    duality_spectrum_check,
    euler_identity_residual,
    hurwitz_forward,
    map_parameters,
)
from .odecheck import (
    EigenResult,
    ParabolicChannelSpec,
    RadialOscillatorSpec,
    kummer,
    parabolic_eigensolve,
    radial_oscillator_eigensolve,
    solve_parabolic_pair,
)

__all__ = [
    "__version__",
    "QuadraticAlgebraConstants",
    "StructureFunction",
    "RepresentationCandidate",
    "FockRealization",
    "PhiFamily",
    "structure_function_general",
    "oscillator_realization",
    "find_representations",
    "build_fock_realization",
    "verify_commutation",
    "verify_casimir",
    "Kepler5DParams",
    "Oscillator8DParams",
    "YCMParams",
    "SpectrumRecord",
    "kepler5d_constants",
    "kepler5d_m_parameters",
    "kepler5d_spectrum",
    "osc8d_constants",
    "osc8d_m_parameters",
    "osc8d_spectrum",
    "ycm_parabolic_s_parameters",
    "ycm_spectrum_parabolic",
    "ycm_spectrum_duality",
    "Point8",
    "Point5Fiber",
    "DualityMap",
    "hurwitz_forward",
    "euler_identity_residual",
    "map_parameters",
    "duality_spectrum_check",
    "kummer",
    "ParabolicChannelSpec",
    "RadialOscillatorSpec",
    "EigenResult",
    "parabolic_eigensolve",
    "solve_parabolic_pair",
    "radial_oscillator_eigensolve",
]
