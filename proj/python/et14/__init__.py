"""Arbitrary-order closure of the 14-moment extended-thermodynamics system.

Structured values (multiplier states, moments, potentials, reports) are plain
dicts with the same schema as the ``et14`` command-line tool's JSON output.
"""

from ._core import (
    AccuracyError,
    DecayError,
    DomainError,
    Error,
    FamilyError,
    GeneratingFamily,
    ParityError,
    TruncationError,
    custom_family,
    eval_potentials,
    family,
    h_pqr,
    hat_multipliers,
    k00,
    k_pq,
    kinetic_kpq,
    lab_moments_from_rest,
    lab_potentials,
    ladder_residual,
    moments,
    phi_pqr,
    reduce_to_13,
    run_cli,
    verify,
)

__version__ = "0.1.0"


def equilibrium_state(lambda_=0.0, lambda_ll=1.0, frame="hatted"):
    """Isotropic state with lambda_ij = lambda_ll / 3 * delta_ij."""
    d = lambda_ll / 3.0
    return {
        "frame": frame,
        "lambda": lambda_,
        "lambda_ij": [[d, 0.0, 0.0], [0.0, d, 0.0], [0.0, 0.0, d]],
    }
