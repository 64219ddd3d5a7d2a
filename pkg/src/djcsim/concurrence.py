"""Two-atom reduced density matrices and concurrence.

The reduced state of the atom pair lives in the product basis

    |1> = |e1 e2>,  |2> = |e1 g2>,  |3> = |g1 e2>,  |4> = |g1 g2>

and, for the states produced by this package, always has X form (nonzero
entries on the diagonal and one anti-diagonal coherence only).  Concurrence
is computed two ways: the general eigenvalue construction

    C = max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)}

with l1 >= ... >= l4 the eigenvalues of rho * (sy x sy) rho* (sy x sy), and
the closed forms the X structure admits.  Both must agree; the tests hold
them to 1e-10 of each other along every trajectory.
"""

from __future__ import annotations

import numpy as np

from .double import DoubleExcState
from .single import SingleExcState

# (sigma_y x sigma_y), the spin-flip matrix of the Wootters construction.
_SYSY = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)

# Validation tolerances: hermiticity and positivity are structural and hold
# to rounding; the trace follows the state norm, whose budget over a full
# integration window is 1e-6.
_HERMITIAN_TOL = 1e-12
_TRACE_TOL = 1e-6
_EIGEN_FLOOR = -1e-10


def rho_atoms_single(state: SingleExcState) -> np.ndarray:
    """Reduced 4x4 density matrix of the atoms for a single-excitation state.

    rho[1,1] = |c1|^2, rho[2,2] = |c2|^2, rho[1,2] = conj(c1) c2, and all
    field population collects in rho[3,3].
    """
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = abs(state.c1) ** 2
    rho[2, 2] = abs(state.c2) ** 2
    rho[1, 2] = np.conj(state.c1) * state.c2
    rho[2, 1] = np.conj(rho[1, 2])
    rho[3, 3] = np.sum(np.abs(state.ca) ** 2) + np.sum(np.abs(state.cb) ** 2)
    return rho


def rho_atoms_double(state: DoubleExcState) -> np.ndarray:
    """Reduced 4x4 density matrix of the atoms for a double-excitation state.

    The coherence rho[0,3] = d11 conj(d00) between the doubly excited and
    ground components is what carries the entanglement; the one-photon
    sectors contribute only diagonal weight.
    """
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = abs(state.d11) ** 2
    rho[1, 1] = np.sum(np.abs(state.d2) ** 2)
    rho[2, 2] = np.sum(np.abs(state.d3) ** 2)
    rho[3, 3] = abs(state.d00) ** 2 + np.sum(np.abs(state.d4) ** 2)
    rho[0, 3] = state.d11 * np.conj(state.d00)
    rho[3, 0] = np.conj(rho[0, 3])
    return rho


def concurrence_wootters(rho: np.ndarray) -> float:
    """Concurrence of an arbitrary two-qubit density matrix.

    The eigenvalues of rho * (sy x sy) rho* (sy x sy) equal the squared
    singular values of sqrt(rho) (sy x sy) sqrt(rho)*, so the computation
    goes through a Hermitian square root and an SVD rather than a
    non-symmetric eigensolver.

    Raises
    ------
    ValueError
        If rho is not Hermitian / unit-trace / positive semidefinite within
        the module tolerances.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > _HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > _TRACE_TOL:
        raise ValueError(
            f"density matrix trace {np.trace(rho).real!r} is not 1 within tolerance"
        )
    evals, vecs = np.linalg.eigh(rho)
    if evals[0] < _EIGEN_FLOOR:
        raise ValueError(
            f"density matrix has negative eigenvalue {evals[0]!r} beyond tolerance"
        )
    sqrt_rho = (vecs * np.sqrt(np.clip(evals, 0.0, None))) @ vecs.conj().T
    a = sqrt_rho @ _SYSY @ sqrt_rho.conj()
    s = np.linalg.svd(a, compute_uv=False)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def concurrence_single_closed(state: SingleExcState) -> float:
    """Closed-form concurrence of a single-excitation state, 2 |c1 conj(c2)|."""
    return 2.0 * abs(state.c1) * abs(state.c2)


def concurrence_double_closed(state: DoubleExcState) -> float:
    """Closed-form concurrence of a double-excitation state.

    2 * max{0, |d11||d00| - sqrt(sum|d2|^2 * sum|d3|^2)}.  The subtracted
    photon term is what produces sudden death: the coherence can be
    outweighed while the amplitudes are all still nonzero.
    """
    coherence = abs(state.d11) * abs(state.d00)
    photon = np.sqrt(np.sum(np.abs(state.d2) ** 2) * np.sum(np.abs(state.d3) ** 2))
    return 2.0 * max(0.0, float(coherence - photon))
