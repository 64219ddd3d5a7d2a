"""Single-excitation amplitude dynamics of the cavity pair.

One excitation is shared between the two atoms and the two multimode
fields.  The state is described by the amplitudes

    c1       atom 1 excited, atom 2 ground, both fields in vacuum
    c2       atom 2 excited, atom 1 ground, both fields in vacuum
    ca[mu]   one photon in mode mu of cavity a, atoms ground
    cb[nu]   one photon in mode nu of cavity b, atoms ground

and evolves under

    dc1/dt     =  sum_mu g[mu] * ca[mu]
    dca[mu]/dt = -i * delta[mu] * ca[mu] - g[mu] * c1

with the identical pair of equations for (c2, cb).  Couplings are real, so
no conjugates appear.  The cavity-a block never couples to the cavity-b
block; the two atoms are correlated only through the initial state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import ModeGrid


@dataclass
class SingleExcState:
    """Amplitudes of the single-excitation manifold."""

    c1: complex
    c2: complex
    ca: np.ndarray
    cb: np.ndarray

    @property
    def n(self) -> int:
        return len(self.ca)

    def to_vector(self) -> np.ndarray:
        """Pack as a flat complex vector [c1, c2, ca..., cb...]."""
        n = self.n
        vec = np.empty(2 + 2 * n, dtype=complex)
        vec[0] = self.c1
        vec[1] = self.c2
        vec[2:2 + n] = self.ca
        vec[2 + n:] = self.cb
        return vec

    @classmethod
    def from_vector(cls, vec: np.ndarray, n: int) -> "SingleExcState":
        if len(vec) != 2 + 2 * n:
            raise ValueError(f"vector length {len(vec)} does not match n={n}")
        return cls(c1=vec[0], c2=vec[1],
                   ca=vec[2:2 + n].copy(), cb=vec[2 + n:].copy())


def init_atoms_entangled(theta: float, grid: ModeGrid) -> SingleExcState:
    """Atoms entangled, fields in vacuum: c1 = cos(theta), c2 = sin(theta)."""
    _check_theta(theta)
    return SingleExcState(
        c1=complex(math.cos(theta)),
        c2=complex(math.sin(theta)),
        ca=np.zeros(grid.n, dtype=complex),
        cb=np.zeros(grid.n, dtype=complex),
    )


def init_fields_entangled(theta: float, grid: ModeGrid) -> SingleExcState:
    """Cavities entangled through their resonant modes, atoms in the ground state.

    The photon occupies the central (zero-detuning) mode of each cavity:
    ca[central] = cos(theta), cb[central] = sin(theta).
    """
    _check_theta(theta)
    ca = np.zeros(grid.n, dtype=complex)
    cb = np.zeros(grid.n, dtype=complex)
    ca[grid.central_index] = math.cos(theta)
    cb[grid.central_index] = math.sin(theta)
    return SingleExcState(c1=0j, c2=0j, ca=ca, cb=cb)


def flat_derivative(grid: ModeGrid) -> Callable[[np.ndarray], np.ndarray]:
    """Right-hand side of the amplitude equations over packed vectors."""
    n = grid.n
    delta = grid.detunings
    g = grid.couplings

    def deriv(y: np.ndarray) -> np.ndarray:
        ca = y[2:2 + n]
        cb = y[2 + n:]
        out = np.empty_like(y)
        out[0] = g @ ca
        out[1] = g @ cb
        out[2:2 + n] = -1j * delta * ca - g * y[0]
        out[2 + n:] = -1j * delta * cb - g * y[1]
        return out

    return deriv


def deriv_single(state: SingleExcState, grid: ModeGrid) -> SingleExcState:
    """Time derivative of a single-excitation state."""
    if state.n != grid.n or len(state.cb) != grid.n:
        raise ValueError(
            f"mode count mismatch: state has {state.n}/{len(state.cb)} modes, "
            f"grid has {grid.n}"
        )
    dvec = flat_derivative(grid)(state.to_vector())
    return SingleExcState.from_vector(dvec, grid.n)


def observables_single(state: SingleExcState) -> dict:
    """Populations of the atoms and fields, plus the total norm."""
    pop1 = abs(state.c1) ** 2
    pop2 = abs(state.c2) ** 2
    pop_a = float(np.sum(np.abs(state.ca) ** 2))
    pop_b = float(np.sum(np.abs(state.cb) ** 2))
    return {
        "pop1": pop1,
        "pop2": pop2,
        "pop_cav_a": pop_a,
        "pop_cav_b": pop_b,
        "norm": pop1 + pop2 + pop_a + pop_b,
    }


def _check_theta(theta: float) -> None:
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta!r}")
