"""Coherent states on the antiperiodic torus and phase-space fields.

The coherent state |q0,p0> is the periodized circular Gaussian

    <q_j|q0,p0> = C sum_{m=-4}^{4} (-1)^m
                  exp(-pi N (q_j+m-q0)^2 + 2 pi i N p0 (q_j+m-q0)),

with C fixed by unit normalization. The alternating image phases keep the
state antiperiodic, matching the half-integer phases of the map kernel;
image terms fall off like exp(-pi N m^2), so the truncation at |m| <= 4
is exact to double precision for every admissible N.

Phase-space fields are sampled on cell-centered grids: cell (a, b) sits
at q = (a+1/2)/Nq, p = (b+1/2)/Np. Three fields are provided: Husimi
functions |<q,p|psi>|^2, the complex resonance representation
h_i = <q,p|psiR_i><psiL_i|q,p>/s_i, and the direct coherent-state
autocorrelation <q,p|M^n|q,p>.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, NearDefectiveResonanceError
from .quantization import QuantumMap, TorusHilbert
from .spectral import Resonance, ResonanceSet

__all__ = [
    "CoherentState",
    "PhaseGrid",
    "coherent_state",
    "husimi",
    "h_distribution",
    "autocorrelation",
    "spectral_autocorrelation",
    "overlap_grid",
    "autocorrelation_at_points",
    "spectral_sum_at_points",
    "h_at_points",
]

IMAGE_TRUNCATION = 4
OVERLAP_FLOOR = 1e-10
DEFAULT_GRID = (256, 256)


@dataclass(frozen=True)
class CoherentState:
    center: Tuple[float, float]
    vector: np.ndarray


@dataclass(frozen=True)
class PhaseGrid:
    """Cell-centered field over the torus; values[a, b] belongs to
    q = (a+1/2)/Nq, p = (b+1/2)/Np."""

    Nq: int
    Np: int
    values: np.ndarray
    kind: str                    # husimiR | husimiL | hDistribution | autocorrelation
    meta: dict

    def q_centers(self) -> np.ndarray:
        return (np.arange(self.Nq) + 0.5) / self.Nq

    def p_centers(self) -> np.ndarray:
        return (np.arange(self.Np) + 0.5) / self.Np


def _check_grid(grid: Tuple[int, int]) -> Tuple[int, int]:
    nq, npp = int(grid[0]), int(grid[1])
    if nq < 1 or npp < 1:
        raise ConfigurationError(f"grid dimensions must be positive, got {grid}")
    return nq, npp


def _coherent_bank(N: int, q0: float, p_values: np.ndarray) -> np.ndarray:
    """Unit-norm coherent vectors |q0, p> for one q0 and many p, stacked
    as columns of an (N, len(p_values)) array."""
    qj = (np.arange(N) + 0.5) / N
    x = qj - q0
    bank = np.exp(2j * np.pi * N * np.outer(x, p_values))
    envelope = np.zeros((N, len(p_values)), dtype=complex)
    for m in range(-IMAGE_TRUNCATION, IMAGE_TRUNCATION + 1):
        envelope += np.outer((-1) ** m * np.exp(-np.pi * N * (x + m) ** 2),
                             np.exp(2j * np.pi * N * m * p_values))
    bank *= envelope
    return bank / np.linalg.norm(bank, axis=0)[None, :]


def coherent_state(hilbert: TorusHilbert, q0: float, p0: float) -> CoherentState:
    """Normalized torus coherent state centered at (q0, p0) in [0,1)^2."""
    if not (0.0 <= q0 < 1.0 and 0.0 <= p0 < 1.0):
        raise ConfigurationError(f"coherent-state center ({q0}, {p0}) outside [0,1)^2")
    vec = _coherent_bank(hilbert.N, q0, np.array([p0]))[:, 0]
    return CoherentState(center=(q0, p0), vector=vec)


def _coherent_points(N: int, qs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """Coherent vectors for an arbitrary list of centers, as columns."""
    out = np.empty((N, len(qs)), dtype=complex)
    for i, (q0, p0) in enumerate(zip(qs, ps)):
        out[:, i] = _coherent_bank(N, q0, np.array([p0]))[:, 0]
    return out


def overlap_grid(hilbert: TorusHilbert, states: np.ndarray,
                 grid: Tuple[int, int] = DEFAULT_GRID) -> np.ndarray:
    """<q,p|state_k> for every grid cell; states are columns of an (N, k)
    array and the result has shape (k, Nq, Np)."""
    nq, npp = _check_grid(grid)
    N = hilbert.N
    states = np.atleast_2d(states.T).T if states.ndim == 1 else states
    p_cent = (np.arange(npp) + 0.5) / npp
    out = np.empty((states.shape[1], nq, npp), dtype=complex)
    for a in range(nq):
        bank = _coherent_bank(N, (a + 0.5) / nq, p_cent)
        out[:, a, :] = (bank.conj().T @ states).T
    return out


def husimi(hilbert: TorusHilbert, psi: np.ndarray,
           grid: Tuple[int, int] = DEFAULT_GRID, kind: str = "husimiR") -> PhaseGrid:
    """H(q,p) = |<q,p|psi>|^2 on the cell-centered grid."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (hilbert.N,):
        raise ConfigurationError(
            f"state length {psi.shape} does not match Hilbert dimension {hilbert.N}")
    ov = overlap_grid(hilbert, psi[:, None], grid)[0]
    nq, npp = _check_grid(grid)
    return PhaseGrid(Nq=nq, Np=npp, values=np.abs(ov) ** 2, kind=kind,
                     meta={"N": hilbert.N})


def h_distribution(r: Resonance, hilbert: TorusHilbert,
                   grid: Tuple[int, int] = DEFAULT_GRID) -> PhaseGrid:
    """Complex field h_i(q,p) = <q,p|psiR_i> <psiL_i|q,p> / s_i.

    Refuses resonances whose overlap is numerically zero: the division
    would amplify noise beyond any useful level.
    """
    if abs(r.overlap) <= OVERLAP_FLOOR:
        raise NearDefectiveResonanceError(
            f"resonance {r.index} has |s| = {abs(r.overlap):.3e} <= {OVERLAP_FLOOR:.0e}; "
            "its phase-space representation is numerically undefined")
    ov = overlap_grid(hilbert, np.stack([r.psiR, r.psiL], axis=1), grid)
    values = ov[0] * np.conj(ov[1]) / r.overlap
    nq, npp = _check_grid(grid)
    return PhaseGrid(Nq=nq, Np=npp, values=values, kind="hDistribution",
                     meta={"N": hilbert.N, "index": r.index, "lambda": r.lam,
                           "near_degenerate": r.near_degenerate})


def autocorrelation(qmap: QuantumMap, n: int,
                    grid: Tuple[int, int] = DEFAULT_GRID) -> PhaseGrid:
    """Direct autocorrelation <q,p|M^n|q,p> (no eigendecomposition)."""
    if n < 1:
        raise ConfigurationError(f"iteration count must be >= 1, got {n}")
    nq, npp = _check_grid(grid)
    N = qmap.N
    Mn = np.linalg.matrix_power(qmap.matrix, n)
    p_cent = (np.arange(npp) + 0.5) / npp
    values = np.empty((nq, npp), dtype=complex)
    for a in range(nq):
        bank = _coherent_bank(N, (a + 0.5) / nq, p_cent)
        values[a, :] = np.einsum("jk,jk->k", bank.conj(), Mn @ bank)
    return PhaseGrid(Nq=nq, Np=npp, values=values, kind="autocorrelation",
                     meta={"N": N, "n": n, "kind": qmap.kind})


def spectral_autocorrelation(rset: ResonanceSet, hilbert: TorusHilbert, n: int,
                             grid: Tuple[int, int] = DEFAULT_GRID) -> PhaseGrid:
    """Spectral side of the autocorrelation identity: sum_i lambda_i^n h_i.
    Null modes contribute exactly zero for n >= 1 and are simply absent."""
    if n < 1:
        raise ConfigurationError(f"iteration count must be >= 1, got {n}")
    nq, npp = _check_grid(grid)
    lam = rset.lambdas()
    s = rset.overlaps()
    ovR = overlap_grid(hilbert, rset.V, grid)
    ovL = overlap_grid(hilbert, rset.W, grid)
    weights = lam ** n / s
    values = np.einsum("i,iab,iab->ab", weights, ovR, np.conj(ovL))
    return PhaseGrid(Nq=nq, Np=npp, values=values, kind="autocorrelation",
                     meta={"N": hilbert.N, "n": n, "side": "spectral"})


def autocorrelation_at_points(qmap: QuantumMap, points: Sequence[Tuple[float, float]],
                              n: int) -> np.ndarray:
    """<q,p|M^n|q,p> at arbitrary phase-space points."""
    if n < 1:
        raise ConfigurationError(f"iteration count must be >= 1, got {n}")
    qs = np.array([q for q, _ in points])
    ps = np.array([p for _, p in points])
    bank = _coherent_points(qmap.N, qs, ps)
    Mn = np.linalg.matrix_power(qmap.matrix, n)
    return np.einsum("jk,jk->k", bank.conj(), Mn @ bank)


def h_at_points(rset: ResonanceSet, hilbert: TorusHilbert,
                points: Sequence[Tuple[float, float]]) -> np.ndarray:
    """h_i(q,p) for every retained resonance at every point, shape (npts, k)."""
    qs = np.array([q for q, _ in points])
    ps = np.array([p for _, p in points])
    bank = _coherent_points(hilbert.N, qs, ps)
    ovR = bank.conj().T @ rset.V          # (npts, k) entries <q,p|psiR_i>
    ovL = bank.conj().T @ rset.W
    return ovR * np.conj(ovL) / rset.overlaps()[None, :]


def spectral_sum_at_points(rset: ResonanceSet, hilbert: TorusHilbert,
                           points: Sequence[Tuple[float, float]], n: int) -> np.ndarray:
    """sum_i lambda_i^n h_i(q,p) at arbitrary points."""
    if n < 1:
        raise ConfigurationError(f"iteration count must be >= 1, got {n}")
    h = h_at_points(rset, hilbert, points)
    return h @ (rset.lambdas() ** n)
