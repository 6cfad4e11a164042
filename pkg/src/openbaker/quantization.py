"""Quantized baker maps on the torus with antiperiodic boundary conditions.

Position eigenvalues sit at q_j = (j+1/2)/N, which keeps every grid point
strictly off the opening boundaries whenever N satisfies the divisibility
rule of the chosen family (N % 2^l == 0 for the dyadic family with opening
depth l, N % 3 == 0 for the triadic family). The effective Planck constant
is hbar = 1/(2*pi*N).

The closed dyadic map is U = G_N^dag . diag(G_{N/2}, G_{N/2}); the triadic
analogue uses three G_{N/3} blocks. Opening the map multiplies from the
right by a diagonal 0/1 projector, so escaping columns are exactly zero.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "TorusHilbert",
    "OpeningSpec",
    "QuantumMap",
    "fourier_kernel",
    "baker_closed",
    "opening_projector",
    "open_map",
    "baker_open",
    "parity_operator",
    "time_reversal_apply",
]


@dataclass(frozen=True)
class TorusHilbert:
    """N-dimensional Hilbert space of the torus, antiperiodic in q and p."""

    N: int
    hbar: float = field(init=False)

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 2:
            raise ConfigurationError(f"Hilbert dimension must be an integer >= 2, got {self.N!r}")
        object.__setattr__(self, "hbar", 1.0 / (2.0 * np.pi * self.N))
        # hbar * 2 pi N == 1 must hold exactly in floating point
        if self.hbar * 2.0 * np.pi * self.N != 1.0:
            if abs(self.hbar * 2.0 * np.pi * self.N - 1.0) > 1e-15:
                raise ConfigurationError(f"hbar inconsistency at N={self.N}")

    def positions(self) -> np.ndarray:
        """Grid of position eigenvalues q_j = (j+1/2)/N."""
        return (np.arange(self.N) + 0.5) / self.N


@dataclass(frozen=True)
class OpeningSpec:
    """Escape region in q: the outer strips of the dyadic family or the
    outer thirds of the triadic family.

    dyadic(l): escape on [0, 2^-l) and (1 - 2^-l, 1]
    triadic:   escape on [0, 1/3) and (2/3, 1]
    """

    family: str
    l: Optional[int] = None

    def __post_init__(self):
        if self.family == "dyadic":
            if self.l is None or self.l < 2:
                raise ConfigurationError(f"dyadic opening needs integer depth l >= 2, got {self.l!r}")
        elif self.family == "triadic":
            if self.l is not None:
                raise ConfigurationError("triadic opening takes no depth parameter")
        else:
            raise ConfigurationError(f"unknown opening family {self.family!r}")

    def check_dimension(self, N: int) -> None:
        if self.family == "dyadic":
            if N % (1 << self.l) != 0:
                raise ConfigurationError(
                    f"N={N} not divisible by 2^{self.l}={1 << self.l} (dyadic opening depth {self.l})")
        else:
            if N % 3 != 0:
                raise ConfigurationError(f"N={N} not divisible by 3 (triadic opening)")

    def keep_mask(self, N: int) -> np.ndarray:
        """Boolean mask of non-escaping positions q_j."""
        self.check_dimension(N)
        q = (np.arange(N) + 0.5) / N
        if self.family == "dyadic":
            edge = 2.0 ** -self.l
            return (q > edge) & (q < 1.0 - edge)
        return (q > 1.0 / 3.0) & (q < 2.0 / 3.0)

    def trace_pi(self, N: int) -> int:
        """tr(Pi), the number of kept positions."""
        return int(self.keep_mask(N).sum())

    def trace_pi_o(self, N: int) -> int:
        """tr(Pi_o), the number of escaping positions."""
        return N - self.trace_pi(N)


@dataclass(frozen=True)
class QuantumMap:
    """A quantized baker map: unitary when closed, a contraction when open."""

    hilbert: TorusHilbert
    matrix: np.ndarray
    kind: str                      # "closed" | "open"
    family: str                    # "dyadic" | "triadic"
    opening: Optional[OpeningSpec] = None

    @property
    def N(self) -> int:
        return self.hilbert.N


def fourier_kernel(N: int) -> np.ndarray:
    """Antiperiodic discrete Fourier kernel
    (G_N)_{j,k} = exp(-i 2 pi / N (j+1/2)(k+1/2)) / sqrt(N); unitary."""
    if N < 1:
        raise ConfigurationError(f"kernel size must be >= 1, got {N}")
    j = np.arange(N) + 0.5
    return np.exp(-2j * np.pi / N * np.outer(j, j)) / np.sqrt(N)


def baker_closed(hilbert: TorusHilbert, family: str) -> QuantumMap:
    """Closed (unitary) baker map of the requested family."""
    N = hilbert.N
    if family == "dyadic":
        if N % 2 != 0:
            raise ConfigurationError(f"dyadic map needs even N, got {N}")
        blocks, nb = 2, N // 2
    elif family == "triadic":
        if N % 3 != 0:
            raise ConfigurationError(f"triadic map needs N divisible by 3, got {N}")
        blocks, nb = 3, N // 3
    else:
        raise ConfigurationError(f"unknown family {family!r}")
    G = fourier_kernel(N)
    g = fourier_kernel(nb)
    D = np.zeros((N, N), dtype=complex)
    for b in range(blocks):
        D[b * nb:(b + 1) * nb, b * nb:(b + 1) * nb] = g
    return QuantumMap(hilbert=hilbert, matrix=G.conj().T @ D, kind="closed", family=family)


def opening_projector(hilbert: TorusHilbert, spec: OpeningSpec) -> np.ndarray:
    """Diagonal 0/1 matrix keeping the non-escaping positions."""
    mask = spec.keep_mask(hilbert.N)
    return np.diag(mask.astype(float))


def open_map(closed: QuantumMap, projector: np.ndarray) -> QuantumMap:
    """Open the map: right-multiplication by the projector zeroes the
    escaping columns exactly."""
    N = closed.N
    diag = np.diagonal(projector) if projector.ndim == 2 else projector
    if diag.shape != (N,):
        raise ConfigurationError(
            f"projector dimension {diag.shape} does not match map dimension {N}")
    mask = diag.astype(bool)
    matrix = closed.matrix * mask[None, :]
    return QuantumMap(hilbert=closed.hilbert, matrix=matrix, kind="open",
                      family=closed.family, opening=closed.opening)


def baker_open(hilbert: TorusHilbert, spec: OpeningSpec) -> QuantumMap:
    """Convenience constructor: closed map of spec.family, then opened."""
    spec.check_dimension(hilbert.N)
    closed = baker_closed(hilbert, spec.family)
    mask = spec.keep_mask(hilbert.N)
    matrix = closed.matrix * mask[None, :]
    return QuantumMap(hilbert=hilbert, matrix=matrix, kind="open",
                      family=spec.family, opening=spec)


def parity_operator(hilbert: TorusHilbert) -> np.ndarray:
    """Permutation R |j> = |N-1-j>, implementing q -> 1-q on the grid; R^2 = I."""
    N = hilbert.N
    R = np.zeros((N, N))
    R[np.arange(N), N - 1 - np.arange(N)] = 1.0
    return R


def time_reversal_apply(hilbert: TorusHilbert, psi: np.ndarray) -> np.ndarray:
    """Antiunitary T = K G applied to a state: conj(G_N psi)."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (hilbert.N,):
        raise ConfigurationError(
            f"state length {psi.shape} does not match Hilbert dimension {hilbert.N}")
    return np.conj(fourier_kernel(hilbert.N) @ psi)
