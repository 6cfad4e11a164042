"""Resonance spectra of open (and closed) baker maps.

The open map has exactly tr(Pi_o) structurally zero columns, so its
spectrum is computed on the compression to the kept position subspace:
with K the kept indices and Z the zeroed ones, eigenpairs of A = M[K,K]
extend to the full space by V[Z] = M[Z,K] V[K] / lambda for lambda != 0,
while every left eigenvector with lambda != 0 vanishes identically on Z.

Left eigenvectors come from the same LAPACK decomposition as the right
ones (scipy.linalg.eig with left=True), which pairs them with the right
vectors through one Schur form and keeps the biorthogonality matrix
diagonal to machine precision even when the right-eigenvector matrix is
badly conditioned. The triadic compression is a real matrix, and is
diagonalized in real arithmetic so that its spectrum is closed under
complex conjugation exactly.
"""

import functools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from .errors import ConfigurationError, NumericalFailureError
from .quantization import (OpeningSpec, QuantumMap, TorusHilbert, baker_closed,
                           baker_open, fourier_kernel, time_reversal_apply)

__all__ = [
    "Resonance",
    "ResonanceSet",
    "WeylFit",
    "resonances",
    "resonance_set",
    "decay_rate",
    "null_space_dim",
    "tau_measure",
    "weyl_count",
    "weyl_fit",
]

EPS_NULL_DEFAULT = 1e-8
NEAR_DEGENERATE_GAP = 1e-10
PARITY_TOL = 1e-6


@dataclass(frozen=True)
class Resonance:
    """One eigenmode of the (possibly open) map.

    psiR and psiL are unit-norm; overlap is s_i = <psiL_i|psiR_i> without
    further rescaling, so the spectral decomposition of the map reads
    sum_i lambda_i |psiR_i><psiL_i| / s_i.
    """

    index: int
    lam: complex
    modulus: float
    gamma: float
    psiR: np.ndarray
    psiL: np.ndarray
    overlap: complex
    tau: float
    parity: str                  # "even" | "odd" | "mixed"
    near_degenerate: bool = False


@dataclass(frozen=True)
class ResonanceSet:
    """All retained resonances of one map, sorted by descending modulus
    (ties broken by ascending phase angle in [0, 2pi))."""

    resonances: List[Resonance]
    nullDim: int
    vCondition: float
    source: dict
    V: np.ndarray = field(repr=False)      # right eigenvectors, one per column
    W: np.ndarray = field(repr=False)      # left eigenvectors, one per column

    def __len__(self) -> int:
        return len(self.resonances)

    def __getitem__(self, i: int) -> Resonance:
        return self.resonances[i]

    def lambdas(self) -> np.ndarray:
        return np.array([r.lam for r in self.resonances])

    def moduli(self) -> np.ndarray:
        return np.array([r.modulus for r in self.resonances])

    def overlaps(self) -> np.ndarray:
        return np.array([r.overlap for r in self.resonances])

    def taus(self) -> np.ndarray:
        return np.array([r.tau for r in self.resonances])


@dataclass(frozen=True)
class WeylFit:
    """Power-law fit of resonance counts against Hilbert dimension."""

    points: List[Tuple[int, int]]
    exponent: float
    threshold: float

    @property
    def dimensionEstimate(self) -> float:
        return self.exponent + 1.0


def resonances(qmap: QuantumMap, eps_null: float = EPS_NULL_DEFAULT,
               condition_limit: Optional[float] = None) -> ResonanceSet:
    """Complete eigendecomposition of a quantum map.

    Modes with |lambda| < eps_null are counted in nullDim and excluded
    from the resonance list; the structurally zero columns of an open map
    contribute to nullDim without entering the eigensolver at all.

    vCondition is the 2-norm condition number of the right-eigenvector
    matrix of the kept-subspace compression, reported as a diagnostic.
    If condition_limit is given, exceeding it raises NumericalFailureError
    (near-defective spectrum); by default no limit is enforced because the
    deep spectrum of large open maps is genuinely ill-conditioned while
    the long-lived resonances remain accurate.
    """
    if eps_null <= 0:
        raise ConfigurationError(f"eps_null must be positive, got {eps_null}")
    M = qmap.matrix
    N = qmap.N
    keep = ~np.all(M == 0, axis=0)           # structurally zero columns escape
    K = np.where(keep)[0]
    Z = np.where(~keep)[0]
    A = M[np.ix_(K, K)]
    C = M[np.ix_(Z, K)] if len(Z) else np.zeros((0, len(K)), dtype=complex)
    if np.abs(A.imag).max() < 1e-12:
        A = np.ascontiguousarray(A.real)     # real matrix: exact conjugate pairing
    try:
        lam, vl, vr = sla.eig(A, left=True, right=True)
    except sla.LinAlgError as exc:           # pragma: no cover - solver breakdown
        raise NumericalFailureError(f"eigensolver did not converge: {exc}") from exc
    order = np.lexsort((np.mod(np.angle(lam), 2.0 * np.pi), -np.abs(lam)))
    lam, vl, vr = lam[order], vl[:, order], vr[:, order]

    vcondition = float(np.real(np.linalg.cond(vr)))
    if condition_limit is not None and not vcondition < condition_limit:
        raise NumericalFailureError(
            f"near-defective spectrum: right-eigenvector condition {vcondition:.3e} "
            f"exceeds limit {condition_limit:.1e}")

    small = np.abs(lam) < eps_null
    null_dim = int(len(Z) + small.sum())
    lam, vl, vr = lam[~small], vl[:, ~small], vr[:, ~small]
    k = len(lam)

    V = np.zeros((N, k), dtype=complex)
    W = np.zeros((N, k), dtype=complex)
    V[K] = vr
    if len(Z):
        V[Z] = (C @ vr) / lam[None, :]
    V /= np.linalg.norm(V, axis=0)[None, :]
    W[K] = vl / np.linalg.norm(vl, axis=0)[None, :]
    s = np.einsum("ji,ji->i", W.conj(), V)

    G = fourier_kernel(N)
    tau = np.abs(np.einsum("ji,ji->i", V, G @ W))
    tau = np.minimum(tau, 1.0)

    # parity: R reverses the position index, so R psi is psi[::-1]
    RV = V[::-1, :]
    err_even = np.abs(RV - V).max(axis=0)
    err_odd = np.abs(RV + V).max(axis=0)
    parity = np.where(err_even < PARITY_TOL, "even",
                      np.where(err_odd < PARITY_TOL, "odd", "mixed"))

    if k > 1:
        dist = np.abs(lam[:, None] - lam[None, :])
        np.fill_diagonal(dist, np.inf)
        near = dist.min(axis=1) < NEAR_DEGENERATE_GAP
    else:
        near = np.zeros(k, dtype=bool)

    modulus = np.abs(lam)
    res = [Resonance(index=i, lam=complex(lam[i]), modulus=float(modulus[i]),
                     gamma=float(-2.0 * np.log(modulus[i])), psiR=V[:, i],
                     psiL=W[:, i], overlap=complex(s[i]), tau=float(tau[i]),
                     parity=str(parity[i]), near_degenerate=bool(near[i]))
           for i in range(k)]
    source = {
        "family": qmap.family,
        "kind": qmap.kind,
        "N": N,
        "l": qmap.opening.l if qmap.opening is not None else None,
        "eps_null": eps_null,
    }
    return ResonanceSet(resonances=res, nullDim=null_dim, vCondition=vcondition,
                        source=source, V=V, W=W)


@functools.lru_cache(maxsize=32)
def resonance_set(family: str, N: int, l: Optional[int] = None,
                  closed: bool = False,
                  eps_null: float = EPS_NULL_DEFAULT) -> ResonanceSet:
    """Cached decomposition keyed by map parameters.

    closed=True builds the unitary map (l must be omitted); otherwise the
    open one, which for the dyadic family requires the opening depth l and
    for the triadic family forbids it.
    """
    hilbert = TorusHilbert(N)
    if closed:
        if l is not None:
            raise ConfigurationError("closed maps take no opening depth")
        qmap = baker_closed(hilbert, family)
    else:
        if family == "dyadic" and l is None:
            raise ConfigurationError("dyadic open map needs an opening depth l")
        spec = OpeningSpec(family=family, l=l if family == "dyadic" else None)
        qmap = baker_open(hilbert, spec)
    return resonances(qmap, eps_null)


def decay_rate(lam: complex) -> float:
    """Gamma = -ln |lambda|^2 for 0 < |lambda| <= 1."""
    mod = abs(lam)
    if mod == 0.0:
        raise ConfigurationError("decay rate undefined for lambda = 0 (null mode)")
    if mod > 1.0 + 1e-10:
        raise ConfigurationError(f"|lambda| = {mod} exceeds 1; not a resonance of a contraction")
    return -2.0 * np.log(min(mod, 1.0))


def null_space_dim(rset: ResonanceSet) -> int:
    """Number of numerically-zero modes; >= tr(Pi_o), equality generic."""
    return rset.nullDim


def tau_measure(r: Resonance, hilbert: TorusHilbert) -> float:
    """Time-reversal weight tau = |<psiR | T psiL>| with T = K G, in [0,1]."""
    val = abs(np.vdot(r.psiR, time_reversal_apply(hilbert, r.psiL)))
    return float(min(val, 1.0))


def weyl_count(rset: ResonanceSet, nu_c: float) -> int:
    """Number of resonances with modulus >= nu_c."""
    if not 0.0 < nu_c < 1.0:
        raise ConfigurationError(f"counting threshold must lie in (0,1), got {nu_c}")
    return int((rset.moduli() >= nu_c).sum())


def weyl_fit(counts: Sequence[Tuple[int, int]], nu_c: float) -> WeylFit:
    """Least-squares slope of log(count) against log(N)."""
    pts = [(int(n), int(c)) for n, c in counts]
    if len({n for n, _ in pts}) < 3:
        raise ConfigurationError("need at least 3 distinct N values for a fit")
    if any(c <= 0 for _, c in pts):
        raise ConfigurationError("zero resonance count in fit input (threshold too high)")
    logn = np.log([n for n, _ in pts])
    logc = np.log([c for _, c in pts])
    exponent = float(np.polyfit(logn, logc, 1)[0])
    if not np.isfinite(exponent):
        raise NumericalFailureError("Weyl fit produced a non-finite exponent")
    return WeylFit(points=pts, exponent=exponent, threshold=float(nu_c))
