"""Classical baker dynamics with escape, pruned symbolic dynamics, and
repeller geometry.

The dyadic map is (q,p) -> (2q mod 1, (p + floor(2q))/2) with escape from
the outer q-strips of width 2^-l; forbidding those strips prunes every
symbol sequence containing 0^l or 1^l. The triadic map expands q by 3 and
keeps only the middle third, leaving the single trapped point (1/2, 1/2).
Escape is tested before the stretch, mirroring the operator ordering of
the quantum open map.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError, NumericalFailureError

__all__ = [
    "ClassicalPoint",
    "SymbolicSystem",
    "PeriodicOrbit",
    "RepellerApprox",
    "EscapeEstimate",
    "classical_step",
    "transition_matrix",
    "count_allowed_words",
    "periodic_orbits",
    "finite_time_repeller",
    "escape_rate_mc",
    "box_dimension",
]

Number = Union[float, Fraction]

MC_CHUNK = 1 << 20
BOOTSTRAP_RESAMPLES = 32


@dataclass(frozen=True)
class ClassicalPoint:
    q: Number
    p: Number


@dataclass(frozen=True)
class SymbolicSystem:
    """Binary subshift with runs of length >= l forbidden.

    States are the 2^(l-1) windows of l-1 symbols; transition[w', w] = 1
    when w' extends w by one symbol without completing a forbidden run.
    """

    runLimit: int
    transition: sp.csr_matrix = field(repr=False)
    leadingEigenvalue: float
    entropy: float
    alphabet: Tuple[int, int] = (0, 1)

    @property
    def states(self) -> int:
        return self.transition.shape[0]


@dataclass(frozen=True)
class PeriodicOrbit:
    """Primitive periodic orbit given by a cyclic itinerary; points carry
    exact rational coordinates q = 0.(itinerary), p = 0.(reversed past)."""

    itinerary: str
    points: List[ClassicalPoint]

    @property
    def period(self) -> int:
        return len(self.itinerary)


@dataclass(frozen=True)
class RepellerApprox:
    """Finite-time outer cover of the trapped set: a union of rectangles
    [q_lo, q_hi] x [p_lo, p_hi], symmetric under (q,p) -> (1-q, 1-p)."""

    tBack: int
    tFwd: int
    family: str
    l: Optional[int]
    rectangles: List[Tuple[float, float, float, float]]
    areaFraction: float


@dataclass(frozen=True)
class EscapeEstimate:
    gamma: float
    stderr: float
    samples: int
    steps: int
    survivors: np.ndarray = field(repr=False)


def _escapes(q: Number, family: str, l: Optional[int]) -> bool:
    # Fraction bounds compare exactly against both float and Fraction inputs
    if family == "dyadic":
        edge = Fraction(1, 1 << l)
    else:
        edge = Fraction(1, 3)
    return q < edge or q > 1 - edge


def classical_step(point: ClassicalPoint, family: str,
                   l: Optional[int] = None) -> Tuple[ClassicalPoint, bool]:
    """One iteration of the open classical map; escape is checked before
    the stretch. Exact when fed Fraction coordinates."""
    if family == "dyadic":
        if l is None or l < 2:
            raise ConfigurationError(f"dyadic step needs opening depth l >= 2, got {l!r}")
        base = 2
    elif family == "triadic":
        if l is not None:
            raise ConfigurationError("triadic step takes no depth parameter")
        base = 3
    else:
        raise ConfigurationError(f"unknown family {family!r}")
    q, p = point.q, point.p
    if not (0 <= q < 1 and 0 <= p < 1):
        q, p = q % 1, p % 1
    if _escapes(q, family, l):
        return point, True
    d = int(base * q)
    return ClassicalPoint(q=base * q - d, p=(p + d) / base), False


def _closed_step_exact(q: Fraction, p: Fraction, base: int = 2) -> Tuple[Fraction, Fraction]:
    d = int(base * q)
    return (base * q - d) % 1, ((p + d) / base) % 1


def count_allowed_words(n: int, l: int) -> int:
    """Number of binary words of length n containing neither 0^l nor 1^l.

    Run-length dynamic programming; serves as the exact oracle for the
    subshift growth rate and for escape statistics.
    """
    if l < 2:
        raise ConfigurationError(f"run limit must be >= 2, got {l}")
    if n <= 0:
        return 1
    if n < l:
        return 2 ** n
    # counts[r] = words ending in a run of length r+1 (same for both symbols)
    counts = [0] * (l - 1)
    counts[0] = 2
    for _ in range(n - 1):
        total = sum(counts)
        new = [0] * (l - 1)
        new[0] = total          # switch symbol, run restarts
        for r in range(1, l - 1):
            new[r] = counts[r - 1]
        counts = new
    return sum(counts)


def transition_matrix(l: int) -> SymbolicSystem:
    """Subshift transition matrix over (l-1)-symbol windows and its
    topological entropy ln(leading eigenvalue).

    The leading eigenvalue comes from power iteration applied to T + I
    (the shift removes the period-2 obstruction of the l=2 matrix without
    moving the Perron vector), iterated to a relative tolerance of 1e-12.
    """
    if not 2 <= l <= 16:
        raise ConfigurationError(f"run limit must satisfy 2 <= l <= 16, got {l}")
    m = 1 << (l - 1)
    rows, cols = [], []
    for w in range(m):
        for b in (0, 1):
            full = (w << 1) | b
            if full == 0 or full == (1 << l) - 1:
                continue                      # completed a forbidden run
            rows.append(full & (m - 1))
            cols.append(w)
    T = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(m, m))

    v = np.full(m, 1.0 / math.sqrt(m))
    mu = 0.0
    for _ in range(100000):
        y = T @ v + v
        mu = float(v @ y)
        # the residual cannot pass through zero the way successive Rayleigh
        # quotients can when the subdominant eigenvalues are complex, so it
        # is a safe convergence measure
        residual = float(np.linalg.norm(y - mu * v))
        y_norm = np.linalg.norm(y)
        if y_norm == 0.0:
            raise NumericalFailureError("power iteration collapsed to zero")
        v = y / y_norm
        if residual <= 1e-12 * abs(mu):
            break
    else:
        raise NumericalFailureError("power iteration did not converge")
    leading = mu - 1.0
    if abs(leading - 1.0) < 1e-12:
        leading = 1.0                # growth rate 1 up to iteration tolerance
    # entropies below the iteration tolerance are numerically zero (and the
    # only subshift in range with zero entropy, l=2, is exactly zero)
    entropy = math.log(leading) if leading > 1.0 else 0.0
    if entropy < 1e-12:
        entropy = 0.0
    return SymbolicSystem(runLimit=l, transition=T,
                          leadingEigenvalue=leading, entropy=entropy)


def _max_cyclic_run(bits: str) -> int:
    """Longest run of equal symbols in the infinite periodic extension."""
    if bits.count(bits[0]) == len(bits):
        return math.inf
    doubled = bits + bits
    best = run = 1
    for a, b in zip(doubled, doubled[1:]):
        run = run + 1 if a == b else 1
        best = max(best, run)
    return best


def periodic_orbits(n: int, l: Optional[int] = None) -> List[PeriodicOrbit]:
    """Primitive periodic orbits whose period divides n, one per necklace
    of length n; with a run limit l only itineraries whose cyclic extension
    avoids 0^l and 1^l survive. l=None enumerates the closed map."""
    if not 1 <= n <= 20:
        raise ConfigurationError(f"period must satisfy 1 <= n <= 20, got {n}")
    if l is not None and l < 2:
        raise ConfigurationError(f"run limit must be >= 2, got {l}")
    seen = set()
    orbits = []
    for w in range(1 << n):
        bits = format(w, f"0{n}b")
        rotations = [bits[k:] + bits[:k] for k in range(n)]
        if bits != min(rotations):
            continue                                   # not the necklace representative
        if l is not None and _max_cyclic_run(bits) >= l:
            continue
        period = next(d for d in range(1, n + 1)
                      if n % d == 0 and bits == bits[d:] + bits[:d])
        word = bits[:period]
        if word in seen:
            continue
        seen.add(word)
        denom = (1 << period) - 1
        points = []
        for k in range(period):
            rot = word[k:] + word[:k]
            past = "".join(word[(k - m) % period] for m in range(1, period + 1))
            q = Fraction(int(rot, 2), denom) % 1
            p = Fraction(int(past, 2), denom) % 1
            points.append(ClassicalPoint(q=q, p=p))
        orbits.append(PeriodicOrbit(itinerary=word, points=points))
    return orbits


def _allowed_words(n: int, l: int) -> List[int]:
    """All length-n words avoiding runs of length l, as integers."""
    if n == 0:
        return [0]
    out = []

    def grow(word: int, length: int, last: int, run: int):
        if length == n:
            out.append(word)
            return
        for b in (0, 1):
            r = run + 1 if b == last else 1
            if r >= l:
                continue
            grow((word << 1) | b, length + 1, b, r)

    grow(0, 1, 0, 1)
    grow(1, 1, 1, 1)
    return sorted(out)


def finite_time_repeller(tBack: int, tFwd: int, l: Optional[int] = None,
                         family: str = "dyadic") -> RepellerApprox:
    """Outer cover of the set trapped from -tBack to +tFwd.

    Dyadic: one rectangle per allowed word of length tBack + tFwd (the
    past/future junction is checked across the seam), with the future
    bits fixing the q-interval and the reversed past bits the p-interval.
    Triadic: the single middle-third rectangle at each depth.
    """
    if tBack < 0 or tFwd < 0:
        raise ConfigurationError(f"time depths must be >= 0, got ({tBack}, {tFwd})")
    if family == "triadic":
        if l is not None:
            raise ConfigurationError("triadic repeller takes no depth parameter")
        qw, pw = 3.0 ** -tFwd, 3.0 ** -tBack
        rect = ((1.0 - qw) / 2.0, (1.0 + qw) / 2.0, (1.0 - pw) / 2.0, (1.0 + pw) / 2.0)
        return RepellerApprox(tBack=tBack, tFwd=tFwd, family=family, l=None,
                              rectangles=[rect], areaFraction=qw * pw)
    if family != "dyadic":
        raise ConfigurationError(f"unknown family {family!r}")
    if l is None or l < 2:
        raise ConfigurationError(f"dyadic repeller needs run limit l >= 2, got {l!r}")
    total = tBack + tFwd
    qw, pw = 2.0 ** -tFwd, 2.0 ** -tBack
    rects = []
    for word in _allowed_words(total, l):
        future = word & ((1 << tFwd) - 1)
        past = word >> tFwd
        # p expansion reads the past backwards: s_{-1} is its last symbol
        p_bits = 0
        for m in range(tBack):
            p_bits = (p_bits << 1) | ((past >> m) & 1)
        q_lo = future * qw
        p_lo = p_bits * pw
        rects.append((q_lo, q_lo + qw, p_lo, p_lo + pw))
    area = len(rects) * qw * pw
    return RepellerApprox(tBack=tBack, tFwd=tFwd, family=family, l=l,
                          rectangles=rects, areaFraction=area)


def escape_rate_mc(family: str, samples: int, steps: int, seed: int,
                   l: Optional[int] = None) -> EscapeEstimate:
    """Monte Carlo escape rate of a uniform ensemble.

    Counter-based generator (Philox) with one stream per fixed-size chunk
    of particles, so results are reproducible bit for bit for a given
    seed. The rate is the least-squares slope of ln(survivor fraction)
    over the linear regime t in [ceil(steps/2), steps]; the standard
    error comes from a multinomial bootstrap over escape times.
    """
    if samples < 10 ** 4:
        raise ConfigurationError(f"need at least 1e4 samples, got {samples}")
    if steps < 10:
        raise ConfigurationError(f"need at least 10 steps, got {steps}")
    if family == "dyadic":
        if l is None or l < 2:
            raise ConfigurationError(f"dyadic ensemble needs opening depth l >= 2, got {l!r}")
        base, edge = 2, 2.0 ** -l
    elif family == "triadic":
        if l is not None:
            raise ConfigurationError("triadic ensemble takes no depth parameter")
        base, edge = 3, 1.0 / 3.0
    else:
        raise ConfigurationError(f"unknown family {family!r}")

    hist = np.zeros(steps + 1, dtype=np.int64)      # escape step; last bin = survived
    done = 0
    chunk_index = 0
    while done < samples:
        n = min(MC_CHUNK, samples - done)
        rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, chunk_index]))
        q = rng.random(n)
        alive = np.ones(n, dtype=bool)
        for t in range(steps):
            esc = alive & ((q < edge) | (q > 1.0 - edge))
            hist[t] += int(esc.sum())
            alive &= ~esc
            q *= base
            q -= np.floor(q)
        hist[steps] += int(alive.sum())
        done += n
        chunk_index += 1

    survivors = samples - np.cumsum(hist[:steps])   # after step t, t = 1..steps
    t_lo = math.ceil(steps / 2)
    ts = np.arange(1, steps + 1)
    window = ts >= t_lo
    if survivors[window].min() <= 0:
        raise NumericalFailureError(
            "no survivors inside the fit window; increase samples for this opening")

    def slope_of(surv):
        return -float(np.polyfit(ts[window], np.log(surv[window] / samples), 1)[0])

    gamma = slope_of(survivors)
    boot_rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 1, 0]))
    probs = hist / samples
    slopes = []
    for _ in range(BOOTSTRAP_RESAMPLES):
        re_hist = boot_rng.multinomial(samples, probs)
        re_surv = samples - np.cumsum(re_hist[:steps])
        if re_surv[window].min() <= 0:
            continue
        slopes.append(slope_of(re_surv))
    stderr = float(np.std(slopes)) if len(slopes) >= 2 else float("nan")
    return EscapeEstimate(gamma=gamma, stderr=stderr, samples=samples,
                          steps=steps, survivors=survivors)


def box_dimension(rep: RepellerApprox, scales: Sequence[int]) -> float:
    """Box-counting slope of the rectangle union over dyadic box sizes
    2^-k for k in scales."""
    scales = sorted(int(k) for k in scales)
    if len(scales) < 3:
        raise ConfigurationError(f"need at least 3 scales, got {len(scales)}")
    if rep.family == "dyadic" and scales[-1] > min(rep.tBack, rep.tFwd):
        raise ConfigurationError(
            f"scale 2^-{scales[-1]} finer than the repeller depth "
            f"({rep.tBack}, {rep.tFwd}); deepen the cover first")
    counts = []
    for k in scales:
        s = 1 << k
        boxes = set()
        for q_lo, q_hi, p_lo, p_hi in rep.rectangles:
            qa = math.floor(q_lo * s)
            qb = min(math.ceil(q_hi * s) - 1, s - 1)
            pa = math.floor(p_lo * s)
            pb = min(math.ceil(p_hi * s) - 1, s - 1)
            for i in range(qa, qb + 1):
                for j in range(pa, pb + 1):
                    boxes.add((i, j))
        counts.append(len(boxes))
    log_eps_inv = np.array(scales, dtype=float) * math.log(2.0)
    return float(np.polyfit(log_eps_inv, np.log(counts), 1)[0])
