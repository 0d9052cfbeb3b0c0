"""The interval map behind the algorithm and its invariant density.

The shift-and-subtract gcd step, read on ratios x = p/q, is the piecewise
map T(x) = 1/(2^a x) - 1 on (0, 1], where the branch index a is the unique
integer with 2^-(a+1) < x <= 2^-a (dyadic boundary points take the deeper
branch, matching the maximal-shift rule exactly).  Orbits of rationals are
finite and their branch sequences reproduce the greedy digit strings of the
integer algorithm; that conjugacy is pinned by tests.

The invariant density of T is psi(x) = 1 / (log(4/3) (x+1)(x+2)).  The
weighted transfer operator acting on sampled functions is provided here as
``transfer_apply`` (the spectral module owns the grid and interpolation).

``birkhoff_estimates`` measures the per-step growth rates along orbits of
high random rationals: shift rate, entropy, dyadic growth of the continuant
gcd, and the valuation rate of the running gcd from the trace table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np
from scipy.special import roots_legendre

from .algorithm import _exponent_run
from .dyadic import dyadic_valuation
from .errors import ConsistencyError, DomainError
from .parallel import derive_seed, map_chunks
from .spectral import CollocationGrid

LOG43 = math.log(4.0 / 3.0)
LN2 = math.log(2.0)

_BIRKHOFF_CHUNK = 128


def psi(x):
    """Invariant density 1/(log(4/3) (x+1)(x+2)); accepts floats or arrays."""
    return 1.0 / (LOG43 * (x + 1.0) * (x + 2.0))


def branch_of(x) -> int:
    """Branch index of x in (0, 1]: the unique a with 2^-(a+1) < x <= 2^-a."""
    x = Fraction(x)
    if not 0 < x <= 1:
        raise DomainError(f"branch index needs 0 < x <= 1, got {x}")
    return (x.denominator // x.numerator).bit_length() - 1


def t_apply(x):
    """One step of the map: returns (a, T_a(x)) with T_a(x) = 1/(2^a x) - 1."""
    x = Fraction(x)
    a = branch_of(x)
    num, den = x.numerator, x.denominator
    shifted = num << a
    return a, Fraction(den - shifted, shifted)


@dataclass(frozen=True)
class OrbitStep:
    x: Fraction
    branch: int
    dyadic_log: float   # 2 log |x|_2, the dyadic observable along the orbit


@dataclass(frozen=True)
class OrbitSample:
    steps: tuple[OrbitStep, ...]
    terminated: bool

    @property
    def length(self) -> int:
        return len(self.steps)

    def branches(self) -> tuple[int, ...]:
        return tuple(s.branch for s in self.steps)


def orbit(x0, max_steps: int = 10_000) -> OrbitSample:
    """Iterate the map from x0 until it hits 0 (rationals always do)."""
    x = Fraction(x0)
    if not 0 < x <= 1:
        raise DomainError(f"orbit needs 0 < x0 <= 1, got {x}")
    steps = []
    for _ in range(max_steps):
        a = branch_of(x)
        dlog = 2.0 * (dyadic_valuation(x.denominator)
                      - dyadic_valuation(x.numerator)) * LN2
        steps.append(OrbitStep(x, a, dlog))
        num, den = x.numerator, x.denominator
        shifted = num << a
        x = Fraction(den - shifted, shifted)
        if x == 0:
            return OrbitSample(tuple(steps), True)
    return OrbitSample(tuple(steps), False)


def transfer_apply(f, t: float, v: float, tail_tol: float = 1e-10,
                   grid: CollocationGrid | None = None) -> np.ndarray:
    """Apply the weighted transfer operator to a sampled function.

    ``f`` is either a callable on [0, 1] or an array of samples at the grid
    nodes.  Values between nodes are obtained by the grid's barycentric
    interpolant.  The branch sum over a is truncated when the geometric tail
    bound sup|f| 2^((a+1)(v-t)) / (1 - 2^(v-t)) drops below ``tail_tol``.
    """
    if t - v <= 0:
        raise DomainError(f"branch sum diverges for t - v <= 0 (t={t}, v={v})")
    if tail_tol <= 0:
        raise DomainError("tail_tol must be positive")
    if grid is None:
        grid = CollocationGrid(64)
    samples = np.asarray(f(grid.nodes) if callable(f) else f, dtype=float)
    if samples.shape != (grid.n,):
        raise DomainError(f"expected {grid.n} samples, got {samples.shape}")
    sup_f = float(np.max(np.abs(samples)))
    if sup_f == 0.0:
        return np.zeros(grid.n)
    ratio = 2.0 ** (v - t)
    a_max = max(0, math.ceil(
        math.log2(sup_f / (tail_tol * (1.0 - ratio))) / (t - v)
    ))
    x = grid.nodes
    out = np.zeros(grid.n)
    for a in range(a_max + 1):
        pts = (0.5 ** a) / (1.0 + x)
        out += (2.0 ** (a * (v - t))) * grid.interpolate(samples, pts)
    out *= (1.0 + x) ** (-2.0 * t)
    return out


def quad_gl(f, a: float, b: float, panels: int = 64, order: int = 8) -> float:
    """Composite Gauss-Legendre quadrature used for density checks."""
    nodes, weights = roots_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = (lo + hi) / 2.0
        half = (hi - lo) / 2.0
        total += half * float(weights @ f(mid + half * nodes))
    return total


@dataclass(frozen=True)
class BirkhoffReport:
    """Per-step growth rates averaged over random high orbits.

    mean_shift_per_step    S/K, theory log(3/2)/log(4/3) = 1.40942
    entropy_estimate       2 log q / K, theory the entropy constant 1.33973
    e2_estimate            2 log gcd(P,Q) / K, theory B+D = 1.26071
    valuation_rate         val_2(terminal) / K, the running-gcd probe; equals
                           (S - val_2 gcd(P,Q))/K per trajectory, so the
                           conjectured dyadic rate makes it approach 1/2
    """

    samples: int
    bits: int
    seed: int
    mean_shift_per_step: float
    entropy_estimate: float
    e2_estimate: float
    valuation_rate: float
    std_errors: dict[str, float]

    def estimates(self) -> dict[str, float]:
        return {
            "shift_rate": self.mean_shift_per_step,
            "entropy": self.entropy_estimate,
            "e2": self.e2_estimate,
            "valuation_rate": self.valuation_rate,
        }

    def to_json_dict(self) -> dict:
        return {
            "samples": self.samples,
            "bits": self.bits,
            "seed": self.seed,
            "estimates": self.estimates(),
            "std_errors": dict(self.std_errors),
        }


def _birkhoff_chunk(args):
    import random

    bits, seed, label, chunk_index, count = args
    rng = random.Random(derive_seed(seed, label, chunk_index))
    lo, hi = 1 << (bits - 1), 1 << bits
    sums = np.zeros(4)
    sumsq = np.zeros(4)
    for _ in range(count):
        q = rng.randrange(lo, hi)
        p = rng.randrange(1, q)
        while gcd(p, q) != 1:
            p = rng.randrange(1, q)
        exps, terminal = _exponent_run(p, q, canonical=True)
        k = len(exps)
        s = sum(exps)
        vt = dyadic_valuation(terminal)
        if terminal != (1 << vt):
            raise ConsistencyError("coprime input left an odd factor")
        # terminal modulus times continuant gcd is 2^S, so val(g) = S - vt
        vg = s - vt
        vals = (
            s / k,
            2.0 * math.log(q) / k,
            2.0 * vg * LN2 / k,
            vt / k,
        )
        for j, val in enumerate(vals):
            sums[j] += val
            sumsq[j] += val * val
    return count, sums, sumsq


def birkhoff_estimates(bits: int, samples: int, seed: int,
                       threads: int = 1) -> BirkhoffReport:
    """Estimate per-step growth rates from ``samples`` random coprime pairs
    with a ``bits``-bit denominator.  Deterministic in ``seed`` regardless of
    ``threads`` (fixed chunking, ordered merge).
    """
    if bits < 16:
        raise DomainError(f"need bits >= 16 for asymptotic rates, got {bits}")
    if samples < 2:
        raise DomainError("need at least 2 samples")
    chunks = []
    done = 0
    idx = 0
    while done < samples:
        count = min(_BIRKHOFF_CHUNK, samples - done)
        chunks.append((bits, seed, "birkhoff", idx, count))
        done += count
        idx += 1
    parts = map_chunks(_birkhoff_chunk, chunks, threads)
    n = sum(p[0] for p in parts)
    sums = np.sum([p[1] for p in parts], axis=0)
    sumsq = np.sum([p[2] for p in parts], axis=0)
    means = sums / n
    var = np.maximum(sumsq / n - means ** 2, 0.0) * (n / (n - 1))
    ses = np.sqrt(var / n)
    keys = ("shift_rate", "entropy", "e2", "valuation_rate")
    return BirkhoffReport(
        samples=n,
        bits=bits,
        seed=seed,
        mean_shift_per_step=float(means[0]),
        entropy_estimate=float(means[1]),
        e2_estimate=float(means[2]),
        valuation_rate=float(means[3]),
        std_errors={k: float(se) for k, se in zip(keys, ses)},
    )
