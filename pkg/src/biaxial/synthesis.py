"""Explicit optimal factor sequences alternating between two fixed axes.

The middle Euler angle of the target (or of a shifted target, for even
factor counts) is split into slabs of at most twice the axis gap; each slab
is realised by one m-n-m triple with angles in closed form.  Chaining the
triples and merging adjacent same-axis rotations yields sequences whose
length meets the closed-form minimum from :mod:`biaxial.counting`.

Factor lists are stored in product order: ``factors[0]`` is the leftmost
factor, i.e. the last one applied.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .counting import Analysis, AxisPair, analyze, ceil_snapped
from .core import (
    IDENTITY,
    Su2Element,
    compose,
    generalized_euler,
    inverse,
    negate,
    normalize_angle,
    quat_distance,
    rot,
)
from .errors import InfeasibleSlabError, InvalidSlabError

__all__ = [
    "AxisLabel",
    "Branch",
    "Factor",
    "SynthesisPlan",
    "Decomposition",
    "VerificationReport",
    "h_param",
    "solve_triple",
    "plan_odd",
    "decompose_odd",
    "decompose_even",
    "decompose_even_reversed",
    "decompose_min",
    "verify_decomposition",
    "replay_factors",
    "normalized_factors",
]


class AxisLabel(enum.Enum):
    M = "m"
    N = "n"

    @property
    def other(self) -> "AxisLabel":
        return AxisLabel.N if self is AxisLabel.M else AxisLabel.M


class Branch(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class Factor:
    """One rotation in a sequence: an axis tag and an angle in (-2*pi, 2*pi]."""

    label: AxisLabel
    angle: float


@dataclass(frozen=True)
class SynthesisPlan:
    """Slab schedule realising a middle angle as a chain of axis triples."""

    parity: str
    slabs: tuple[float, ...]
    t_params: tuple[float, ...]
    branches: tuple[Branch, ...]


class TripleSolution(NamedTuple):
    alpha: float
    gamma: float
    theta: float


@dataclass(frozen=True, eq=False)
class Decomposition:
    """An ordered factor product realising ``target`` about two axes.

    ``axis_m`` and ``axis_n`` are the vectors the factor labels refer to;
    replaying the factors left to right (last applied first) reproduces the
    target with exact quaternion sign up to ``residual``.  ``parity`` is
    stated in the governing (normalized) axis order; when the pair was
    swapped the caller-visible label order is reversed.
    """

    factors: tuple[Factor, ...]
    target: Su2Element
    axis_m: np.ndarray
    axis_n: np.ndarray
    pair: AxisPair
    parity: str
    residual: float
    plan: SynthesisPlan | None = None
    beta_prime: float | None = None

    @property
    def count(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class VerificationReport:
    residual: float
    alternates: bool
    angles_in_window: bool
    nonempty: bool
    ok: bool


def h_param(beta_tilde: float, delta: float, t: float,
            tol: Tolerances = DEFAULT_TOL) -> float:
    """Free-parameter family for the slab triple angles.

    Zero when the slab is strictly interior at a right-angle gap, the free
    value ``t`` at the fully degenerate corner, and
    ``arcsin(tan(beta_tilde/2) / tan(delta))`` otherwise.
    """
    if not (0.0 < delta <= 0.5 * math.pi + tol.angle):
        raise InvalidSlabError(f"axis gap {delta!r} outside (0, pi/2]")
    if beta_tilde < -tol.angle or beta_tilde > 2.0 * delta + 2.0 * tol.angle:
        raise InvalidSlabError(
            f"slab {beta_tilde!r} outside [0, 2*delta] for delta {delta!r}")
    if abs(delta - 0.5 * math.pi) <= tol.angle:
        if 0.5 * beta_tilde < delta - tol.angle:
            return 0.0
        return t
    ratio = math.tan(0.5 * beta_tilde) / math.tan(delta)
    return math.asin(min(1.0, max(-1.0, ratio)))


def solve_triple(beta_j: float, delta: float, t: float = 0.0,
                 branch: Branch = Branch.PLUS,
                 tol: Tolerances = DEFAULT_TOL) -> TripleSolution:
    """Angles (alpha_j, gamma_j, theta_j) realising one slab:

        rot(l, beta_j) = rot(m, -alpha_j) * rot(n, theta_j) * rot(m, -gamma_j)

    for orthogonal l, m and ``n = sin(delta) l x m + cos(delta) m``.  The two
    branches are distinct closed-form solution families.
    """
    if beta_j > 2.0 * delta + tol.angle:
        raise InfeasibleSlabError(
            f"slab {beta_j!r} exceeds twice the axis gap {delta!r}")
    if beta_j < -tol.angle:
        raise InfeasibleSlabError(f"slab {beta_j!r} is negative")
    h = h_param(min(beta_j, 2.0 * delta), delta, t, tol)
    s = 2.0 * math.asin(min(1.0, max(-1.0, math.sin(0.5 * beta_j) / math.sin(delta))))
    if branch is Branch.PLUS:
        return TripleSolution(h - 0.5 * math.pi, h + 0.5 * math.pi, s)
    return TripleSolution(-h + 0.5 * math.pi, -h + 1.5 * math.pi, 2.0 * math.pi - s)


def _slab_schedule(total: float, delta: float, k: int) -> tuple[float, ...]:
    """k slabs of 2*delta except a trailing remainder, clipped into (0, 2*delta].

    A remainder within 1e-12 of a full slab is snapped onto it: the slab
    angle solutions degrade like sqrt of the distance to the full-slab
    boundary, so a one-ulp shortfall would otherwise cost ~1e-8 of
    reconstruction accuracy while the snap costs at most 5e-13.
    """
    if k <= 0:
        return ()
    full = 2.0 * delta
    remainder = total - full * (k - 1)
    if remainder >= full or abs(remainder - full) <= 1e-12:
        remainder = full
    return (full,) * (k - 1) + (remainder,)


def plan_odd(beta: float, delta: float, tol: Tolerances = DEFAULT_TOL) -> SynthesisPlan:
    """Slab schedule for the odd construction; empty when beta vanishes.

    Uses ``k = ceil(beta/(2*delta))`` slabs, all but the last equal to
    ``2*delta``.
    """
    k = ceil_snapped(beta / (2.0 * delta), tol.ceil)
    slabs = _slab_schedule(beta, delta, k)
    return SynthesisPlan(parity="odd", slabs=slabs,
                         t_params=(0.0,) * k, branches=(Branch.PLUS,) * k)


def _plan_even(beta_prime: float, delta: float,
               tol: Tolerances = DEFAULT_TOL) -> tuple[SynthesisPlan, bool]:
    """Slab schedule for ``beta_prime + delta`` plus a merge flag.

    When the auxiliary angle reaches the gap, the first slab is pinned to
    ``2*delta`` with free parameter pi/2, which zeroes the leading m-angle so
    the two leading n-rotations merge into one (2k factors total).  Otherwise
    a single unmerged slab yields the four-factor fallback.
    """
    if beta_prime >= delta - tol.angle:
        k = ceil_snapped(beta_prime / (2.0 * delta) + 0.5, tol.ceil)
        if k <= 1:
            slabs: tuple[float, ...] = (2.0 * delta,)
            k = 1
        else:
            slabs = (2.0 * delta,) + _slab_schedule(
                beta_prime + delta - 2.0 * delta, delta, k - 1)
        t_params = (0.5 * math.pi,) + (0.0,) * (k - 1)
        return (SynthesisPlan(parity="even-mn", slabs=slabs, t_params=t_params,
                              branches=(Branch.PLUS,) * k), True)
    plan = SynthesisPlan(parity="even-mn", slabs=(beta_prime + delta,),
                         t_params=(0.0,), branches=(Branch.PLUS,))
    return plan, False


def _with_overrides(plan: SynthesisPlan, t_params: Sequence[float] | None,
                    branch: Branch | None) -> SynthesisPlan:
    if t_params is not None:
        padded = tuple(t_params)[: len(plan.slabs)]
        padded += plan.t_params[len(padded):]
        plan = replace(plan, t_params=padded)
    if branch is not None:
        plan = replace(plan, branches=(branch,) * len(plan.slabs))
    return plan


def _finish(factors: list[Factor], u: Su2Element, pair: AxisPair, parity: str,
            axis_m: np.ndarray, axis_n: np.ndarray, tol: Tolerances,
            plan: SynthesisPlan | None, beta_prime: float | None) -> Decomposition:
    factors = [Factor(f.label, normalize_angle(f.angle)) for f in factors]
    prod = replay_factors(factors, axis_m, axis_n, tol)
    residual = quat_distance(prod, u)
    if factors and quat_distance(negate(prod), u) < residual:
        # Recompose landed on the other lift; a 2*pi shift on one factor
        # flips the sign exactly.
        first = factors[0]
        factors[0] = Factor(first.label, normalize_angle(first.angle + 2.0 * math.pi))
        prod = replay_factors(factors, axis_m, axis_n, tol)
        residual = quat_distance(prod, u)
    return Decomposition(factors=tuple(factors), target=u, axis_m=axis_m,
                         axis_n=axis_n, pair=pair, parity=parity,
                         residual=residual, plan=plan, beta_prime=beta_prime)


def replay_factors(factors: Sequence[Factor], axis_m, axis_n,
                   tol: Tolerances = DEFAULT_TOL) -> Su2Element:
    """Product of the factors in list order (applied right to left)."""
    acc = IDENTITY
    for f in factors:
        axis = axis_m if f.label is AxisLabel.M else axis_n
        acc = compose(acc, rot(axis, f.angle, tol), tol)
    return acc


def decompose_odd(u: Su2Element, pair: AxisPair,
                  t_params: Sequence[float] | None = None,
                  branch: Branch | None = None,
                  tol: Tolerances = DEFAULT_TOL) -> Decomposition:
    """Odd-length sequence m, n, m, ..., m realising ``u`` about the pair.

    Length is ``2*ceil(beta/(2*delta)) + 1``; a vanishing middle angle gives
    the single bare m-rotation.
    """
    delta = pair.delta
    alpha, beta, gamma = generalized_euler(u, pair.frame(tol), tol)
    plan = _with_overrides(plan_odd(beta, delta, tol), t_params, branch)
    if not plan.slabs:
        return _finish([Factor(AxisLabel.M, alpha + gamma)], u, pair, "odd",
                       pair.m, pair.n, tol, plan, None)
    trips = [solve_triple(b, delta, t, br, tol)
             for b, t, br in zip(plan.slabs, plan.t_params, plan.branches)]
    factors = [Factor(AxisLabel.M, alpha - trips[0].alpha)]
    for j, trip in enumerate(trips):
        factors.append(Factor(AxisLabel.N, trip.theta))
        if j + 1 < len(trips):
            factors.append(Factor(AxisLabel.M, -trip.gamma - trips[j + 1].alpha))
    factors.append(Factor(AxisLabel.M, -trips[-1].gamma + gamma))
    return _finish(factors, u, pair, "odd", pair.m, pair.n, tol, plan, None)


def decompose_even(u: Su2Element, pair: AxisPair,
                   t_params: Sequence[float] | None = None,
                   branch: Branch | None = None,
                   tol: Tolerances = DEFAULT_TOL) -> Decomposition:
    """Even-length sequence n, m, ..., n, m realising ``u`` about the pair.

    Shifts the target by ``rot(l, -delta)`` to obtain the auxiliary triple
    (alpha', beta', gamma'); when ``beta'`` reaches the gap the leading
    m-angle is zeroed and the two leading n-rotations merge, giving
    ``2*ceil(beta'/(2*delta) + 1/2)`` factors, else four.  The first slab's
    free parameter is pinned to pi/2 (the merge needs it); ``t_params``
    overrides apply to the remaining slabs.
    """
    delta = pair.delta
    shifted = compose(rot(pair.l, -delta, tol), u, tol)
    ap, bp, gp = generalized_euler(shifted, pair.frame(tol), tol)
    plan, merged = _plan_even(bp, delta, tol)
    plan = _with_overrides(plan, t_params, branch)
    if merged:
        plan = replace(plan, t_params=(0.5 * math.pi,) + plan.t_params[1:])
    trips = [solve_triple(b, delta, t, br, tol)
             for b, t, br in zip(plan.slabs, plan.t_params, plan.branches)]
    if merged:
        factors = [Factor(AxisLabel.N, ap + trips[0].theta)]
        for j in range(1, len(trips)):
            factors.append(Factor(AxisLabel.M, -trips[j - 1].gamma - trips[j].alpha))
            factors.append(Factor(AxisLabel.N, trips[j].theta))
        factors.append(Factor(AxisLabel.M, -trips[-1].gamma + gp))
    else:
        trip = trips[0]
        factors = [
            Factor(AxisLabel.N, ap),
            Factor(AxisLabel.M, -trip.alpha),
            Factor(AxisLabel.N, trip.theta),
            Factor(AxisLabel.M, -trip.gamma + gp),
        ]
    return _finish(factors, u, pair, "even-mn", pair.m, pair.n, tol, plan, bp)


def decompose_even_reversed(u: Su2Element, pair: AxisPair,
                            t_params: Sequence[float] | None = None,
                            branch: Branch | None = None,
                            tol: Tolerances = DEFAULT_TOL) -> Decomposition:
    """Even-length sequence m, n, ..., m, n realising ``u``.

    Decomposes the inverse target, then reverses the list and negates every
    angle; the factor count becomes the even minimum for the opposite axis
    order.
    """
    inner = decompose_even(inverse(u), pair, t_params, branch, tol)
    factors = [Factor(f.label, -f.angle) for f in reversed(inner.factors)]
    return _finish(factors, u, pair, "even-nm", pair.m, pair.n, tol,
                   inner.plan, inner.beta_prime)


def _map_to_caller(factors: Sequence[Factor], analysis: Analysis) -> list[Factor]:
    """Relabel governing-frame factors for the caller's raw axes."""
    swapped = analysis.governing.swapped
    m_flipped = analysis.pair.m_flipped
    out = []
    for f in factors:
        label = f.label.other if swapped else f.label
        angle = f.angle
        if label is AxisLabel.M and m_flipped:
            # Rotation about -m by theta equals rotation about m by -theta.
            angle = -angle
        out.append(Factor(label, angle))
    return out


def decompose_min(u: Su2Element, m_raw, n_raw,
                  t_params: Sequence[float] | None = None,
                  branch: Branch | None = None,
                  trim: bool = False,
                  tol: Tolerances = DEFAULT_TOL) -> Decomposition:
    """Optimal factor sequence for ``u`` about the caller's raw axes.

    Dispatches on the parity chosen by the count formulas, then maps factor
    labels and angle signs back from the normalized governing axes to the
    axes as given.  With ``trim`` set, zero-angle factors at the ends are
    elided, which may undercut the formal count.
    """
    analysis = analyze(u, m_raw, n_raw, tol)
    parity = analysis.report.chosen_parity
    if parity == "odd":
        inner = decompose_odd(u, analysis.governing, t_params, branch, tol)
    elif parity == "even-mn":
        inner = decompose_even(u, analysis.governing, t_params, branch, tol)
    else:
        inner = decompose_even_reversed(u, analysis.governing, t_params, branch, tol)
    factors = _map_to_caller(inner.factors, analysis)
    if trim:
        while factors and abs(factors[0].angle) <= tol.angle:
            factors.pop(0)
        while factors and abs(factors[-1].angle) <= tol.angle:
            factors.pop()
    axis_m = np.asarray(m_raw, dtype=float)
    axis_n = np.asarray(n_raw, dtype=float)
    return _finish(factors, u, analysis.pair, parity, axis_m, axis_n, tol,
                   inner.plan, inner.beta_prime)


def normalized_factors(d: Decomposition, tol: Tolerances = DEFAULT_TOL) -> tuple[Factor, ...]:
    """Re-express factors relative to the normalized pair axes.

    A factor about a sign-flipped axis keeps its label with the angle
    negated, so the returned list refers to ``d.pair.m`` and ``d.pair.n``.
    """
    out = []
    for f in d.factors:
        axis = d.axis_m if f.label is AxisLabel.M else d.axis_n
        pair_axis = d.pair.m if f.label is AxisLabel.M else d.pair.n
        if float(np.dot(axis, pair_axis)) >= 0.0:
            out.append(f)
        else:
            out.append(Factor(f.label, -f.angle))
    return tuple(out)


def verify_decomposition(d: Decomposition, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Replay a decomposition and report structural diagnostics."""
    if d.factors:
        prod = replay_factors(d.factors, d.axis_m, d.axis_n, tol)
        residual = quat_distance(prod, d.target)
    else:
        residual = quat_distance(IDENTITY, d.target)
    alternates = all(a.label is not b.label
                     for a, b in zip(d.factors, d.factors[1:]))
    in_window = all(-2.0 * math.pi < f.angle <= 2.0 * math.pi + tol.angle
                    for f in d.factors)
    nonempty = len(d.factors) >= 1
    ok = alternates and in_window and nonempty and residual <= tol.recon
    return VerificationReport(residual=residual, alternates=alternates,
                              angles_in_window=in_window, nonempty=nonempty,
                              ok=ok)
