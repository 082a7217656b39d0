#!/usr/bin/env python
#
# Copyright (C) 2019 Elexa Consumer Product, Inc.
#
# This file is part of the Rational Herglotz Pencil toolkit
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""Scalar rational Herglotz functions and the sign conditions under which
reaction-diffusion linearizations reduce to Herglotz pencils.
"""

import dataclasses
import logging
import math
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import InputError, PoleError
from .util.bracket import monotone_bracket

# Define logger
logger = logging.getLogger(__name__)

###################
## Configuration ##
###################

SAMPLE_COUNT = 500
SAMPLE_IM_RANGE = (1e-3, 10.0)
SAMPLE_RE_WIDTH = 10.0

# Relative size below which a discriminant or residue counts as vanishing
DEGENERACY_TOL = 1e-12


class Verdict(str, Enum):
    """Outcome of a closed-form Herglotz check."""
    HERGLOTZ = 'herglotz'
    NOT_HERGLOTZ = 'not_herglotz'
    INDETERMINATE = 'indeterminate'


@dataclasses.dataclass(frozen=True)
class RationalHerglotz:
    """f(λ) = B + Cλ + Σ Aᵢ/(αᵢ − λ) with C ≥ 0, Aᵢ > 0 and ascending αᵢ.

    Attributes:
        C (float): Linear coefficient
        B (float): Constant term
        poles (tuple): Pairs (αᵢ, Aᵢ)
    """

    C: float
    B: float
    poles: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        poles = tuple((float(alpha), float(residue)) for alpha, residue in self.poles)
        object.__setattr__(self, 'poles', poles)

        if not (math.isfinite(self.C) and math.isfinite(self.B)):
            raise InputError('Herglotz coefficients must be finite')
        if self.C < 0.0:
            raise InputError('Linear coefficient C must be non-negative, got %r' % self.C)
        if self.C == 0.0 and not poles:
            raise InputError('A Herglotz function needs C > 0 or at least one pole')

        for alpha, residue in poles:
            if not (math.isfinite(alpha) and residue > 0.0 and math.isfinite(residue)):
                raise InputError('Pole (%r, %r) needs a finite location and a positive residue' % (alpha, residue))

        locations = [alpha for alpha, _ in poles]
        if any(b <= a for a, b in zip(locations, locations[1:])):
            raise InputError('Pole locations must be strictly increasing: %s' % locations)

    @property
    def locations(self) -> Tuple[float, ...]:
        return tuple(alpha for alpha, _ in self.poles)

    def __call__(self, lam):
        return eval_herglotz(self, lam)

    def interval(self, j: int) -> Tuple[float, float]:
        """Endpoints of I_j = (α_j, α_{j+1}) with α₀ = -inf, α_{N+1} = +inf."""
        edges = (-math.inf,) + self.locations + (math.inf,)
        if not 0 <= j < len(edges) - 1:
            raise InputError('Interval index %d outside 0..%d' % (j, len(edges) - 2))
        return edges[j], edges[j + 1]


def eval_herglotz(f: RationalHerglotz, lam: complex) -> complex:
    """Evaluates f at a real or complex λ.

    Raises:
        PoleError: λ coincides with a pole
    """
    value = f.B + f.C * lam

    for alpha, residue in f.poles:
        if lam == alpha:
            raise PoleError('Evaluation at pole %r' % alpha)
        value = value + residue / (alpha - lam)

    return value


def derivative_real(f: RationalHerglotz, lam: float) -> float:
    """f'(λ) = C + Σ Aᵢ/(αᵢ − λ)², positive off the poles."""
    slope = f.C

    for alpha, residue in f.poles:
        if lam == alpha:
            raise PoleError('Derivative at pole %r' % alpha)
        slope += residue / (alpha - lam) ** 2

    return slope


def solve(f: RationalHerglotz, target: float, j: int, xtol: float = 1e-14) -> float:
    """Finds the unique λ in I_j with f(λ) = target.

    f increases from -inf to +inf across each bounded interval, so the root
    exists and is unique there; on the unbounded ends it may not exist.

    Raises:
        BracketError: No root in the requested unbounded interval
    """
    lower, upper = f.interval(j)
    locations = f.locations
    spread = max(1.0, locations[-1] - locations[0]) if locations else 1.0
    guard = 1e-14 * max(1.0, max((abs(a) for a in locations), default=1.0))

    def residual(lam):
        return eval_herglotz(f, lam) - target

    lo, hi = monotone_bracket(residual, lower, upper, increasing=True, scale=spread, guard=guard)

    if lo == hi:
        return lo

    return scipy.optimize.brentq(residual, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


def real_zeros(f: RationalHerglotz) -> Tuple[float, ...]:
    """Returns every real zero of f, ascending.

    Between consecutive poles there is exactly one; the outer intervals carry
    one when f changes sign there.
    """
    intervals = len(f.poles) + 1
    zeros = []

    for j in range(intervals):
        lower, upper = f.interval(j)

        # Limits at infinity decide whether the outer intervals contain a zero
        if math.isinf(lower) and f.C == 0.0 and f.B >= 0.0:
            continue
        if math.isinf(upper) and f.C == 0.0 and f.B <= 0.0:
            continue

        zeros.append(solve(f, 0.0, j))

    return tuple(zeros)


#####################
## Sampling oracle ##
#####################

def is_herglotz_sampled(evaluator: Callable[[complex], complex], sample_count: int = SAMPLE_COUNT,
                        structure: Sequence[complex] = (), seed: int = 0) -> bool:
    """Checks Im f(λ) > 0 on random points of the upper half-plane.

    Half of the points follow a wide bracket around `structure` (Re λ within
    ten spreads of it, Im λ log-uniform on [1e-3, 10]); the other half
    cluster around the structure points so narrow violations next to poles
    are not missed.

    Args:
        evaluator (callable): λ ↦ f(λ)
        sample_count (int, optional): Defaults to 500. Number of samples.
        structure (sequence, optional): Poles, roots or other points of
            interest. Complex entries are reflected into the upper half-plane.
        seed (int, optional): Defaults to 0. Seed for the sample generator.

    Returns:
        bool: True iff every sample has Im f(λ) > 0
    """
    rng = np.random.default_rng(seed)
    points = np.asarray(list(structure), dtype=complex)

    if points.size:
        low, high = float(points.real.min()), float(points.real.max())
    else:
        low, high = 0.0, 0.0

    spread = max(1.0, high - low)
    clustered = sample_count // 2 if points.size else 0
    wide = sample_count - clustered

    im_low, im_high = np.log10(SAMPLE_IM_RANGE[0]), np.log10(SAMPLE_IM_RANGE[1])

    samples = (rng.uniform(low - SAMPLE_RE_WIDTH * spread, high + SAMPLE_RE_WIDTH * spread, wide)
               + 1j * 10.0 ** rng.uniform(im_low, im_high, wide))

    if clustered:
        centers = rng.choice(points, clustered)
        radius = spread * 10.0 ** rng.uniform(-4.0, 0.0, clustered)
        angle = rng.uniform(0.0, np.pi, clustered)
        cluster = (centers.real + radius * np.cos(angle)
                   + 1j * (np.abs(centers.imag) + radius * np.sin(angle) + 1e-12))
        samples = np.concatenate([samples, cluster])

    for lam in samples:
        if not np.imag(evaluator(complex(lam))) > 0.0:
            logger.debug('Upper half-plane violation at %r', lam)
            return False

    return True


###############################
## Reaction-diffusion checks ##
###############################

@dataclasses.dataclass(frozen=True)
class JacobianSample:
    """Partials of the kinetics at a steady state.

    The three-species entries (anything touching w) stay None for two
    species.
    """

    f_u: float
    f_v: float
    g_u: float
    g_v: float
    f_w: Optional[float] = None
    g_w: Optional[float] = None
    h_u: Optional[float] = None
    h_v: Optional[float] = None
    h_w: Optional[float] = None

    THREE_SPECIES = ('f_w', 'g_w', 'h_u', 'h_v', 'h_w')

    def __post_init__(self):
        present = [getattr(self, name) is not None for name in JacobianSample.THREE_SPECIES]
        if any(present) and not all(present):
            raise InputError('Three-species sample needs all of %s' % ', '.join(JacobianSample.THREE_SPECIES))

        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if value is not None and not math.isfinite(value):
                raise InputError('Partial %s is not finite' % field.name)

    @property
    def species(self) -> int:
        return 2 if self.h_w is None else 3

    @classmethod
    def from_mapping(cls, values: dict) -> 'JacobianSample':
        names = {field.name for field in dataclasses.fields(cls)}
        unknown = set(values) - names
        if unknown:
            raise InputError('Unknown partials: %s' % ', '.join(sorted(unknown)))
        missing = {'f_u', 'f_v', 'g_u', 'g_v'} - set(values)
        if missing:
            raise InputError('Missing partials: %s' % ', '.join(sorted(missing)))
        return cls(**{name: float(value) for name, value in values.items()})


def check_two_species(j: JacobianSample) -> bool:
    """Sign condition f_v·g_u ≥ 0 making the two-species pencil Herglotz."""
    return j.f_v * j.g_u >= 0.0


def derive_quadratic_form(j: JacobianSample) -> Tuple[float, float, float, float]:
    """Coefficients (α, β, γ, δ) of λ − (αλ + β)/(λ² + γλ + δ), obtained by
    eliminating q and s from the three-species linearization.

    Raises:
        InputError: Two-species sample
    """
    if j.species != 3:
        raise InputError('Quadratic form needs a three-species Jacobian')

    gamma = -(j.g_v + j.h_w)
    delta = j.g_v * j.h_w - j.g_w * j.h_v
    alpha = j.f_v * j.g_u + j.f_w * j.h_u
    beta = j.f_v * (j.h_u * j.g_w - j.g_u * j.h_w) + j.f_w * (j.h_v * j.g_u - j.h_u * j.g_v)

    return alpha, beta, gamma, delta


def reduced_symbol(alpha: float, beta: float, gamma: float, delta: float) -> Callable[[complex], complex]:
    """λ ↦ λ − (αλ + β)/(λ² + γλ + δ)"""
    return lambda lam: lam - (alpha * lam + beta) / (lam * lam + gamma * lam + delta)


def elimination_symbol(j: JacobianSample, lam: complex) -> complex:
    """H(λ) by solving the 2×2 system for (q, s) directly.

    From λq = g_u p + g_v q + g_w s and λs = h_u p + h_v q + h_w s one gets
    (q, s) = (λ − G)⁻¹(g_u, h_u) p, and H(λ) = λ − (f_v, f_w)·(q, s)/p.
    """
    if j.species != 3:
        raise InputError('Elimination needs a three-species Jacobian')

    block = np.array([[lam - j.g_v, -j.g_w], [-j.h_v, lam - j.h_w]], dtype=complex)
    q, s = scipy.linalg.solve(block, np.array([j.g_u, j.h_u], dtype=complex))

    return lam - (j.f_v * q + j.f_w * s)


@dataclasses.dataclass(frozen=True)
class QuadraticReport:
    """Result of check_quadratic_reduction.

    Attributes:
        verdict (Verdict): Decision from real roots and residue signs
        roots (tuple): Denominator roots (complex when the discriminant is
            negative)
        residues (tuple): Herglotz residues at the real roots
        compact (bool): The two compact inequalities, conjoined
        agrees (bool): Whether `compact` matches the verdict (None when
            indeterminate)
        diagnostic (str): Reason for the verdict
    """

    verdict: Verdict
    roots: Tuple[complex, ...]
    residues: Tuple[float, ...]
    compact: bool
    agrees: Optional[bool]
    diagnostic: str

    @property
    def herglotz(self) -> Optional[bool]:
        if self.verdict == Verdict.INDETERMINATE:
            return None
        return self.verdict == Verdict.HERGLOTZ


def compact_inequalities(alpha: float, beta: float, gamma: float, delta: float) -> Tuple[float, float]:
    """Returns (βγ − αδ, β² − α(βγ − αδ)); Herglotz needs (> 0, < 0)."""
    first = beta * gamma - alpha * delta
    return first, beta * beta - alpha * first


def check_quadratic_reduction(alpha: float, beta: float, gamma: float, delta: float) -> QuadraticReport:
    """Decides whether λ − (αλ + β)/(λ² + γλ + δ) is Herglotz.

    Ground truth is the partial-fraction form: the denominator must have real
    distinct roots r₁ < r₂ and each term Rᵢ/(rᵢ − λ) must carry Rᵢ > 0. The
    compact inequalities are evaluated alongside and compared.
    """
    first, second = compact_inequalities(alpha, beta, gamma, delta)
    compact = first > 0.0 and second < 0.0

    def report(verdict, roots, residues, diagnostic):
        agrees = None if verdict == Verdict.INDETERMINATE else (verdict == Verdict.HERGLOTZ) == compact
        if agrees is False:
            logger.info('Compact inequalities disagree with residue test: %s', diagnostic)
        return QuadraticReport(verdict, roots, residues, compact, agrees, diagnostic)

    if alpha == 0.0 and beta == 0.0:
        return report(Verdict.HERGLOTZ, (), (), 'numerator vanishes, f(λ) = λ')

    discriminant = gamma * gamma - 4.0 * delta
    scale = max(1.0, gamma * gamma, abs(delta))

    if abs(discriminant) <= DEGENERACY_TOL * scale:
        root = -0.5 * gamma
        return report(Verdict.INDETERMINATE, (root, root), (), 'double root of the denominator')

    if discriminant < 0.0:
        root = complex(-0.5 * gamma, 0.5 * math.sqrt(-discriminant))
        return report(Verdict.NOT_HERGLOTZ, (root, root.conjugate()), (), 'denominator has complex roots')

    sq = math.sqrt(discriminant)
    r1, r2 = 0.5 * (-gamma - sq), 0.5 * (-gamma + sq)

    # (αλ+β)/((λ−r₁)(λ−r₂)) = Σ Rᵢ/(λ−rᵢ); the pencil term −Rᵢ/(λ−rᵢ) = Rᵢ/(rᵢ−λ)
    residues = ((alpha * r1 + beta) / (r1 - r2), (alpha * r2 + beta) / (r2 - r1))
    size = DEGENERACY_TOL * max(1.0, abs(alpha), abs(beta))

    if min(abs(r) for r in residues) <= size:
        return report(Verdict.INDETERMINATE, (r1, r2), residues, 'vanishing residue')

    if residues[0] > 0.0 and residues[1] > 0.0:
        return report(Verdict.HERGLOTZ, (r1, r2), residues, 'real roots with positive residues')

    return report(Verdict.NOT_HERGLOTZ, (r1, r2), residues, 'negative residue')


@dataclasses.dataclass(frozen=True)
class ThreeSpeciesReport:
    """Determinant conditions for three species and their cross-check.

    Attributes:
        conditions (tuple): Values of the two determinant expressions; both
            must be positive
        holds (bool): Conjunction of the two strict inequalities
        primitive (QuadraticReport): Residue test on the derived form
        agrees (bool): Whether `holds` matches the residue test
    """

    conditions: Tuple[float, float]
    holds: bool
    primitive: QuadraticReport
    agrees: Optional[bool]

    def __bool__(self):
        return self.holds


def check_three_species(j: JacobianSample) -> ThreeSpeciesReport:
    """Evaluates the two 2×2-determinant inequalities for three species.

    With |f_v f_w; g_v g_w|, |g_u g_v; h_u h_v|, |f_v f_w; h_v h_w| and
    |g_u g_w; h_u h_w| written A₁, B₁, A₂, B₂, the conditions are
    A₁B₁ + A₂B₂ > 0 and (h_u B₂ + g_u B₁)(f_v A₁ + f_w A₂) > 0.
    """
    if j.species != 3:
        raise InputError('Determinant conditions need a three-species Jacobian')

    a1 = j.f_v * j.g_w - j.f_w * j.g_v
    b1 = j.g_u * j.h_v - j.g_v * j.h_u
    a2 = j.f_v * j.h_w - j.f_w * j.h_v
    b2 = j.g_u * j.h_w - j.g_w * j.h_u

    first = a1 * b1 + a2 * b2
    second = (j.h_u * b2 + j.g_u * b1) * (j.f_v * a1 + j.f_w * a2)
    holds = first > 0.0 and second > 0.0

    primitive = check_quadratic_reduction(*derive_quadratic_form(j))
    agrees = None if primitive.herglotz is None else primitive.herglotz == holds

    if agrees is False:
        logger.warning('Determinant conditions (%r, %r) disagree with residue test (%s)',
                       first, second, primitive.verdict.value)

    return ThreeSpeciesReport((first, second), holds, primitive, agrees)


#####################
## Schur reduction ##
#####################

def _as_blocks(Amat, Bmat, Cmat):
    A = np.atleast_2d(np.asarray(Amat, dtype=float))
    B = np.atleast_2d(np.asarray(Bmat, dtype=float))
    C = np.atleast_2d(np.asarray(Cmat, dtype=float))

    n, m = A.shape[0], C.shape[0]

    if A.shape != (n, n) or C.shape != (m, m) or B.shape != (n, m):
        raise InputError('Block shapes do not fit: A %s, B %s, C %s' % (A.shape, B.shape, C.shape))
    if not (np.allclose(A, A.T) and np.allclose(C, C.T)):
        raise InputError('Diagonal blocks must be symmetric')

    return A, B, C


def schur_reduce(Amat, Bmat, Cmat, lam: float) -> np.ndarray:
    """Reduces H = [[A, B], [Bᵀ, C]] to A − λI − B(C − λI)⁻¹Bᵀ.

    Args:
        Amat: Symmetric n×n block
        Bmat: n×m coupling block
        Cmat: Symmetric m×m block
        lam (float): Spectral parameter

    Raises:
        PoleError: C − λI numerically singular

    Returns:
        np.ndarray: The n×n reduced matrix
    """
    A, B, C = _as_blocks(Amat, Bmat, Cmat)
    n, m = A.shape[0], C.shape[0]

    shifted = C - lam * np.eye(m)
    smallest = scipy.linalg.svdvals(shifted).min()

    if smallest <= 1e-12 * max(1.0, np.linalg.norm(C, 2)):
        raise PoleError('λ = %r lies in the spectrum of C (smallest singular value %.3g)' % (lam, smallest))

    return A - lam * np.eye(n) - B @ scipy.linalg.solve(shifted, B.T, assume_a='sym')


def schur_spectrum(Amat, Bmat, Cmat) -> np.ndarray:
    """Values of λ off spec(C) where the reduced pencil is singular.

    Every eigenvalue curve of the reduced matrix decreases in λ between
    consecutive eigenvalues of C, so each sign change on such an interval
    holds exactly one root.
    """
    A, B, C = _as_blocks(Amat, Bmat, Cmat)
    H = np.block([[A, B], [B.T, C]])

    reach = np.linalg.norm(H, 2) + 1.0
    poles = scipy.linalg.eigvalsh(C)
    edges = np.concatenate([[-reach], poles, [reach]])
    eps = 1e-10 * reach

    def curve(k):
        return lambda lam: scipy.linalg.eigvalsh(schur_reduce(A, B, C, lam))[k]

    roots = []

    for index in range(edges.size - 1):
        lo = edges[index] + (eps if index > 0 else 0.0)
        hi = edges[index + 1] - (eps if index + 1 < edges.size - 1 else 0.0)

        if hi <= lo:
            continue

        at_lo = scipy.linalg.eigvalsh(schur_reduce(A, B, C, lo))
        at_hi = scipy.linalg.eigvalsh(schur_reduce(A, B, C, hi))

        for k in range(A.shape[0]):
            if at_lo[k] > 0.0 > at_hi[k]:
                roots.append(scipy.optimize.brentq(curve(k), lo, hi, xtol=1e-13))

    return np.sort(np.asarray(roots))
