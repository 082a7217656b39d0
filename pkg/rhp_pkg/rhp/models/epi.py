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

"""Spatial fox rabies: stability pencil, reproduction number, vaccine sweeps

After eliminating the exposed class, the linearization about the disease-free
state is the pencil

    -(D I_x)_x + (α + a) I + σKβ I/(λ̃ - (σ + a)) = λ̃ I,    λ̃ = -λ

with no-flux ends. The growth rate is λ0 = -λ̃_min; an infection spreads when
λ0 > 0.
"""

import concurrent.futures
import csv
import dataclasses
import enum
import json
import logging
import math
import os
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core import coeffs
from ..core.coeffs import AffineField, CoefficientField, WindowedField
from ..core.errors import InputError
from ..core.pencil import (BoundaryCondition, DiscreteGrid, PencilProblem, Pole, principal_eigenvalue,
                           weighted_principal_eigenvalue)

# Define logger
logger = logging.getLogger(__name__)

###################
## Configuration ##
###################

DOMAIN = (0.0, 1.0)
RABIES_NX = 200
SWEEP_STEP = 0.01
SIGN_TOL = 1e-10
CHECK_CELLS = 200
THREADS_ENV = 'HERGLOTZ_THREADS'


def _format(value: float) -> str:
    return '%.12g' % value


def thread_count() -> int:
    """Worker cap from HERGLOTZ_THREADS, defaulting to the CPU count.

    Raises:
        InputError: The variable is set but not a positive integer
    """
    raw = os.environ.get(THREADS_ENV)

    if raw is None or raw.strip() == '':
        return os.cpu_count() or 1

    try:
        count = int(raw)
    except ValueError:
        raise InputError('%s must be a positive integer, got "%s"' % (THREADS_ENV, raw))

    if count < 1:
        raise InputError('%s must be a positive integer, got "%s"' % (THREADS_ENV, raw))

    return count


################
## Parameters ##
################

@dataclasses.dataclass(frozen=True)
class RabiesParams:
    """Epidemiological parameters on the unit interval.

    Attributes:
        a (float): Birth rate, 1/year
        b (float): Death rate, 1/year
        sigma (float): Inverse incubation period, 1/year
        K (float): Carrying capacity, foxes/km²
        alpha (CoefficientField): Inverse infectious period, 1/year
        beta (CoefficientField): Transmission, km²/year
        D (CoefficientField): Diffusion, km²/year
    """

    a: float
    b: float
    sigma: float
    K: float
    alpha: CoefficientField
    beta: CoefficientField
    D: CoefficientField

    def __post_init__(self):
        for name in ('a', 'b', 'sigma', 'K'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise InputError('Rabies parameter %s must be positive, got %r' % (name, value))

        for name in ('alpha', 'beta', 'D'):
            if tuple(getattr(self, name).domain) != DOMAIN:
                raise InputError('Rabies field %s must live on [0, 1]' % name)

    @property
    def pole(self) -> float:
        """σ + a"""
        return self.sigma + self.a

    def replace(self, **changes) -> 'RabiesParams':
        return dataclasses.replace(self, **changes)

    def describe(self) -> dict:
        return {
            'a': self.a,
            'b': self.b,
            'sigma': self.sigma,
            'K': self.K,
            'alpha': self.alpha.describe(),
            'beta': self.beta.describe(),
            'D': self.D.describe(),
        }


@dataclasses.dataclass(frozen=True)
class VaccineStrategy:
    """Total quantity c0 spread evenly over [a0, a0 + L)."""

    c0: float
    a0: float
    L: float

    def __post_init__(self):
        if not (math.isfinite(self.c0) and self.c0 >= 0.0):
            raise InputError('Vaccine quantity c0 must be non-negative, got %r' % self.c0)
        if not 0.0 <= self.a0 <= 1.0:
            raise InputError('Vaccine start a0 must lie in [0, 1], got %r' % self.a0)
        if not 0.0 < self.L <= 1.0:
            raise InputError('Vaccine length L must lie in (0, 1], got %r' % self.L)
        if self.a0 + self.L > 1.0 + 1e-9:
            raise InputError('Vaccine window [%r, %r) leaves the domain' % (self.a0, self.a0 + self.L))

    @property
    def density(self) -> float:
        """v0 = c0/L inside the window"""
        return self.c0 / self.L


def _sample_nodes() -> np.ndarray:
    return coeffs.uniform_grid(DOMAIN, CHECK_CELLS)


def _transmission_free(rp: RabiesParams) -> bool:
    return bool(np.all(rp.beta.values(_sample_nodes()) == 0.0))


def build_stability_pencil(rp: RabiesParams) -> PencilProblem:
    """Pencil with V = α + a, W0 = 1 and the pole σ + a weighted by σKβ.

    A transmission field that vanishes everywhere removes the pole.

    Raises:
        InputError: α not positive or β negative at a sample
    """
    nodes = _sample_nodes()

    alpha = rp.alpha.values(nodes)
    if np.any(~(alpha > 0.0)):
        raise InputError('α must be positive on [0, 1]; α = %r at x = %r'
                         % (alpha[np.argmin(alpha)], nodes[np.argmin(alpha)]))

    beta = rp.beta.values(nodes)
    if np.any(~(beta >= 0.0)):
        raise InputError('β must be non-negative on [0, 1]; β = %r at x = %r'
                         % (beta[np.argmin(beta)], nodes[np.argmin(beta)]))

    poles = ()
    if not np.all(beta == 0.0):
        poles = (Pole(rp.pole, AffineField(rp.beta, scale=rp.sigma * rp.K)),)

    return PencilProblem(
        domain=DOMAIN,
        D=rp.D,
        V=AffineField(rp.alpha, shift=rp.a),
        W0=coeffs.constant_field(1.0, DOMAIN),
        poles=poles,
        bc_left=BoundaryCondition.neumann(),
        bc_right=BoundaryCondition.neumann()
    )


def principal_growth_rate(rp: RabiesParams, n_x: int = RABIES_NX) -> float:
    """λ0 = -λ̃_min; positive means the infection spreads."""
    lam_tilde = principal_eigenvalue(build_stability_pencil(rp), DiscreteGrid(n_x, DOMAIN))
    return -lam_tilde


def reproduction_number(rp: RabiesParams, n_x: int = RABIES_NX) -> float:
    """R0 = 1/μ₁ for -(D φ')' + (α + a) φ = μ (σKβ/(σ + a)) φ with no-flux ends."""
    if _transmission_free(rp):
        return 0.0

    mu = weighted_principal_eigenvalue(
        rp.D,
        AffineField(rp.alpha, shift=rp.a),
        AffineField(rp.beta, scale=rp.sigma * rp.K / rp.pole),
        DiscreteGrid(n_x, DOMAIN)
    )

    return 1.0 / mu


@dataclasses.dataclass(frozen=True)
class SignCheck:
    lambda0: float
    r0: float
    consistent: bool


def _sign(value: float) -> int:
    if abs(value) <= SIGN_TOL:
        return 0
    return 1 if value > 0.0 else -1


def sign_consistency(rp: RabiesParams, n_x: int = RABIES_NX) -> SignCheck:
    """Compares sign(λ0) with sign(R0 - 1); a value on the boundary agrees with
    either side.
    """
    lambda0 = principal_growth_rate(rp, n_x)
    r0 = reproduction_number(rp, n_x)

    growth, threshold = _sign(lambda0), _sign(r0 - 1.0)
    consistent = growth == threshold or growth == 0 or threshold == 0

    if not consistent:
        logger.warning('Sign mismatch: λ0 = %.6g but R0 = %.6g', lambda0, r0)

    return SignCheck(lambda0, r0, consistent)


#############
## Vaccine ##
#############

def vaccine_beta(beta: CoefficientField, vs: VaccineStrategy) -> CoefficientField:
    """β/(1 + v0) with v0 = c0/L on [a0, a0 + L) and 0 elsewhere."""
    if vs.c0 == 0.0:
        return beta
    return WindowedField(beta, vs.a0, vs.a0 + vs.L, 1.0 / (1.0 + vs.density))


def sweep_grid(step: float = SWEEP_STEP) -> Tuple[np.ndarray, np.ndarray]:
    """a0 in [0, 0.5] and L in (0, 1] at spacing `step`."""
    if not 0.0 < step <= 0.5:
        raise InputError('Sweep step must lie in (0, 0.5], got %r' % step)

    a0 = np.round(np.arange(0.0, 0.5 + 0.5 * step, step), 12)
    L = np.round(np.arange(step, 1.0 + 0.5 * step, step), 12)

    return a0, L


@dataclasses.dataclass(frozen=True)
class SweepPoint:
    a0: float
    L: float
    lambda0: float

    @property
    def stable(self) -> bool:
        return self.lambda0 < 0.0

    @property
    def centre(self) -> float:
        return self.a0 + 0.5 * self.L


@dataclasses.dataclass(frozen=True)
class SweepResult:
    """λ0 over the admissible (a0, L) grid at fixed c0.

    Attributes:
        c0 (float): Vaccine quantity
        n_x (int): Cells per solve
        points (tuple): SweepPoint per admissible pair, in grid order
        minimizer (SweepPoint): Point with the smallest λ0
        boundary (tuple): (a0, L) pairs where λ0 = 0 between grid neighbours
    """

    c0: float
    n_x: int
    points: Tuple[SweepPoint, ...]
    minimizer: SweepPoint
    boundary: Tuple[Tuple[float, float], ...]

    @property
    def stable_points(self) -> List[SweepPoint]:
        return [point for point in self.points if point.stable]

    @property
    def any_stable(self) -> bool:
        return any(point.stable for point in self.points)

    def write_csv(self, handle):
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['c0', 'a0', 'L', 'lambda0', 'stable'])

        for point in self.points:
            writer.writerow([_format(self.c0), _format(point.a0), _format(point.L), _format(point.lambda0),
                             'true' if point.stable else 'false'])

    def to_dict(self) -> dict:
        def point_dict(point):
            return {'c0': self.c0, 'a0': point.a0, 'L': point.L, 'lambda0': point.lambda0, 'stable': point.stable}

        return {
            'c0': self.c0,
            'n_x': self.n_x,
            'points': [point_dict(point) for point in self.points],
            'minimizer': point_dict(self.minimizer),
            'boundary': [list(pair) for pair in self.boundary],
        }

    def dump_json(self) -> str:
        return json.dumps(self.to_dict(), indent=4, sort_keys=True)


def _admissible(a0_grid: Iterable[float], L_grid: Iterable[float]) -> List[Tuple[float, float]]:
    pairs = []
    for a0 in a0_grid:
        for L in L_grid:
            if 0.0 <= a0 <= 0.5 + 1e-12 and 0.0 < L <= 1.0 and a0 + L <= 1.0 + 1e-9:
                pairs.append((float(a0), float(L)))
    return pairs


def _zero_crossings(values: dict, a0_grid: Sequence[float], L_grid: Sequence[float]):
    """Linear interpolation of λ0 = 0 along grid lines."""
    crossings = []

    def scan(line):
        for (x0, y0), (x1, y1) in zip(line, line[1:]):
            v0, v1 = values.get((x0, y0)), values.get((x1, y1))
            if v0 is None or v1 is None or (v0 < 0.0) == (v1 < 0.0):
                continue
            t = v0 / (v0 - v1)
            crossings.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))

    for L in L_grid:
        scan([(float(a0), float(L)) for a0 in a0_grid])
    for a0 in a0_grid:
        scan([(float(a0), float(L)) for L in L_grid])

    return tuple(crossings)


def vaccine_sweep(rp: RabiesParams, c0: float, a0_grid: Optional[Sequence[float]] = None,
                  L_grid: Optional[Sequence[float]] = None, n_x: int = RABIES_NX,
                  threads: Optional[int] = None) -> SweepResult:
    """Computes λ0 for every admissible strategy (c0, a0, L).

    Solves run on a thread pool capped by HERGLOTZ_THREADS; results keep grid
    order regardless of completion order.

    Raises:
        InputError: No admissible (a0, L) pair
    """
    default_a0, default_L = sweep_grid()
    a0_grid = default_a0 if a0_grid is None else np.asarray(a0_grid, dtype=float)
    L_grid = default_L if L_grid is None else np.asarray(L_grid, dtype=float)

    pairs = _admissible(a0_grid, L_grid)
    if not pairs:
        raise InputError('No admissible (a0, L) pair: need 0 ≤ a0 ≤ 0.5, 0 < L ≤ 1, a0 + L ≤ 1')

    def solve(pair):
        strategy = VaccineStrategy(c0, *pair)
        return principal_growth_rate(rp.replace(beta=vaccine_beta(rp.beta, strategy)), n_x)

    workers = threads or thread_count()

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        rates = list(executor.map(solve, pairs))

    points = tuple(SweepPoint(a0, L, rate) for (a0, L), rate in zip(pairs, rates))
    minimizer = min(points, key=lambda point: point.lambda0)
    boundary = _zero_crossings({(p.a0, p.L): p.lambda0 for p in points}, a0_grid, L_grid)

    logger.info('Vaccine sweep c0 = %g: %d strategies, %d stable, min λ0 = %.6g at (a0, L) = (%g, %g)',
                c0, len(points), sum(p.stable for p in points), minimizer.lambda0, minimizer.a0, minimizer.L)

    return SweepResult(float(c0), n_x, points, minimizer, boundary)


def stability_threshold(rp: RabiesParams, c0_grid: Sequence[float], a0_grid: Optional[Sequence[float]] = None,
                        L_grid: Optional[Sequence[float]] = None, n_x: int = RABIES_NX,
                        threads: Optional[int] = None) -> Optional[float]:
    """Smallest c0 of `c0_grid` with at least one stable strategy, or None."""
    for c0 in sorted(float(value) for value in c0_grid):
        if vaccine_sweep(rp, c0, a0_grid, L_grid, n_x, threads).any_stable:
            logger.info('Stability first observed at c0 = %g', c0)
            return c0

    return None


###################
## Heterogeneity ##
###################

class HeterogeneityKind(str, enum.Enum):
    BETA_C1 = 'beta_c1'
    ALPHA_C2 = 'alpha_c2'
    DIFFUSION_D0 = 'diffusion_D0'
    DIFFUSION_C3 = 'diffusion_c3'


@dataclasses.dataclass(frozen=True)
class HeterogeneityTable:
    """R0 across one heterogeneity sweep.

    `caveat` is set when the diffusion field vanishes at a grid node for some
    sweep value; D is only evaluated at half points, so the solve still runs.
    """

    kind: HeterogeneityKind
    values: Tuple[float, ...]
    r0: Tuple[float, ...]
    caveat: bool

    @property
    def argmin(self) -> float:
        return self.values[int(np.argmin(self.r0))]

    @property
    def relative_variation(self) -> float:
        return (max(self.r0) - min(self.r0)) / max(self.r0)

    def write_csv(self, handle):
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['kind', 'value', 'R0', 'caveat'])

        for value, r0 in zip(self.values, self.r0):
            writer.writerow([self.kind.value, _format(value), _format(r0), 'true' if self.caveat else 'false'])

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'values': list(self.values),
            'R0': list(self.r0),
            'caveat': self.caveat,
        }

    def dump_json(self) -> str:
        return json.dumps(self.to_dict(), indent=4, sort_keys=True)


def heterogeneity_experiment(kind: HeterogeneityKind, values: Sequence[float],
                             recipe: Callable[[float], RabiesParams], n_x: int = RABIES_NX) -> HeterogeneityTable:
    """Computes R0 for each sweep value, with `recipe` mapping a value to the
    parameters of that panel.
    """
    kind = HeterogeneityKind(kind)
    nodes = _sample_nodes()
    caveat = False
    r0 = []

    for value in values:
        rp = recipe(value)
        if np.any(rp.D.values(nodes) <= 0.0):
            caveat = True
        r0.append(reproduction_number(rp, n_x))

    if caveat:
        logger.warning('Diffusion vanishes on the closed domain for part of the %s sweep', kind.value)

    logger.info('Heterogeneity %s: %d values, R0 in [%.6g, %.6g]', kind.value, len(r0), min(r0), max(r0))

    return HeterogeneityTable(kind, tuple(float(value) for value in values), tuple(r0), caveat)
