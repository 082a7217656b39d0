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

"""Prüfer-angle shooting

With p = R cos Θ and p_x = R sin Θ the pencil equation -(D p_x)_x = g p becomes

    Θ_x = -sin²Θ - (g/D) cos²Θ - (D_x/D) sin Θ cos Θ
    ρ_x = (1 - g/D) sin Θ cos Θ - (D_x/D) sin²Θ,      ρ = log R

Roots of p sit where cos Θ = 0 and Θ always crosses those levels downward.
Θ(b, λ) decreases in λ, so the k-th eigenvalue of an interval is where Θ(b)
meets θ_b - kπ.
"""

import dataclasses
import logging
import math
from typing import Tuple

import numpy as np
import scipy.integrate
import scipy.optimize

from ..core.errors import BracketError, CrossingMismatch, InputError, IntegrationError, PoleError
from ..core.pencil import BoundaryCondition, PencilProblem
from ..core.util.bracket import monotone_bracket

# Define logger
logger = logging.getLogger(__name__)

###################
## Configuration ##
###################

REL_TOL = 1e-9
ABS_TOL = 1e-12
SHOOT_TOL = 1e-10
POLE_REFUSAL = 1e-6
LEVEL_GUARD = 1e-6
BRACKET_BUDGET = 80


@dataclasses.dataclass(frozen=True)
class PruferState:
    theta: float
    rho: float


@dataclasses.dataclass(frozen=True)
class PruferPath:
    """Result of one Prüfer integration across [a, b].

    Attributes:
        lam (float): Spectral parameter
        start (PruferState): State at a
        end (PruferState): State at b
        crossings (int): Interior roots of p
        events (tuple): x where cos Θ = 0 was detected
        transversal (bool): Every detected root was crossed downward
        evaluations (int): Right-hand side evaluations
    """

    lam: float
    start: PruferState
    end: PruferState
    crossings: int
    events: Tuple[float, ...]
    transversal: bool
    evaluations: int

    @property
    def theta_b(self) -> float:
        return self.end.theta


@dataclasses.dataclass(frozen=True)
class ShootResult:
    lam: float
    theta_b: float
    target: float
    crossings: int
    iterations: int
    bracket: Tuple[float, float]

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def initial_angle(bc: BoundaryCondition) -> float:
    """Θ(a) in (-π/2, π/2] with (cos Θ, sin Θ) satisfying `bc`."""
    return bc.angle


def target_angle(bc: BoundaryCondition, k: int) -> float:
    """k-th boundary target θ_b - kπ with θ_b in [-π/2, π/2)."""
    theta = bc.angle
    if theta >= 0.5 * math.pi:
        theta -= math.pi
    return theta - k * math.pi


def count_crossings(theta_a: float, theta_b: float) -> int:
    """Levels π/2 - mπ strictly between Θ(b) and Θ(a), with a small guard so
    roots sitting on the boundary do not count.
    """
    lower = (0.5 * math.pi - (theta_a - LEVEL_GUARD)) / math.pi
    upper = (0.5 * math.pi - (theta_b + LEVEL_GUARD)) / math.pi
    return max(0, math.ceil(upper) - math.floor(lower) - 1)


def _refuse_near_pole(p: PencilProblem, lam: float):
    if not math.isfinite(lam):
        raise InputError('λ must be finite, got %r' % lam)

    limit = POLE_REFUSAL * p.spread
    for alpha in p.alphas:
        if abs(lam - alpha) < limit:
            raise PoleError('λ = %r is within %.3g of pole %r' % (lam, limit, alpha))


def integrate_prufer(p: PencilProblem, lam: float, rel_tol: float = REL_TOL) -> PruferPath:
    """Integrates the angle and log-radius equations from a to b.

    Args:
        p (PencilProblem): Problem
        lam (float): Spectral parameter, away from every pole
        rel_tol (float, optional): Defaults to 1e-9. Integrator tolerance.

    Raises:
        PoleError: λ too close to a pole
        IntegrationError: Non-finite right-hand side or integrator failure

    Returns:
        PruferPath: Final angle, crossings and transversality record
    """
    _refuse_near_pole(p, lam)

    D, slope = p.D, p.D.slope
    a, b = p.domain

    def rhs(x, y):
        sin, cos = math.sin(y[0]), math.cos(y[0])
        diffusion = D(x)
        q = p.g(x, lam) / diffusion
        drift = slope(x) / diffusion

        if not (math.isfinite(q) and math.isfinite(drift)):
            raise IntegrationError('Non-finite Prüfer coefficients at x = %r (λ = %r)' % (x, lam))

        return [-sin * sin - q * cos * cos - drift * sin * cos,
                (1.0 - q) * sin * cos - drift * sin * sin]

    def root(x, y):
        return math.cos(y[0])

    theta_a = initial_angle(p.bc_left)

    solution = scipy.integrate.solve_ivp(rhs, (a, b), [theta_a, 0.0], method='RK45',
                                         rtol=rel_tol, atol=ABS_TOL, events=root)
    if not solution.success:
        raise IntegrationError('Prüfer integration failed at λ = %r: %s' % (lam, solution.message))

    theta_b, rho_b = solution.y[0, -1], solution.y[1, -1]
    if not (math.isfinite(theta_b) and math.isfinite(rho_b)):
        raise IntegrationError('Prüfer state diverged at λ = %r' % lam)

    events = tuple(float(x) for x in solution.t_events[0])

    # Every root of p must be crossed with Θ_x < 0
    transversal = all(rhs(x, y)[0] < 0.0 for x, y in zip(solution.t_events[0], solution.y_events[0]))
    if not transversal:
        logger.warning('Non-transversal root crossing at λ = %r', lam)

    return PruferPath(
        lam=lam,
        start=PruferState(theta_a, 0.0),
        end=PruferState(float(theta_b), float(rho_b)),
        crossings=count_crossings(theta_a, theta_b),
        events=events,
        transversal=transversal,
        evaluations=int(solution.nfev)
    )


def shoot_eigenvalue(p: PencilProblem, j: int, k: int, tol: float = SHOOT_TOL,
                     rel_tol: float = REL_TOL) -> ShootResult:
    """Finds the eigenvalue of interval j whose eigenfunction has k roots.

    Args:
        p (PencilProblem): Problem
        j (int): Interval index, 0..N
        k (int): Oscillation index, ≥ 0
        tol (float, optional): Defaults to 1e-10. Relative bound on |Δλ|.
        rel_tol (float, optional): Defaults to 1e-9. Integrator tolerance.

    Raises:
        InputError: Invalid j or k
        BracketError: The target was not straddled within the budget
        CrossingMismatch: Converged λ has a root count other than k

    Returns:
        ShootResult: Converged eigenvalue and its bracket
    """
    if int(k) != k or k < 0:
        raise InputError('Oscillation index must be a non-negative integer, got %r' % k)

    lower, upper = p.interval(j)
    target = target_angle(p.bc_right, k)
    spread = p.spread
    iterations = [0]

    def mismatch(lam):
        iterations[0] += 1
        return integrate_prufer(p, lam, rel_tol).theta_b - target

    try:
        lo, hi = monotone_bracket(mismatch, lower, upper, increasing=False, scale=spread,
                                  guard=2.0 * POLE_REFUSAL * spread, budget=BRACKET_BUDGET)
    except BracketError as exc:
        raise BracketError('%s; every (j, k) has an eigenvalue, so the integrator tolerance '
                           '(rel_tol = %g) is too loose for j = %d, k = %d' % (exc, rel_tol, j, k))

    if lo == hi:
        lam = lo
    else:
        lam = scipy.optimize.brentq(mismatch, lo, hi, xtol=tol * max(1.0, abs(lo), abs(hi)),
                                    rtol=4 * np.finfo(float).eps)

    path = integrate_prufer(p, lam, rel_tol)

    if path.crossings != k:
        raise CrossingMismatch('Converged λ = %r has %d roots, expected k = %d' % (lam, path.crossings, k))

    logger.info('Shot λ = %.10g for j = %d, k = %d in %d integrations', lam, j, k, iterations[0])

    return ShootResult(
        lam=float(lam),
        theta_b=path.theta_b,
        target=target,
        crossings=path.crossings,
        iterations=iterations[0],
        bracket=(float(lo), float(hi))
    )
