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

"""Leading-order WKB quantization for rational pencils"""

import logging
import math

import numpy as np
import scipy.integrate
import scipy.optimize

from ..core.errors import BracketError, InputError, IntegrationError, WkbRangeError
from ..core.pencil import DiscreteGrid, PencilProblem, classify_interval
from ..core.util.bracket import monotone_bracket
from .prufer import initial_angle

# Define logger
logger = logging.getLogger(__name__)

###################
## Configuration ##
###################

QUAD_TOL = 1e-9
QUAD_LIMIT = 200
SOLVE_TOL = 1e-12
SCAN_CELLS = 100
SCAN_FACTOR = 4
POLE_GUARD = 1e-12


def _scan(p: PencilProblem, n_x: int) -> np.ndarray:
    a, b = p.domain
    return np.linspace(a, b, SCAN_FACTOR * n_x + 1)


def min_g(p: PencilProblem, lam: float, n_x: int = SCAN_CELLS) -> float:
    """Smallest g(x, λ) over 4·n_x + 1 equispaced samples of [a, b]."""
    return float(p.g_values(_scan(p, n_x), lam).min())


def _quad(integrand, lower: float, upper: float, quad_tol: float) -> float:
    value, _ = scipy.integrate.quad(integrand, lower, upper, epsabs=quad_tol, epsrel=0.0, limit=QUAD_LIMIT)
    if not math.isfinite(value):
        raise IntegrationError('Quadrature on [%r, %r] returned %r' % (lower, upper, value))
    return value


def _phase(p: PencilProblem, lam: float, quad_tol: float) -> float:
    # Clamped at zero so the validity boundary itself can be evaluated
    def integrand(x):
        return math.sqrt(max(p.g(x, lam), 0.0) / p.D(x))

    a, b = p.domain
    return _quad(integrand, a, b, quad_tol) / math.pi


def _check_validity(p: PencilProblem, lam: float, n_x: int):
    classify_interval(lam, p.alphas)

    lowest = min_g(p, lam, n_x)
    if lowest <= 0.0:
        raise WkbRangeError('λ = %r is outside WKB validity: min g(x, λ) = %.6g' % (lam, lowest))


def wkb_phase(p: PencilProblem, lam: float, quad_tol: float = QUAD_TOL, n_x: int = SCAN_CELLS) -> float:
    """(1/π) ∫ √(g/D) dx over the domain.

    Raises:
        PoleError: λ on a pole
        WkbRangeError: g(x, λ) ≤ 0 at a scan sample
    """
    _check_validity(p, lam, n_x)

    phase = _phase(p, lam, quad_tol)
    logger.debug('WKB phase at λ = %r is %.10g', lam, phase)

    return phase


def validity_threshold(p: PencilProblem, j: int, n_x: int = SCAN_CELLS) -> float:
    """λ_min(j): the point of I_j above which g(·, λ) is positive on every
    scan sample. min g increases in λ, so the threshold is unique.
    """
    lower, upper = p.interval(j)
    guard = POLE_GUARD * p.spread

    def lowest(lam):
        return min_g(p, lam, n_x)

    lo, hi = monotone_bracket(lowest, lower, upper, increasing=True, scale=p.spread, guard=guard)
    if lo == hi:
        return lo

    return scipy.optimize.brentq(lowest, lo, hi, xtol=SOLVE_TOL * max(1.0, abs(lo), abs(hi)))


def wkb_eigenvalue(p: PencilProblem, j: int, m: float, tol: float = SOLVE_TOL,
                   quad_tol: float = QUAD_TOL, n_x: int = SCAN_CELLS) -> float:
    """Solves phase(λ) = m in the validity part of I_j.

    Args:
        p (PencilProblem): Problem
        j (int): Interval index
        m (float): Quantization number, positive
        tol (float, optional): Defaults to 1e-12. Relative root tolerance.
        quad_tol (float, optional): Defaults to 1e-9. Quadrature tolerance.
        n_x (int, optional): Defaults to 100. Scan resolution.

    Raises:
        InputError: m not positive
        WkbRangeError: m is not reached above the validity threshold

    Returns:
        float: Approximate eigenvalue
    """
    if not m > 0:
        raise InputError('Quantization number must be positive, got %r' % m)

    threshold = validity_threshold(p, j, n_x)
    floor = _phase(p, threshold, quad_tol)

    if m <= floor:
        raise WkbRangeError('k below WKB range: phase is already %.6g at the validity threshold λ = %.6g of I_%d'
                            % (floor, threshold, j))

    _, upper = p.interval(j)

    def residual(lam):
        return _phase(p, lam, quad_tol) - m

    try:
        lo, hi = monotone_bracket(residual, threshold, upper, increasing=True, scale=p.spread,
                                  guard=POLE_GUARD * p.spread)
    except BracketError as exc:
        raise WkbRangeError('Quantization number %r not reached in I_%d: %s' % (m, j, exc))

    if lo == hi:
        return lo

    lam = scipy.optimize.brentq(residual, lo, hi, xtol=tol * max(1.0, abs(lo), abs(hi)))
    logger.info('WKB eigenvalue %.10g for j = %d, m = %r', lam, j, m)

    return lam


def quantization_number(p: PencilProblem, k: int) -> float:
    """Maps oscillation index k to the quantization number: k plus one half
    per Dirichlet end.
    """
    if int(k) != k or k < 0:
        raise InputError('Oscillation index must be a non-negative integer, got %r' % k)

    dirichlet = sum(bc.kind == 'dirichlet' for bc in (p.bc_left, p.bc_right))
    return k + 0.5 * dirichlet


def wkb_mode_eigenvalue(p: PencilProblem, j: int, k: int, **kwargs) -> float:
    """WKB estimate of the eigenvalue of I_j with k roots."""
    return wkb_eigenvalue(p, j, quantization_number(p, k), **kwargs)


def accumulation_constant(p: PencilProblem, i: int, quad_tol: float = QUAD_TOL) -> float:
    """C_i = ((1/π) ∫ √(Wᵢ/D) dx)², so that eigenvalues below αᵢ behave like
    αᵢ - C_i/k².
    """
    if not 1 <= i <= p.N:
        raise InputError('Pole index %d outside 1..%d' % (i, p.N))

    W = p.poles[i - 1].W
    a, b = p.domain

    value = _quad(lambda x: math.sqrt(W(x) / p.D(x)), a, b, quad_tol) / math.pi

    return value * value


def wkb_eigenfunction(p: PencilProblem, lam: float, g: DiscreteGrid, quad_tol: float = QUAD_TOL) -> np.ndarray:
    """cos(Φ(x) - Θ(a)) / (√D g^{1/4}) on the interior nodes, Φ(x) = ∫ₐˣ √(g/D),
    normalized to max-norm 1 with a positive first entry.

    Raises:
        WkbRangeError: λ outside the validity region
    """
    _check_validity(p, lam, g.n_x)

    def integrand(x):
        return math.sqrt(max(p.g(x, lam), 0.0) / p.D(x))

    nodes = g.nodes
    cells = np.array([_quad(integrand, left, right, quad_tol) for left, right in zip(nodes[:-1], nodes[1:])])
    phase = np.cumsum(cells)[:-1]

    xs = g.interior
    amplitude = 1.0 / (np.sqrt(p.D.values(xs)) * p.g_values(xs, lam) ** 0.25)
    values = amplitude * np.cos(phase - initial_angle(p.bc_left))

    values = values / np.abs(values).max()
    significant = values[np.abs(values) >= 1e-10]

    return values if significant[0] > 0.0 else -values
