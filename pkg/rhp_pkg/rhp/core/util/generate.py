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

import math
import random
from typing import Optional, Tuple

import numpy as np

from ..coeffs import FUNCTIONS
from ..herglotz import JacobianSample, RationalHerglotz

_LEAVES = ('x', 'x', 'pi', 'number')
_OPERATORS = ('+', '-', '*', '/', '^')


def _rng(rng: Optional[random.Random]) -> random.Random:
    return rng if rng is not None else random.Random()


def expression(depth: int = 3, rng: Optional[random.Random] = None) -> str:
    """Generates a random expression source in the coefficient grammar.

    Args:
        depth (int, optional): Defaults to 3. Maximum nesting depth.
        rng (random.Random, optional): Defaults to None. Source of
            randomness; a fresh generator when omitted.

    Returns:
        str: Expression text using x, pi, numbers, the five operators and
            the known functions
    """
    rng = _rng(rng)

    if depth <= 0 or rng.random() < 0.25:
        leaf = rng.choice(_LEAVES)
        if leaf == 'number':
            return repr(round(rng.uniform(0.0, 5.0), rng.randint(0, 3)))
        return leaf

    shape = rng.random()

    if shape < 0.15:
        return '-' + expression(depth - 1, rng)
    if shape < 0.4:
        return '%s(%s)' % (rng.choice(sorted(FUNCTIONS)), expression(depth - 1, rng))

    left, right = expression(depth - 1, rng), expression(depth - 1, rng)

    return '(%s %s %s)' % (left, rng.choice(_OPERATORS), right)


def herglotz_function(poles: int = 2, rng: Optional[random.Random] = None) -> RationalHerglotz:
    """Random rational Herglotz function with `poles` well-separated poles."""
    rng = _rng(rng)

    locations = sorted(rng.uniform(-10.0, 10.0) for _ in range(poles))
    while any(b - a < 0.1 for a, b in zip(locations, locations[1:])):
        locations = sorted(rng.uniform(-10.0, 10.0) for _ in range(poles))

    C = rng.uniform(0.1, 3.0) if poles == 0 or rng.random() < 0.7 else 0.0

    return RationalHerglotz(
        C=C,
        B=rng.uniform(-5.0, 5.0),
        poles=tuple((alpha, rng.uniform(0.1, 5.0)) for alpha in locations)
    )


def quadratic_form(rng: Optional[random.Random] = None, margin: float = 0.05) -> Tuple[float, float, float, float]:
    """(α, β, γ, δ) in [-3, 3]⁴ whose Herglotz decision is well conditioned:
    the discriminant and every residue (or |αz + β| at complex roots) stay
    at least `margin` away from zero.
    """
    rng = _rng(rng)

    while True:
        alpha, beta, gamma, delta = (rng.uniform(-3.0, 3.0) for _ in range(4))
        discriminant = gamma * gamma - 4.0 * delta

        if abs(discriminant) <= margin:
            continue

        if discriminant < 0.0:
            root = complex(-0.5 * gamma, 0.5 * math.sqrt(-discriminant))
            if abs(alpha * root + beta) > margin:
                return alpha, beta, gamma, delta
            continue

        sq = math.sqrt(discriminant)
        r1, r2 = 0.5 * (-gamma - sq), 0.5 * (-gamma + sq)
        residues = ((alpha * r1 + beta) / (r1 - r2), (alpha * r2 + beta) / (r2 - r1))

        if min(abs(r) for r in residues) > margin:
            return alpha, beta, gamma, delta


def jacobian(species: int = 3, rng: Optional[random.Random] = None) -> JacobianSample:
    """Jacobian with every partial uniform on [-1, 1]."""
    rng = _rng(rng)
    names = ['f_u', 'f_v', 'g_u', 'g_v']
    if species == 3:
        names += list(JacobianSample.THREE_SPECIES)

    return JacobianSample(**{name: rng.uniform(-1.0, 1.0) for name in names})


def block_symmetric(n: int, m: int, seed: int = 0) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Blocks (A, B, C) of a random symmetric (n + m)-square matrix."""
    generator = np.random.default_rng(seed)

    H = generator.standard_normal((n + m, n + m))
    H = 0.5 * (H + H.T)

    return H[:n, :n], H[:n, n:], H[n:, n:]
