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

import logging
import math
from typing import Callable, Tuple

from ..errors import BracketError

# Define logger
logger = logging.getLogger(__name__)

APPROACH_FACTOR = 10.0
EXPANSION_FACTOR = 2.0


def monotone_bracket(fn: Callable[[float], float], lower: float, upper: float, increasing: bool = True,
                     scale: float = 1.0, guard: float = 0.0, budget: int = 80) -> Tuple[float, float]:
    """Locates a sign change of a monotone function on the open interval
    (lower, upper).

    Finite endpoints are approached geometrically, infinite ones are reached
    by doubling steps of size `scale`. No point closer than `guard` to a
    finite endpoint is evaluated.

    Args:
        fn (callable): Monotone function of one real variable.
        lower (float): Left end, may be -inf.
        upper (float): Right end, may be +inf.
        increasing (bool, optional): Defaults to True. Direction of `fn`.
        scale (float, optional): Defaults to 1.0. Step used away from
            finite ends and for expansion.
        guard (float, optional): Defaults to 0.0. Minimum distance to a
            finite endpoint.
        budget (int, optional): Defaults to 80. Maximum steps per side.

    Raises:
        BracketError: No sign change found within the budget

    Returns:
        tuple: (lo, hi) with the value negative-or-zero at `lo` and
            positive-or-zero at `hi` once oriented as increasing
    """
    def oriented(x):
        value = fn(x)
        return value if increasing else -value

    # Starting point inside the interval
    if math.isfinite(lower) and math.isfinite(upper):
        start = 0.5 * (lower + upper)
    elif math.isfinite(lower):
        start = lower + scale
    elif math.isfinite(upper):
        start = upper - scale
    else:
        start = 0.0

    value = oriented(start)

    if value == 0.0:
        return start, start

    # Search toward the side where the sign flips
    toward, end = (upper, +1.0) if value < 0.0 else (lower, -1.0)
    anchor = start

    for step in range(1, budget + 1):
        if math.isfinite(toward):
            distance = abs(toward - anchor) / APPROACH_FACTOR ** step
            if distance < guard or distance == 0.0:
                break
            candidate = toward - end * distance
        else:
            candidate = anchor + end * scale * EXPANSION_FACTOR ** step

        candidate_value = oriented(candidate)

        logger.debug('Bracket step %d at %r (value %r)', step, candidate, candidate_value)

        if (candidate_value >= 0.0) if value < 0.0 else (candidate_value <= 0.0):
            return (start, candidate) if value < 0.0 else (candidate, start)

        start = candidate

    raise BracketError('No sign change found in (%r, %r) within %d steps' % (lower, upper, budget))
