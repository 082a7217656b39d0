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

"""Exception hierarchy shared by every solver.

Input problems derive from `InputError`, numerical breakdowns from
`NumericalError`. The CLI maps the two families onto distinct exit codes.
"""


class RhpError(RuntimeError):
    """Base class for all toolkit errors."""


##################
## Input errors ##
##################

class InputError(RhpError):
    """Invalid problem data, expression or request."""


class ExpressionSyntaxError(InputError):
    """Raised when an expression string cannot be parsed.

    Attributes:
        position (int): Zero-based offset of the offending character.
    """

    def __init__(self, message: str, position: int):
        super().__init__('%s at position %d' % (message, position))
        self.position = position


class EvaluationError(InputError):
    """Raised when an expression has no finite real value at `x`."""

    def __init__(self, message: str, x: float = None):
        if x is not None:
            message = '%s (x = %r)' % (message, x)
        super().__init__(message)
        self.x = x


class PoleError(InputError):
    """Raised when a spectral parameter sits on (or too near) a pole."""


class ProblemFileError(InputError):
    """Raised for malformed problem files and presets."""


######################
## Numerical errors ##
######################

class NumericalError(RhpError):
    """A solver failed to deliver a trustworthy answer."""


class RealityViolation(NumericalError):
    """Too many eigenvalues left the real axis."""


class BracketError(NumericalError):
    """A bracketing search ran out of budget."""


class CrossingMismatch(NumericalError):
    """Converged shooting solution has the wrong number of roots."""


class IntegrationError(NumericalError):
    """The Prüfer integration failed."""


class WkbRangeError(NumericalError):
    """Request lies outside the region where the WKB condition applies."""
