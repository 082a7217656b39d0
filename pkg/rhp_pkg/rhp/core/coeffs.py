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

"""Coefficient functions of x.

Coefficients are written in a small arithmetic language (numbers, `x`, `pi`,
unary minus, ``+ - * / ^`` and a handful of elementary functions), parsed by
recursive descent into an immutable tree and compiled into closures over the
`math` module. Fields wrap expressions, grid samples, or simple
transformations of other fields.
"""

import abc
import dataclasses
import logging
import math
import re
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np

from .errors import EvaluationError, ExpressionSyntaxError, InputError

# Define logger
logger = logging.getLogger(__name__)

###################
## Configuration ##
###################

FUNCTIONS = {
    'sin': math.sin,
    'cos': math.cos,
    'tan': math.tan,
    'exp': math.exp,
    'log': math.log,
    'sqrt': math.sqrt,
    'abs': math.fabs,
    'tanh': math.tanh,
}

CONSTANTS = {
    'pi': math.pi,
}

# Faults raised by the compiled closures
_ARITHMETIC_FAULTS = (ValueError, OverflowError, ZeroDivisionError)


###########################
## Expression tree nodes ##
###########################

class Expr(abc.ABC):
    """Node of an expression tree.

    Nodes are frozen dataclasses, so structurally equal trees compare equal.
    """

    def __str__(self):
        return print_expr(self)


@dataclasses.dataclass(frozen=True)
class Number(Expr):
    value: float


@dataclasses.dataclass(frozen=True)
class Variable(Expr):
    name: str = 'x'


@dataclasses.dataclass(frozen=True)
class Constant(Expr):
    name: str


@dataclasses.dataclass(frozen=True)
class Negate(Expr):
    operand: Expr


@dataclasses.dataclass(frozen=True)
class BinaryOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclasses.dataclass(frozen=True)
class Call(Expr):
    func: str
    argument: Expr


###############
## Tokenizer ##
###############

_TOKEN = re.compile(
    r'(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)'
    r'|(?P<name>[A-Za-z_]\w*)'
    r'|(?P<op>[-+*/^()])'
)


@dataclasses.dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(source: str) -> List[_Token]:
    tokens = []
    position = 0

    while position < len(source):
        if source[position].isspace():
            position += 1
            continue

        match = _TOKEN.match(source, position)

        if match is None:
            raise ExpressionSyntaxError('unexpected character %r' % source[position], position)

        tokens.append(_Token(match.lastgroup, match.group(), position))
        position = match.end()

    tokens.append(_Token('end', '', len(source)))

    return tokens


############
## Parser ##
############

class _Parser(object):
    """Recursive descent over the grammar

        expr   := term (("+"|"-") term)*
        term   := factor (("*"|"/") factor)*
        factor := "-" factor | base ("^" factor)?
        base   := number | "x" | "pi" | func "(" expr ")" | "(" expr ")"
    """

    __slots__ = ('_tokens', '_index')

    def __init__(self, tokens: List[_Token]):
        self._tokens = tokens
        self._index = 0

    @property
    def current(self) -> _Token:
        return self._tokens[self._index]

    def advance(self) -> _Token:
        token = self._tokens[self._index]
        self._index += 1
        return token

    def expect(self, text: str):
        token = self.current

        if token.text != text or token.kind == 'end':
            raise ExpressionSyntaxError(self._describe(token, "expected '%s'" % text), token.position)

        return self.advance()

    @staticmethod
    def _describe(token: _Token, message: str) -> str:
        if token.kind == 'end':
            return '%s, found end of input' % message
        return '%s, found %r' % (message, token.text)

    def parse(self) -> Expr:
        tree = self.expr()

        if self.current.kind != 'end':
            raise ExpressionSyntaxError('unexpected %r' % self.current.text, self.current.position)

        return tree

    def expr(self) -> Expr:
        tree = self.term()

        while self.current.kind == 'op' and self.current.text in '+-':
            op = self.advance().text
            tree = BinaryOp(op, tree, self.term())

        return tree

    def term(self) -> Expr:
        tree = self.factor()

        while self.current.kind == 'op' and self.current.text in '*/':
            op = self.advance().text
            tree = BinaryOp(op, tree, self.factor())

        return tree

    def factor(self) -> Expr:
        if self.current.kind == 'op' and self.current.text == '-':
            self.advance()
            return Negate(self.factor())

        tree = self.base()

        # Right-associative: the exponent is itself a factor
        if self.current.kind == 'op' and self.current.text == '^':
            self.advance()
            tree = BinaryOp('^', tree, self.factor())

        return tree

    def base(self) -> Expr:
        token = self.current

        if token.kind == 'number':
            self.advance()
            return Number(float(token.text))

        if token.kind == 'name':
            self.advance()

            if token.text == 'x':
                return Variable()

            if token.text in CONSTANTS:
                return Constant(token.text)

            if token.text in FUNCTIONS:
                self.expect('(')
                argument = self.expr()
                self.expect(')')
                return Call(token.text, argument)

            if self.current.text == '(':
                raise ExpressionSyntaxError('unknown function %r' % token.text, token.position)

            raise ExpressionSyntaxError('unknown identifier %r' % token.text, token.position)

        if token.kind == 'op' and token.text == '(':
            self.advance()
            tree = self.expr()
            self.expect(')')
            return tree

        raise ExpressionSyntaxError(self._describe(token, 'expected a value'), token.position)


def parse_expr(source: str) -> Expr:
    """Parses `source` into an expression tree.

    Args:
        source (str): Expression text, e.g. ``"0.2 + cos(x)^2"``.

    Raises:
        ExpressionSyntaxError: Empty input, unbalanced parentheses, unknown
            identifiers or functions. The error carries the offending position.

    Returns:
        Expr: Root of the tree
    """
    if not isinstance(source, str):
        raise TypeError('Expression source must be str, got %s' % type(source).__name__)

    if not source.strip():
        raise ExpressionSyntaxError('empty expression', 0)

    return _Parser(_tokenize(source)).parse()


def print_expr(e: Expr) -> str:
    """Renders `e` fully parenthesized; the output parses back to `e`."""
    if isinstance(e, Number):
        return repr(float(e.value))
    if isinstance(e, Variable):
        return 'x'
    if isinstance(e, Constant):
        return e.name
    if isinstance(e, Negate):
        return '(-%s)' % print_expr(e.operand)
    if isinstance(e, BinaryOp):
        return '(%s%s%s)' % (print_expr(e.left), e.op, print_expr(e.right))
    if isinstance(e, Call):
        return '%s(%s)' % (e.func, print_expr(e.argument))

    raise TypeError('Unexpected expression node %s' % type(e).__name__)


#################
## Compilation ##
#################

def _finite(value: float) -> float:
    if not math.isfinite(value):
        raise OverflowError('overflow to non-finite value')
    return value


def _divide(a: float, b: float) -> float:
    if b == 0.0:
        raise ZeroDivisionError('division by zero')
    return a / b


_BINARY = {
    '+': lambda a, b: a + b,
    '-': lambda a, b: a - b,
    '*': lambda a, b: a * b,
    '/': _divide,
    '^': math.pow,
}


def compile_expr(e: Expr) -> Callable[[float], float]:
    """Compiles `e` into a scalar closure.

    The closure raises ValueError, OverflowError or ZeroDivisionError on
    domain faults; callers wrap those in EvaluationError.
    """
    if isinstance(e, Number):
        value = float(e.value)
        return lambda x: value

    if isinstance(e, Variable):
        return lambda x: x

    if isinstance(e, Constant):
        value = CONSTANTS[e.name]
        return lambda x: value

    if isinstance(e, Negate):
        operand = compile_expr(e.operand)
        return lambda x: -operand(x)

    if isinstance(e, BinaryOp):
        left, right, op = compile_expr(e.left), compile_expr(e.right), _BINARY[e.op]
        return lambda x: _finite(op(left(x), right(x)))

    if isinstance(e, Call):
        inner, fn, name = compile_expr(e.argument), FUNCTIONS[e.func], e.func

        def call(x):
            argument = inner(x)
            try:
                return _finite(fn(argument))
            except ValueError:
                raise ValueError('%s undefined at argument %r' % (name, argument))

        return call

    raise TypeError('Unexpected expression node %s' % type(e).__name__)


def _call_slope(name: str, a: float, da: float) -> Tuple[float, float]:
    if name == 'sin':
        return math.sin(a), math.cos(a) * da
    if name == 'cos':
        return math.cos(a), -math.sin(a) * da
    if name == 'tan':
        return math.tan(a), da / math.cos(a) ** 2
    if name == 'exp':
        value = math.exp(a)
        return value, value * da
    if name == 'log':
        return math.log(a), _divide(da, a)
    if name == 'sqrt':
        value = math.sqrt(a)
        return value, _divide(da, 2.0 * value)
    if name == 'abs':
        return math.fabs(a), math.copysign(1.0, a) * da
    if name == 'tanh':
        value = math.tanh(a)
        return value, (1.0 - value * value) * da

    raise ValueError('unknown function %r' % name)


def compile_slope(e: Expr) -> Callable[[float], Tuple[float, float]]:
    """Compiles `e` into a closure returning (value, d/dx value).

    Forward-mode differentiation over the same tree; used where the Prüfer
    equation needs D_x.
    """
    if isinstance(e, Number):
        value = float(e.value)
        return lambda x: (value, 0.0)

    if isinstance(e, Variable):
        return lambda x: (x, 1.0)

    if isinstance(e, Constant):
        value = CONSTANTS[e.name]
        return lambda x: (value, 0.0)

    if isinstance(e, Negate):
        operand = compile_slope(e.operand)

        def negate(x):
            v, dv = operand(x)
            return -v, -dv

        return negate

    if isinstance(e, BinaryOp):
        left, right, op = compile_slope(e.left), compile_slope(e.right), e.op

        def binary(x):
            a, da = left(x)
            b, db = right(x)

            if op == '+':
                return _finite(a + b), da + db
            if op == '-':
                return _finite(a - b), da - db
            if op == '*':
                return _finite(a * b), da * b + a * db
            if op == '/':
                value = _divide(a, b)
                return _finite(value), (da - value * db) / b

            value = _finite(math.pow(a, b))
            if db == 0.0:
                slope = 0.0 if da == 0.0 else b * math.pow(a, b - 1.0) * da
            else:
                slope = value * (db * math.log(a) + _divide(b * da, a))
            return value, _finite(slope)

        return binary

    if isinstance(e, Call):
        inner, name = compile_slope(e.argument), e.func

        def call(x):
            a, da = inner(x)
            value, slope = _call_slope(name, a, da)
            return _finite(value), _finite(slope)

        return call

    raise TypeError('Unexpected expression node %s' % type(e).__name__)


def eval_expr(e: Expr, x: float) -> float:
    """Evaluates `e` at `x`.

    Raises:
        EvaluationError: Domain faults (log of non-positive, sqrt of negative,
            division by zero) and overflow to a non-finite value.
    """
    try:
        return float(compile_expr(e)(float(x)))
    except _ARITHMETIC_FAULTS as exc:
        raise EvaluationError('cannot evaluate %s: %s' % (print_expr(e), exc), x)


############
## Fields ##
############

class CoefficientField(abc.ABC):
    """A real function of x on a closed interval [a, b]."""

    @property
    @abc.abstractmethod
    def domain(self) -> Tuple[float, float]:
        """Endpoints (a, b)."""

    @abc.abstractmethod
    def __call__(self, x: float) -> float:
        """Value at `x`."""

    @abc.abstractmethod
    def slope(self, x: float) -> float:
        """Derivative at `x`."""

    @abc.abstractmethod
    def describe(self) -> str:
        """Human readable form used in JSON echoes."""

    def values(self, xs) -> np.ndarray:
        """Evaluates the field at every point of `xs`."""
        xs = np.asarray(xs, dtype=float)
        return np.fromiter((self(x) for x in xs.ravel()), dtype=float, count=xs.size).reshape(xs.shape)


@dataclasses.dataclass(frozen=True)
class ExpressionField(CoefficientField):
    """Expression-backed field."""

    expr: Expr
    bounds: Tuple[float, float]
    _value: Callable = dataclasses.field(init=False, repr=False, compare=False)
    _dual: Callable = dataclasses.field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_domain(self.bounds)
        object.__setattr__(self, '_value', compile_expr(self.expr))
        object.__setattr__(self, '_dual', compile_slope(self.expr))

    @property
    def domain(self):
        return self.bounds

    def __call__(self, x):
        try:
            return self._value(x)
        except _ARITHMETIC_FAULTS as exc:
            raise EvaluationError('cannot evaluate %s: %s' % (print_expr(self.expr), exc), x)

    def slope(self, x):
        try:
            return self._dual(x)[1]
        except _ARITHMETIC_FAULTS as exc:
            raise EvaluationError('cannot differentiate %s: %s' % (print_expr(self.expr), exc), x)

    def describe(self):
        return print_expr(self.expr)


@dataclasses.dataclass(frozen=True, eq=False)
class SampledField(CoefficientField):
    """Grid samples with linear interpolation in between.

    When the field was produced by sampling an expression, `origin` keeps it so
    half-interval values come from the exact function.
    """

    grid: np.ndarray
    samples: np.ndarray
    origin: Optional[CoefficientField] = None
    _gradient: np.ndarray = dataclasses.field(init=False, repr=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        samples = np.asarray(self.samples, dtype=float)

        if grid.ndim != 1 or grid.shape != samples.shape or grid.size < 2:
            raise InputError('Sampled field needs matching 1-D grid and samples (got %s and %s)'
                             % (grid.shape, samples.shape))
        if np.any(np.diff(grid) <= 0.0):
            raise InputError('Sample grid must be strictly increasing')
        if not np.all(np.isfinite(samples)):
            raise InputError('Sampled field contains non-finite values')

        # Second-order differences, one-sided at the ends
        gradient = np.gradient(samples, grid, edge_order=2) if grid.size > 2 else np.gradient(samples, grid)

        object.__setattr__(self, 'grid', grid)
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, '_gradient', gradient)

    @property
    def domain(self):
        return float(self.grid[0]), float(self.grid[-1])

    def __call__(self, x):
        return float(np.interp(x, self.grid, self.samples))

    def slope(self, x):
        return float(np.interp(x, self.grid, self._gradient))

    def values(self, xs):
        return np.interp(np.asarray(xs, dtype=float), self.grid, self.samples)

    def midpoints(self) -> np.ndarray:
        """Values at the half-interval points x_{i+1/2}."""
        mids = 0.5 * (self.grid[:-1] + self.grid[1:])

        if self.origin is not None:
            return self.origin.values(mids)

        return 0.5 * (self.samples[:-1] + self.samples[1:])

    def describe(self):
        if self.origin is not None:
            return 'sampled(%s, n=%d)' % (self.origin.describe(), self.grid.size - 1)
        return 'sampled(n=%d)' % (self.grid.size - 1)


@dataclasses.dataclass(frozen=True)
class AffineField(CoefficientField):
    """scale * base(x) + shift"""

    base: CoefficientField
    scale: float = 1.0
    shift: float = 0.0

    @property
    def domain(self):
        return self.base.domain

    def __call__(self, x):
        return self.scale * self.base(x) + self.shift

    def slope(self, x):
        return self.scale * self.base.slope(x)

    def describe(self):
        return '%r*(%s)+%r' % (self.scale, self.base.describe(), self.shift)


@dataclasses.dataclass(frozen=True)
class WindowedField(CoefficientField):
    """base(x) multiplied by `factor` on the half-open window [start, stop)."""

    base: CoefficientField
    start: float
    stop: float
    factor: float

    def __post_init__(self):
        if not self.start < self.stop:
            raise InputError('Empty window [%r, %r)' % (self.start, self.stop))

    @property
    def domain(self):
        return self.base.domain

    def _inside(self, x):
        return self.start <= x < self.stop

    def __call__(self, x):
        value = self.base(x)
        return value * self.factor if self._inside(x) else value

    def slope(self, x):
        slope = self.base.slope(x)
        return slope * self.factor if self._inside(x) else slope

    def describe(self):
        return '(%s)*[%r if %r<=x<%r else 1]' % (self.base.describe(), self.factor, self.start, self.stop)


def _check_domain(bounds):
    a, b = bounds
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise InputError('Invalid domain [%r, %r]' % (a, b))


def parse_field(source: str, domain: Tuple[float, float]) -> ExpressionField:
    """Parses `source` and binds it to `domain`."""
    return ExpressionField(parse_expr(source), (float(domain[0]), float(domain[1])))


def constant_field(value: float, domain: Tuple[float, float]) -> ExpressionField:
    return ExpressionField(Number(float(value)), (float(domain[0]), float(domain[1])))


def uniform_grid(domain: Tuple[float, float], n: int) -> np.ndarray:
    """n + 1 uniform nodes on `domain`, endpoints included."""
    a, b = domain
    return a + (b - a) * np.arange(n + 1) / n


def sample_field(f: CoefficientField, n: int) -> SampledField:
    """Samples `f` at n + 1 uniform nodes.

    Args:
        f (CoefficientField): Field to sample
        n (int): Number of cells, at least 2

    Raises:
        InputError: n < 2
        EvaluationError: `f` fails at a node; the error names the node

    Returns:
        SampledField: Samples with `f` kept as origin for half-point queries
    """
    if n < 2:
        raise InputError('Need at least 2 cells to sample a field, got %d' % n)

    grid = uniform_grid(f.domain, n)
    origin = f.origin if isinstance(f, SampledField) else f

    logger.debug('Sampling %s on %d cells', f.describe(), n)

    return SampledField(grid, f.values(grid), origin=origin)


def iter_nodes(e: Expr) -> Iterator[Expr]:
    """Yields every node of `e`, root first."""
    yield e
    if isinstance(e, Negate):
        yield from iter_nodes(e.operand)
    elif isinstance(e, BinaryOp):
        yield from iter_nodes(e.left)
        yield from iter_nodes(e.right)
    elif isinstance(e, Call):
        yield from iter_nodes(e.argument)
