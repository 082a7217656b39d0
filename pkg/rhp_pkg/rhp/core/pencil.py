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

"""Rational Sturm–Liouville pencils

    -(D p')' = g(x, λ) p,   g(x, λ) = λ W0(x) - Σ Wᵢ(x)/(λ - αᵢ) - V(x)

on [a, b] with Robin data b0·p + b1·p_x = 0 at both ends. The pencil is
linearized with auxiliary unknowns vᵢ = Wᵢ u/(λ - αᵢ), giving the block
eigenproblem

    (L u + V u + Σ vᵢ)/W0 = λ u,   Wᵢ u + αᵢ vᵢ = λ vᵢ

of size (N + 1)(n_x - 1), which is solved densely. Eigenvalues are indexed by
the interval I_j = (α_j, α_{j+1}) they fall in and by the number of sign
changes of u.
"""

import bisect
import dataclasses
import json
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from . import coeffs
from .coeffs import CoefficientField, ExpressionField
from .errors import InputError, PoleError, ProblemFileError, RealityViolation
from .herglotz import RationalHerglotz

# Define logger
logger = logging.getLogger(__name__)

###################
## Configuration ##
###################

REALITY_TOL = 1e-8
NEAR_POLE_FACTOR = 1e3
MAX_NONREAL_FRACTION = 0.01
SIGN_CHANGE_FLOOR = 1e-10
MIN_CELLS = 4

PROBLEM_KEYS = ('domain', 'D', 'V', 'W0', 'poles', 'bc_left', 'bc_right')


@dataclasses.dataclass(frozen=True)
class BoundaryCondition:
    """Robin data b0·u + b1·u_x = 0."""

    b0: float
    b1: float

    def __post_init__(self):
        if not (math.isfinite(self.b0) and math.isfinite(self.b1)):
            raise InputError('Boundary data must be finite')
        if self.b0 == 0.0 and self.b1 == 0.0:
            raise InputError('Boundary condition needs (b0, b1) != (0, 0)')

    @classmethod
    def dirichlet(cls):
        return cls(1.0, 0.0)

    @classmethod
    def neumann(cls):
        return cls(0.0, 1.0)

    @property
    def kind(self) -> str:
        if self.b1 == 0.0:
            return 'dirichlet'
        if self.b0 == 0.0:
            return 'neumann'
        return 'robin'

    @property
    def angle(self) -> float:
        """Angle Θ with (cos Θ, sin Θ) satisfying the condition, in (-π/2, π/2]."""
        theta = math.atan2(-self.b0, self.b1)
        if theta > 0.5 * math.pi:
            theta -= math.pi
        elif theta <= -0.5 * math.pi:
            theta += math.pi
        return theta

    def to_dict(self):
        return {'b0': self.b0, 'b1': self.b1}


@dataclasses.dataclass(frozen=True)
class Pole:
    """Singular value αᵢ and its weight Wᵢ(x) > 0."""

    alpha: float
    W: CoefficientField


@dataclasses.dataclass(frozen=True)
class PencilProblem:
    """Rational Sturm–Liouville pencil on `domain`.

    Attributes:
        domain (tuple): Endpoints (a, b)
        D (CoefficientField): Diffusion, positive
        V (CoefficientField): Potential
        W0 (CoefficientField): Weight of λ, positive
        poles (tuple): Pole entries with strictly increasing αᵢ
        bc_left (BoundaryCondition): Data at a
        bc_right (BoundaryCondition): Data at b
    """

    domain: Tuple[float, float]
    D: CoefficientField
    V: CoefficientField
    W0: CoefficientField
    poles: Tuple[Pole, ...] = ()
    bc_left: BoundaryCondition = BoundaryCondition.neumann()
    bc_right: BoundaryCondition = BoundaryCondition.neumann()

    def __post_init__(self):
        a, b = self.domain
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise InputError('Invalid domain [%r, %r]' % (a, b))

        object.__setattr__(self, 'domain', (float(a), float(b)))
        object.__setattr__(self, 'poles', tuple(self.poles))

        alphas = self.alphas
        if any(not math.isfinite(alpha) for alpha in alphas):
            raise InputError('Pole locations must be finite')
        if any(right <= left for left, right in zip(alphas, alphas[1:])):
            raise InputError('Pole locations must be strictly increasing: %s' % list(alphas))

    @property
    def N(self) -> int:
        return len(self.poles)

    @property
    def alphas(self) -> Tuple[float, ...]:
        return tuple(float(pole.alpha) for pole in self.poles)

    @property
    def spread(self) -> float:
        alphas = self.alphas
        return max(1.0, alphas[-1] - alphas[0]) if alphas else 1.0

    def interval(self, j: int) -> Tuple[float, float]:
        """Endpoints of I_j."""
        edges = (-math.inf,) + self.alphas + (math.inf,)
        if not 0 <= j <= self.N:
            raise InputError('Interval index %d outside 0..%d' % (j, self.N))
        return edges[j], edges[j + 1]

    def g(self, x: float, lam: float) -> float:
        """Right-hand side g(x, λ)."""
        value = lam * self.W0(x) - self.V(x)
        for pole in self.poles:
            value -= pole.W(x) / (lam - pole.alpha)
        return value

    def g_values(self, xs, lam: float) -> np.ndarray:
        for alpha in self.alphas:
            if lam == alpha:
                raise PoleError('g evaluated at pole %r' % alpha)

        values = lam * self.W0.values(xs) - self.V.values(xs)
        for pole in self.poles:
            values = values - pole.W.values(xs) / (lam - pole.alpha)
        return values

    def symbol_at(self, x: float) -> RationalHerglotz:
        """g(x, ·) as a rational Herglotz function of λ."""
        return RationalHerglotz(
            C=self.W0(x),
            B=-self.V(x),
            poles=tuple((pole.alpha, pole.W(x)) for pole in self.poles)
        )

    ###################
    ## Problem files ##
    ###################

    @classmethod
    def from_dict(cls, data: dict) -> 'PencilProblem':
        """Builds a problem from the problem-file mapping.

        Raises:
            ProblemFileError: Unknown or missing keys, malformed entries
        """
        if not isinstance(data, dict):
            raise ProblemFileError('Problem must be a JSON object')

        unknown = set(data) - set(PROBLEM_KEYS)
        if unknown:
            raise ProblemFileError('Unknown problem keys: %s' % ', '.join(sorted(unknown)))

        for key in ('domain', 'D', 'V', 'bc_left', 'bc_right'):
            if key not in data:
                raise ProblemFileError('Missing problem key "%s"' % key)

        domain = data['domain']
        if not (isinstance(domain, (list, tuple)) and len(domain) == 2
                and all(isinstance(value, (int, float)) for value in domain)):
            raise ProblemFileError('"domain" must be a pair of numbers')
        domain = (float(domain[0]), float(domain[1]))

        def field(key, source):
            if not isinstance(source, str):
                raise ProblemFileError('"%s" must be an expression string' % key)
            return coeffs.parse_field(source, domain)

        def condition(key):
            entry = data[key]
            if not isinstance(entry, dict) or set(entry) != {'b0', 'b1'}:
                raise ProblemFileError('"%s" must be an object with keys b0, b1' % key)
            return BoundaryCondition(float(entry['b0']), float(entry['b1']))

        poles = []
        for index, entry in enumerate(data.get('poles', [])):
            if not isinstance(entry, dict) or set(entry) != {'alpha', 'W'}:
                raise ProblemFileError('Pole %d must be an object with keys alpha, W' % index)
            poles.append(Pole(float(entry['alpha']), field('poles[%d].W' % index, entry['W'])))

        return cls(
            domain=domain,
            D=field('D', data['D']),
            V=field('V', data['V']),
            W0=field('W0', data.get('W0', '1')),
            poles=tuple(poles),
            bc_left=condition('bc_left'),
            bc_right=condition('bc_right')
        )

    @classmethod
    def load(cls, path: str) -> 'PencilProblem':
        try:
            with open(path) as handle:
                data = json.load(handle)
        except (OSError, ValueError) as exc:
            raise ProblemFileError('Could not read problem file "%s": %s' % (path, exc))

        return cls.from_dict(data)

    def describe(self) -> dict:
        """Problem-file shaped mapping; non-expression fields are described."""
        return {
            'domain': list(self.domain),
            'D': self.D.describe(),
            'V': self.V.describe(),
            'W0': self.W0.describe(),
            'poles': [{'alpha': pole.alpha, 'W': pole.W.describe()} for pole in self.poles],
            'bc_left': self.bc_left.to_dict(),
            'bc_right': self.bc_right.to_dict(),
        }

    def to_dict(self) -> dict:
        """Problem-file mapping.

        Raises:
            ProblemFileError: A field is not expression-backed
        """
        fields = [self.D, self.V, self.W0] + [pole.W for pole in self.poles]
        if not all(isinstance(field, ExpressionField) for field in fields):
            raise ProblemFileError('Only expression-backed problems can be written as problem files')
        return self.describe()

    def dump_json(self) -> str:
        return json.dumps(self.to_dict(), indent=4, sort_keys=True)


@dataclasses.dataclass(frozen=True)
class DiscreteGrid:
    """Uniform grid with n_x cells; unknowns live on the n_x - 1 interior nodes."""

    n_x: int
    domain: Tuple[float, float]

    def __post_init__(self):
        if int(self.n_x) != self.n_x or self.n_x < MIN_CELLS:
            raise InputError('Grid needs an integer n_x >= %d, got %r' % (MIN_CELLS, self.n_x))
        object.__setattr__(self, 'n_x', int(self.n_x))

    @classmethod
    def on(cls, problem: PencilProblem, n_x: int) -> 'DiscreteGrid':
        return cls(n_x, problem.domain)

    @property
    def dx(self) -> float:
        a, b = self.domain
        return (b - a) / self.n_x

    @property
    def nodes(self) -> np.ndarray:
        return coeffs.uniform_grid(self.domain, self.n_x)

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]

    @property
    def half_points(self) -> np.ndarray:
        nodes = self.nodes
        return 0.5 * (nodes[:-1] + nodes[1:])


@dataclasses.dataclass(frozen=True, eq=False)
class EigenPair:
    """One accepted eigenvalue with its eigenvector blocks.

    Attributes:
        lam (float): Eigenvalue
        j (int): Interval index
        k (int): Sign changes of u
        u (np.ndarray): Interior values, max-norm 1, first nonzero entry positive
        v (tuple): Auxiliary vectors, one per pole
        imag_magnitude (float): |Im| of the raw eigenvalue
        residual (float): max ‖vᵢ - Wᵢ u/(λ - αᵢ)‖∞
        near_pole (bool): λ within the near-pole zone
    """

    lam: float
    j: int
    k: int
    u: np.ndarray
    v: Tuple[np.ndarray, ...]
    imag_magnitude: float
    residual: float
    near_pole: bool


@dataclasses.dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Indexed spectrum of a discretized pencil."""

    problem: PencilProblem
    grid: DiscreteGrid
    eigenpairs: Tuple[EigenPair, ...]
    discarded: Tuple[complex, ...]
    reality_tol: float = REALITY_TOL

    def interval(self, j: int) -> List[EigenPair]:
        return [pair for pair in self.eigenpairs if pair.j == j]

    def eigenvalues(self, j: int) -> np.ndarray:
        return np.array([pair.lam for pair in self.eigenpairs if pair.j == j])

    def find(self, j: int, k: int) -> EigenPair:
        """First eigenpair of interval j with k sign changes."""
        for pair in self.eigenpairs:
            if pair.j == j and pair.k == k:
                return pair
        raise InputError('No eigenpair with j = %d, k = %d' % (j, k))

    def to_rows(self) -> List[dict]:
        return [
            {
                'j': pair.j,
                'k': pair.k,
                'lambda': pair.lam,
                'imag_magnitude': pair.imag_magnitude,
                'residual': pair.residual,
                'near_pole': pair.near_pole,
            }
            for pair in self.eigenpairs
        ]

    def to_dict(self, eigenfunctions: bool = False) -> dict:
        """Result mapping; with `eigenfunctions`, each pair carries u and v
        sampled on the interior nodes listed under "x".
        """
        rows = self.to_rows()
        if eigenfunctions:
            rows = [dict(row, u=pair.u.tolist(), v=[block.tolist() for block in pair.v])
                    for row, pair in zip(rows, self.eigenpairs)]

        return {
            'problem': self.problem.describe(),
            'n_x': self.grid.n_x,
            'reality_tol': self.reality_tol,
            'x': self.grid.interior.tolist(),
            'eigenpairs': rows,
            'discarded': [[value.real, value.imag] for value in self.discarded],
        }

    def dump_json(self, eigenfunctions: bool = False) -> str:
        return json.dumps(self.to_dict(eigenfunctions), indent=4, sort_keys=True)


################
## Operations ##
################

def classify_interval(lam: float, poles: Sequence[float]) -> int:
    """Index j with α_j < λ < α_{j+1}.

    Raises:
        PoleError: λ equals a pole to machine precision
    """
    for alpha in poles:
        if abs(lam - alpha) <= 4.0 * np.finfo(float).eps * max(1.0, abs(alpha)):
            raise PoleError('λ = %r coincides with pole %r' % (lam, alpha))

    return bisect.bisect_right(list(poles), lam)


def count_sign_changes(u) -> int:
    """Sign changes of `u`, ignoring entries below 1e-10 of its max-norm.

    Raises:
        InputError: Fewer than 2 entries or an all-zero vector
    """
    u = np.asarray(u, dtype=float)

    if u.size < 2:
        raise InputError('Need at least 2 entries to count sign changes')

    norm = np.abs(u).max()
    if norm == 0.0:
        raise InputError('Cannot count sign changes of the zero vector')

    kept = u[np.abs(u) >= SIGN_CHANGE_FLOOR * norm]

    return int(np.count_nonzero(kept[:-1] * kept[1:] < 0.0))


def _elimination_coefficients(bc_left: BoundaryCondition, bc_right: BoundaryCondition, dx: float):
    """Coefficients c with u_boundary = c·(4u_next - u_nextnext)."""
    coefficients = []

    for condition, sign, side in ((bc_left, -1.0, 'left'), (bc_right, 1.0, 'right')):
        denominator = 3.0 * condition.b1 + sign * 2.0 * dx * condition.b0
        if abs(denominator) <= 1e-14 * (abs(3.0 * condition.b1) + abs(2.0 * dx * condition.b0)):
            raise InputError('Singular %s boundary elimination for (b0, b1) = (%r, %r) at dx = %r'
                             % (side, condition.b0, condition.b1, dx))
        coefficients.append(condition.b1 / denominator)

    return coefficients


def diffusion_operator(D_half: np.ndarray, dx: float, bc_left: BoundaryCondition,
                       bc_right: BoundaryCondition) -> np.ndarray:
    """Matrix of -(D u_x)_x on the interior nodes.

    D is taken at the half points; the boundary values are eliminated with the
    second-order one-sided derivative stencils and the Robin data.

    Args:
        D_half (np.ndarray): D(x_{i+1/2}) for i = 0..n_x-1
        dx (float): Cell width
        bc_left (BoundaryCondition): Data at a
        bc_right (BoundaryCondition): Data at b

    Returns:
        np.ndarray: (n_x - 1) × (n_x - 1) matrix
    """
    inv = 1.0 / (dx * dx)
    main = (D_half[:-1] + D_half[1:]) * inv
    off = -D_half[1:-1] * inv

    L = np.diag(main) + np.diag(off, 1) + np.diag(off, -1)

    c_left, c_right = _elimination_coefficients(bc_left, bc_right, dx)

    # u_0 = c(4u_1 - u_2) enters row 1 through -D_{1/2} u_0 / dx²
    L[0, 0] -= 4.0 * D_half[0] * c_left * inv
    L[0, 1] += D_half[0] * c_left * inv
    L[-1, -1] -= 4.0 * D_half[-1] * c_right * inv
    L[-1, -2] += D_half[-1] * c_right * inv

    return L


def _positive(values: np.ndarray, xs: np.ndarray, name: str):
    bad = np.flatnonzero(~(values > 0.0))
    if bad.size:
        raise InputError('%s must be positive; %s = %r at x = %r' % (name, name, values[bad[0]], xs[bad[0]]))


def assemble_linearization(p: PencilProblem, g: DiscreteGrid) -> np.ndarray:
    """Builds the (N + 1)(n_x - 1) square matrix of the auxiliary-function
    linearization.

    Raises:
        InputError: D, W0 or Wᵢ not positive at a sample; singular boundary
            elimination
    """
    xs, halves = g.interior, g.half_points
    m = xs.size

    D_half = p.D.values(halves)
    _positive(D_half, halves, 'D')

    W0 = p.W0.values(xs)
    _positive(W0, xs, 'W0')

    weights = []
    for index, pole in enumerate(p.poles, start=1):
        W = pole.W.values(xs)
        _positive(W, xs, 'W%d' % index)
        weights.append(W)

    L = diffusion_operator(D_half, g.dx, p.bc_left, p.bc_right)

    size = (p.N + 1) * m
    M = np.zeros((size, size))

    M[:m, :m] = (L + np.diag(p.V.values(xs))) / W0[:, None]

    for index, (pole, W) in enumerate(zip(p.poles, weights), start=1):
        block = slice(index * m, (index + 1) * m)
        M[:m, block] = np.diag(1.0 / W0)
        M[block, :m] = np.diag(W)
        M[block, block] = pole.alpha * np.eye(m)

    logger.debug('Assembled linearization of size %d (N = %d, n_x = %d)', size, p.N, g.n_x)

    return M


def _real_part_vector(vector: np.ndarray) -> np.ndarray:
    # Rotate so the largest component is real, then drop the imaginary residue
    pivot = vector[np.argmax(np.abs(vector))]
    return (vector * (np.conj(pivot) / abs(pivot))).real


def _accept(eigenvalues: np.ndarray, reality_tol: float):
    scale = np.maximum(1.0, np.abs(eigenvalues.real))
    accepted = np.abs(eigenvalues.imag) <= reality_tol * scale
    rejected = eigenvalues[~accepted]

    if rejected.size > MAX_NONREAL_FRACTION * eigenvalues.size:
        raise RealityViolation('%d of %d eigenvalues are not real (largest |Im| = %.3g)'
                               % (rejected.size, eigenvalues.size, np.abs(rejected.imag).max()))
    if rejected.size:
        logger.warning('Discarding %d non-real eigenvalues (largest |Im| = %.3g)',
                       rejected.size, np.abs(rejected.imag).max())

    return accepted


def auxiliary_residual(lam: float, u: np.ndarray, v: Sequence[np.ndarray], weights: Sequence[np.ndarray],
                       alphas: Sequence[float]) -> float:
    """max over poles of ‖vᵢ - Wᵢ u/(λ - αᵢ)‖∞"""
    return float(max((np.abs(block - W * u / (lam - alpha)).max()
                      for block, W, alpha in zip(v, weights, alphas)), default=0.0))


def solve_spectrum(
p: PencilProblem, g: DiscreteGrid, reality_tol: float = REALITY_TOL) -> SpectrumResult:
    """Computes the full indexed spectrum of the discretized pencil.

    Args:
        p (PencilProblem): Problem
        g (DiscreteGrid): Grid
        reality_tol (float, optional): Defaults to 1e-8. Relative bound on
            |Im λ| for acceptance.

    Raises:
        RealityViolation: More than 1% of eigenvalues are not real
        NumericalError: The eigensolver failed

    Returns:
        SpectrumResult: Eigenpairs sorted by (j, λ)
    """
    M = assemble_linearization(p, g)
    m = g.n_x - 1

    try:
        eigenvalues, vectors = scipy.linalg.eig(M)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise RealityViolation('Dense eigensolve failed: %s' % exc)

    accepted = _accept(eigenvalues, reality_tol)

    xs = g.interior
    alphas = p.alphas
    weights = [pole.W.values(xs) for pole in p.poles]
    pairs = []

    for index in np.flatnonzero(accepted):
        lam = float(eigenvalues[index].real)
        vector = _real_part_vector(vectors[:, index])

        u = vector[:m]
        pivot = np.abs(u).max()
        if pivot == 0.0:
            logger.warning('Eigenvector for λ = %r has no u component; skipped', lam)
            continue

        # Max-norm 1 and positive first significant entry
        significant = u[np.abs(u) >= SIGN_CHANGE_FLOOR * pivot]
        scale = math.copysign(1.0 / pivot, significant[0])
        u = u * scale
        v = tuple(vector[(i + 1) * m:(i + 2) * m] * scale for i in range(p.N))

        pairs.append(EigenPair(
            lam=lam,
            j=classify_interval(lam, alphas),
            k=count_sign_changes(u),
            u=u,
            v=v,
            imag_magnitude=float(abs(eigenvalues[index].imag)),
            residual=auxiliary_residual(lam, u, v, weights, alphas),
            near_pole=any(abs(lam - alpha) < NEAR_POLE_FACTOR * reality_tol for alpha in alphas)
        ))

    pairs.sort(key=lambda pair: (pair.j, pair.lam))

    logger.info('Solved spectrum: %d accepted, %d discarded (n_x = %d)',
                len(pairs), int(np.count_nonzero(~accepted)), g.n_x)

    return SpectrumResult(p, g, tuple(pairs), tuple(complex(value) for value in eigenvalues[~accepted]),
                          reality_tol)


def residual(p: PencilProblem, g: DiscreteGrid, lam: float, u) -> float:
    """‖L u - g(·, λ) u‖∞ / ‖u‖∞ with the assembly stencils."""
    classify_interval(lam, p.alphas)

    u = np.asarray(u, dtype=float)
    if u.shape != (g.n_x - 1,):
        raise InputError('Vector of size %d does not match %d interior nodes' % (u.size, g.n_x - 1))

    L = diffusion_operator(p.D.values(g.half_points), g.dx, p.bc_left, p.bc_right)

    return float(np.abs(L @ u - p.g_values(g.interior, lam) * u).max() / np.abs(u).max())


def principal_eigenvalue(p: PencilProblem, g: DiscreteGrid, reality_tol: float = REALITY_TOL) -> float:
    """Smallest accepted eigenvalue, from eigenvalues alone."""
    eigenvalues = scipy.linalg.eigvals(assemble_linearization(p, g))
    accepted = _accept(eigenvalues, reality_tol)
    return float(eigenvalues[accepted].real.min())


def weighted_principal_eigenvalue(D: CoefficientField, c: CoefficientField, w: CoefficientField,
                                  g: DiscreteGrid, bc_left: BoundaryCondition = BoundaryCondition.neumann(),
                                  bc_right: BoundaryCondition = BoundaryCondition.neumann(),
                                  reality_tol: float = REALITY_TOL) -> float:
    """Smallest μ of -(D φ')' + c φ = μ w φ, with the pencil stencils.

    Raises:
        InputError: w not positive at an interior node
    """
    xs = g.interior
    weight = w.values(xs)
    _positive(weight, xs, 'weight')

    D_half = D.values(g.half_points)
    _positive(D_half, g.half_points, 'D')

    L = diffusion_operator(D_half, g.dx, bc_left, bc_right)
    eigenvalues = scipy.linalg.eigvals((L + np.diag(c.values(xs))) / weight[:, None])
    accepted = _accept(eigenvalues, reality_tol)

    return float(eigenvalues[accepted].real.min())


@dataclasses.dataclass(frozen=True)
class HerglotzCheck:
    """Outcome of pencil_is_herglotz."""

    holds: bool
    failures: Tuple[str, ...]


def pencil_is_herglotz(p: PencilProblem, n_x: int = 100) -> HerglotzCheck:
    """Verifies that g(x, ·) is a rational Herglotz function and D > 0 at
    every sample of an n_x-cell grid, naming each failed condition.
    """
    grid = DiscreteGrid.on(p, n_x)
    failures = []

    D_half = p.D.values(grid.half_points)
    bad = np.flatnonzero(~(D_half > 0.0))
    if bad.size:
        failures.append('D > 0 fails at x = %r' % grid.half_points[bad[0]])

    for x in grid.interior:
        try:
            p.symbol_at(float(x))
        except InputError as exc:
            failures.append('g(x, λ) not Herglotz at x = %r: %s' % (float(x), exc))
            break

    W0 = p.W0.values(grid.interior)
    bad = np.flatnonzero(~(W0 > 0.0))
    if bad.size:
        failures.append('W0 > 0 fails at x = %r' % grid.interior[bad[0]])

    return HerglotzCheck(not failures, tuple(failures))
