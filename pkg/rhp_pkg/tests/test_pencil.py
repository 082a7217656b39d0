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

import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from rhp.core import coeffs, pencil
from rhp.core.errors import InputError, PoleError, ProblemFileError
from rhp.core.herglotz import RationalHerglotz, solve
from rhp.core.pencil import BoundaryCondition, DiscreteGrid, PencilProblem, Pole
from rhp.models import presets
from rhp.models.presets import SINGLE_POLE

# Reference rows of the single-pole Dirichlet pencil at n_x = 100
LOWER_ROW = [1.22, 1.75, 1.92, 1.95, 1.97]
UPPER_ROW = [2.59, 4.88, 9.65, 16.53, 25.41]


@pytest.fixture(scope='module')
def single_pole_spectrum(single_pole):
    return pencil.solve_spectrum(single_pole, DiscreteGrid.on(single_pole, 100))


########################
## Problem definition ##
########################

def test_boundary_condition_kinds_and_angles():
    assert BoundaryCondition.dirichlet().kind == 'dirichlet'
    assert BoundaryCondition.neumann().kind == 'neumann'
    assert BoundaryCondition(1.0, 1.0).kind == 'robin'

    assert BoundaryCondition.dirichlet().angle == pytest.approx(math.pi / 2)
    assert BoundaryCondition.neumann().angle == pytest.approx(0.0)
    assert BoundaryCondition(1.0, 1.0).angle == pytest.approx(-math.pi / 4)

    with pytest.raises(InputError):
        BoundaryCondition(0.0, 0.0)


def test_grid_layout():
    grid = DiscreteGrid(10, (0.0, 2.0))

    assert grid.dx == pytest.approx(0.2)
    assert grid.interior.size == 9
    assert_allclose(grid.half_points[[0, -1]], [0.1, 1.9])

    with pytest.raises(InputError):
        DiscreteGrid(3, (0.0, 1.0))


def test_pole_order_enforced():
    domain = (0.0, 1.0)
    one = coeffs.constant_field(1.0, domain)

    with pytest.raises(InputError):
        PencilProblem(domain, one, one, one, poles=(Pole(2.0, one), Pole(1.0, one)))


def test_intervals_and_symbol(single_pole):
    assert single_pole.N == 1
    assert single_pole.interval(0) == (-math.inf, 2.0)
    assert single_pole.interval(1) == (2.0, math.inf)
    with pytest.raises(InputError):
        single_pole.interval(2)

    x, lam = 0.7, 3.0
    expected = lam - math.sin(x) - (0.2 + math.cos(x) ** 2) / (lam - 2.0)

    assert single_pole.g(x, lam) == pytest.approx(expected)
    assert single_pole.symbol_at(x)(lam) == pytest.approx(expected)
    assert isinstance(single_pole.symbol_at(x), RationalHerglotz)

    with pytest.raises(PoleError):
        single_pole.g_values([0.5], 2.0)


def test_problem_file_round_trip(tmp_path, single_pole):
    path = tmp_path / 'problem.json'
    path.write_text(single_pole.dump_json())

    loaded = PencilProblem.load(str(path))

    assert loaded.describe() == single_pole.describe()
    assert loaded.bc_left.kind == 'dirichlet'
    assert loaded.alphas == (2.0,)


def test_problem_file_defaults_weight():
    data = dict(SINGLE_POLE)
    del data['W0']

    assert PencilProblem.from_dict(data).W0(1.0) == 1.0


@pytest.mark.parametrize('change', [
    {'extra': 1},
    {'bc_left': {'b0': 1.0}},
    {'domain': [0.0]},
    {'D': 1.0},
    {'poles': [{'alpha': 2.0}]},
    {'V': 'sin('},
])
def test_problem_file_errors(change):
    data = dict(SINGLE_POLE, **change)

    with pytest.raises(InputError):
        PencilProblem.from_dict(data)


def test_problem_file_missing_key():
    data = dict(SINGLE_POLE)
    del data['D']

    with pytest.raises(ProblemFileError, match='"D"'):
        PencilProblem.from_dict(data)


def test_unreadable_problem_file(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{not json')

    with pytest.raises(ProblemFileError):
        PencilProblem.load(str(path))


def test_sampled_problem_cannot_be_written(single_pole):
    sampled = PencilProblem(single_pole.domain, coeffs.sample_field(single_pole.D, 10), single_pole.V, single_pole.W0,
                            single_pole.poles, single_pole.bc_left, single_pole.bc_right)

    with pytest.raises(ProblemFileError):
        sampled.to_dict()
    assert sampled.describe()['D'].startswith('sampled(')


def test_herglotz_check(single_pole):
    assert pencil.pencil_is_herglotz(single_pole).holds

    data = dict(SINGLE_POLE, poles=[{'alpha': 2.0, 'W': '-1'}])
    check = pencil.pencil_is_herglotz(PencilProblem.from_dict(data))

    assert not check.holds
    assert 'not Herglotz' in check.failures[0]


def test_herglotz_check_names_diffusion():
    data = dict(SINGLE_POLE, D='cos(x)')
    check = pencil.pencil_is_herglotz(PencilProblem.from_dict(data))

    assert not check.holds
    assert check.failures[0].startswith('D > 0')


##############
## Indexing ##
##############

def test_count_sign_changes():
    assert pencil.count_sign_changes([1.0, 1.0, 1.0]) == 0
    assert pencil.count_sign_changes([1.0, -1.0, 1.0]) == 2
    assert pencil.count_sign_changes([1.0, 1e-12, -1.0]) == 1
    assert pencil.count_sign_changes([1.0, -1e-12, 1.0]) == 0

    with pytest.raises(InputError):
        pencil.count_sign_changes([0.0, 0.0])
    with pytest.raises(InputError):
        pencil.count_sign_changes([1.0])


def test_classify_interval():
    assert pencil.classify_interval(1.22, [2.0]) == 0
    assert pencil.classify_interval(4.88, [2.0]) == 1
    assert pencil.classify_interval(-5.0, []) == 0
    assert pencil.classify_interval(1.5, [1.0, 2.0]) == 1

    with pytest.raises(PoleError):
        pencil.classify_interval(2.0, [2.0])


##############
## Assembly ##
##############

def test_assembled_size(single_pole):
    assert pencil.assemble_linearization(single_pole, DiscreteGrid.on(single_pole, 100)).shape == (198, 198)


def test_positivity_checked_at_assembly(single_pole):
    data = dict(SINGLE_POLE, W0='cos(x)')

    with pytest.raises(InputError, match='W0'):
        pencil.assemble_linearization(PencilProblem.from_dict(data), DiscreteGrid(100, single_pole.domain))


def test_singular_robin_elimination():
    # 3 b1 + 2 dx b0 vanishes on the right end
    domain = (0.0, 1.0)
    one = coeffs.constant_field(1.0, domain)
    p = PencilProblem(domain, one, one, one, bc_right=BoundaryCondition(-1.5 * 10, 1.0))

    with pytest.raises(InputError, match='Singular right'):
        pencil.assemble_linearization(p, DiscreteGrid(10, domain))


def test_dirichlet_ground_state(dirichlet_pi):
    grid = DiscreteGrid.on(dirichlet_pi, 100)
    eigenvalues = np.linalg.eigvals(pencil.assemble_linearization(dirichlet_pi, grid)).real

    assert eigenvalues.min() == pytest.approx(1.0, abs=1e-3)


def test_grid_convergence(dirichlet_pi):
    def errors(n_x):
        result = pencil.solve_spectrum(dirichlet_pi, DiscreteGrid.on(dirichlet_pi, n_x))
        return np.abs(result.eigenvalues(0)[:6] - np.arange(1, 7) ** 2)

    assert np.all(errors(50) / errors(100) >= 3.5)


def test_constant_pole_modes_match_scalar_roots(neumann_unit_pole):
    result = pencil.solve_spectrum(neumann_unit_pole, DiscreteGrid.on(neumann_unit_pole, 200))
    f = RationalHerglotz(C=1.0, B=0.0, poles=((0.0, 1.0),))

    for m in range(3):
        for j in range(2):
            expected = solve(f, (m * math.pi) ** 2, j)
            assert result.find(j, m).lam == pytest.approx(expected, rel=1e-3)


def test_neumann_cosine_modes(neumann_unit):
    result = pencil.solve_spectrum(neumann_unit, DiscreteGrid.on(neumann_unit, 100))

    assert_allclose(result.eigenvalues(0)[:3], (np.arange(3) * math.pi) ** 2, rtol=5e-3, atol=1e-6)
    assert [pair.k for pair in result.interval(0)[:3]] == [0, 1, 2]


def test_weighted_principal_eigenvalue():
    domain = (0.0, 1.0)
    mu = pencil.weighted_principal_eigenvalue(coeffs.constant_field(1.0, domain), coeffs.constant_field(2.0, domain),
                                              coeffs.constant_field(4.0, domain), DiscreteGrid(50, domain))

    assert mu == pytest.approx(0.5, rel=1e-10)


def test_weighted_principal_needs_positive_weight():
    domain = (0.0, 1.0)

    with pytest.raises(InputError, match='weight'):
        pencil.weighted_principal_eigenvalue(coeffs.constant_field(1.0, domain), coeffs.constant_field(2.0, domain),
                                             coeffs.parse_field('x - 0.5', domain), DiscreteGrid(50, domain))


##############
## Spectrum ##
##############

def test_single_pole_numerical_rows(single_pole_spectrum):
    assert_allclose(single_pole_spectrum.eigenvalues(0)[:5], LOWER_ROW, atol=0.02)

    for computed, reference in zip(single_pole_spectrum.eigenvalues(1)[:5], UPPER_ROW):
        assert abs(computed - reference) <= max(0.02, 0.015 * reference)


def test_single_pole_counts(single_pole_spectrum):
    assert len(single_pole_spectrum.interval(0)) == 99
    assert len(single_pole_spectrum.interval(1)) == 99
    assert single_pole_spectrum.discarded == ()


@pytest.mark.parametrize('name, fields', [
    ('example39', {}),
    ('capasso', {'gprime': '1 + x'}),
    ('morphogen', {'abar': '0.5'}),
])
def test_preset_spectrum_is_real(name, fields):
    p = presets.load_preset(name, fields)
    spectrum = pencil.solve_spectrum(p, DiscreteGrid.on(p, 100))

    assert spectrum.discarded == ()
    assert spectrum.eigenpairs
    for pair in spectrum.eigenpairs:
        assert pair.imag_magnitude <= 1e-8 * max(1.0, abs(pair.lam))


def test_oscillation_indexing(single_pole_spectrum):
    for j in range(2):
        pairs = single_pole_spectrum.interval(j)[:10]

        assert [pair.k for pair in pairs] == list(range(10))
        assert np.all(np.diff([pair.lam for pair in pairs]) > 0.0)


def test_third_eigenfunction_of_upper_interval(single_pole_spectrum):
    pair = single_pole_spectrum.interval(1)[3]

    assert pair.k == 3
    assert pencil.count_sign_changes(pair.u) == 3
    assert single_pole_spectrum.find(1, 3) is pair


def test_eigenvector_normalization(single_pole_spectrum):
    for pair in single_pole_spectrum.eigenpairs[:20]:
        assert np.abs(pair.u).max() == pytest.approx(1.0)
        assert pair.u[np.abs(pair.u) >= 1e-10][0] > 0.0


def test_auxiliary_consistency(single_pole_spectrum):
    for pair in single_pole_spectrum.eigenpairs:
        if not pair.near_pole:
            assert pair.residual <= 1e-6


def test_residual_of_eigenpairs(single_pole, single_pole_spectrum):
    grid = single_pole_spectrum.grid

    for j in range(2):
        for pair in single_pole_spectrum.interval(j)[:5]:
            assert pencil.residual(single_pole, grid, pair.lam, pair.u) < 1e-8 * abs(pair.lam)


def test_residual_rejects_random_vector(single_pole, single_pole_spectrum):
    u = np.random.default_rng(0).standard_normal(99)

    assert pencil.residual(single_pole, single_pole_spectrum.grid, 0.0, u) > 1e-3

    with pytest.raises(PoleError):
        pencil.residual(single_pole, single_pole_spectrum.grid, 2.0, u)
    with pytest.raises(InputError):
        pencil.residual(single_pole, single_pole_spectrum.grid, 0.0, u[:50])


def test_residual_of_constant_mode(neumann_unit_pole):
    grid = DiscreteGrid.on(neumann_unit_pole, 100)

    assert pencil.residual(neumann_unit_pole, grid, 1.0, np.ones(99)) < 1e-10
    assert pencil.residual(neumann_unit_pole, grid, -1.0, np.ones(99)) < 1e-10


def test_find_missing_pair(single_pole_spectrum):
    with pytest.raises(InputError):
        single_pole_spectrum.find(1, 500)


def test_accumulation_below_pole(single_pole):
    spectrum = pencil.solve_spectrum(single_pole, DiscreteGrid.on(single_pole, 200))
    lower = spectrum.eigenvalues(0)

    assert np.all(np.diff(lower[:12]) > 0.0)
    assert np.all(np.diff(np.diff(lower[:12])) < 0.0)

    coarse = pencil.solve_spectrum(single_pole, DiscreteGrid.on(single_pole, 50)).eigenvalues(0)
    assert coarse.max() < lower.max() < 2.0


def test_spectrum_rows_and_json(single_pole_spectrum):
    rows = single_pole_spectrum.to_rows()

    assert set(rows[0]) == {'j', 'k', 'lambda', 'imag_magnitude', 'residual', 'near_pole'}
    assert len(rows) == 198

    plain = json.loads(single_pole_spectrum.dump_json())
    assert set(plain) == {'problem', 'n_x', 'reality_tol', 'x', 'eigenpairs', 'discarded'}
    assert len(plain['x']) == 99
    assert 'u' not in plain['eigenpairs'][0]

    full = single_pole_spectrum.to_dict(eigenfunctions=True)
    assert len(full['eigenpairs'][0]['u']) == 99
    assert len(full['eigenpairs'][0]['v']) == 1


def test_eigenvalues_in_their_intervals(single_pole_spectrum):
    for pair in single_pole_spectrum.eigenpairs:
        lower, upper = single_pole_spectrum.problem.interval(pair.j)
        assert lower < pair.lam < upper


def test_upper_interval_grows_quadratically(single_pole):
    upper = pencil.solve_spectrum(single_pole, DiscreteGrid.on(single_pole, 200)).eigenvalues(1)

    for mode in range(5, 11):
        assert upper[mode - 1] / mode ** 2 == pytest.approx(1.0, rel=0.05)


def test_eigenvalues_distinct(single_pole_spectrum):
    for j in range(2):
        pairs = [pair for pair in single_pole_spectrum.interval(j) if not pair.near_pole]
        assert np.all(np.diff([pair.lam for pair in pairs]) > 1e-9)
