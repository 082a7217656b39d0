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

import numpy as np
import pytest

from rhp.core import pencil
from rhp.core.errors import InputError, PoleError
from rhp.core.pencil import BoundaryCondition, DiscreteGrid
from rhp.methods import prufer
from rhp.models import epi, presets
from rhp.models.epi import RabiesParams


@pytest.mark.parametrize('bc, start, target', [
    (BoundaryCondition.dirichlet(), math.pi / 2, -math.pi / 2),
    (BoundaryCondition.neumann(), 0.0, 0.0),
    (BoundaryCondition(1.0, 1.0), -math.pi / 4, -math.pi / 4),
])
def test_boundary_angles(bc, start, target):
    assert prufer.initial_angle(bc) == pytest.approx(start)
    assert prufer.target_angle(bc, 0) == pytest.approx(target)
    assert prufer.target_angle(bc, 2) == pytest.approx(target - 2 * math.pi)


@pytest.mark.parametrize('theta_a, theta_b, expected', [
    (math.pi / 2, -math.pi / 2, 0),
    (math.pi / 2, -3 * math.pi / 2, 1),
    (0.0, -math.pi, 1),
    (0.0, -2 * math.pi, 2),
    (0.0, 0.3, 0),
])
def test_count_crossings(theta_a, theta_b, expected):
    assert prufer.count_crossings(theta_a, theta_b) == expected


def test_neumann_constant_mode(neumann_unit):
    path = prufer.integrate_prufer(neumann_unit, 0.0)

    assert path.theta_b == pytest.approx(0.0, abs=1e-9)
    assert path.crossings == 0


def test_dirichlet_ground_state_angle(dirichlet_pi):
    path = prufer.integrate_prufer(dirichlet_pi, 1.0)

    assert path.start.theta == pytest.approx(math.pi / 2)
    assert path.theta_b == pytest.approx(-math.pi / 2, abs=1e-7)
    assert path.crossings == 0


def test_dirichlet_second_mode_angle(dirichlet_pi):
    path = prufer.integrate_prufer(dirichlet_pi, 4.0)

    assert path.theta_b == pytest.approx(-3 * math.pi / 2, abs=1e-7)
    assert path.crossings == 1
    assert path.transversal


@pytest.mark.parametrize('j, grid', [
    (0, [-5.0, 0.0, 1.0, 1.5, 1.9]),
    (1, [2.5, 3.0, 5.0, 8.0, 12.0]),
])
def test_angle_decreases_in_lambda(single_pole, j, grid):
    angles = [prufer.integrate_prufer(single_pole, lam).theta_b for lam in grid]

    assert np.all(np.diff(angles) < 0.0)


def test_roots_recorded(single_pole):
    path = prufer.integrate_prufer(single_pole, 9.0)

    assert path.crossings == 2
    assert path.transversal
    assert path.evaluations > 0


def test_pole_refusal(single_pole):
    with pytest.raises(PoleError):
        prufer.integrate_prufer(single_pole, 2.0 + 1e-8)
    with pytest.raises(InputError):
        prufer.integrate_prufer(single_pole, math.inf)


def test_shoot_dirichlet_ground_state(dirichlet_pi):
    result = prufer.shoot_eigenvalue(dirichlet_pi, 0, 0)

    assert result.lam == pytest.approx(1.0, abs=1e-6)
    assert result.crossings == 0
    assert result.bracket[0] <= result.lam <= result.bracket[1]


def test_shoot_neumann_modes(neumann_pi):
    for k in range(4):
        assert prufer.shoot_eigenvalue(neumann_pi, 0, k).lam == pytest.approx(k * k, abs=1e-6)


def test_shoot_upper_interval(single_pole):
    result = prufer.shoot_eigenvalue(single_pole, 1, 1)

    assert result.lam == pytest.approx(4.88, abs=0.05)
    assert result.theta_b == pytest.approx(result.target, abs=1e-6)
    assert result.target == pytest.approx(-1.5 * math.pi)
    assert set(result.to_dict()) == {'lam', 'theta_b', 'target', 'crossings', 'iterations', 'bracket'}


def test_shoot_lower_interval(single_pole):
    result = prufer.shoot_eigenvalue(single_pole, 0, 0)

    assert result.lam == pytest.approx(1.22, abs=0.02)
    assert result.lam < 2.0


@pytest.mark.parametrize('k', [-1, 1.5])
def test_shoot_rejects_index(single_pole, k):
    with pytest.raises(InputError):
        prufer.shoot_eigenvalue(single_pole, 1, k)


def test_shoot_rejects_interval(single_pole):
    with pytest.raises(InputError):
        prufer.shoot_eigenvalue(single_pole, 2, 0)


@pytest.mark.parametrize('name', ['example39', 'rabies-fig3', 'rabies-vaccine'])
def test_shooting_matches_dense_solve(name):
    p = presets.load_preset(name)
    if isinstance(p, RabiesParams):
        p = epi.build_stability_pencil(p)
    spectrum = pencil.solve_spectrum(p, DiscreteGrid.on(p, 400))

    for j in range(2):
        for k in range(5):
            shot = prufer.shoot_eigenvalue(p, j, k)
            assert shot.crossings == k == spectrum.find(j, k).k
            assert shot.lam == pytest.approx(spectrum.find(j, k).lam, rel=1e-3)
