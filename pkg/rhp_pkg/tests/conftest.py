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

import pytest

from rhp.core import coeffs
from rhp.core.pencil import BoundaryCondition, PencilProblem, Pole
from rhp.models import presets


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run full-resolution sweeps')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: full-resolution sweep, needs --runslow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return

    skip = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip)


def constant_problem(domain, bc, W0=1.0, poles=()):
    """-u'' = λ W0 u - Σ W/(λ - α) u with constant weights."""
    return PencilProblem(
        domain=domain,
        D=coeffs.constant_field(1.0, domain),
        V=coeffs.constant_field(0.0, domain),
        W0=coeffs.constant_field(W0, domain),
        poles=tuple(Pole(alpha, coeffs.constant_field(W, domain)) for alpha, W in poles),
        bc_left=bc,
        bc_right=bc
    )


@pytest.fixture(scope='session')
def single_pole():
    return presets.load_preset('example39')


@pytest.fixture
def dirichlet_pi():
    return constant_problem((0.0, math.pi), BoundaryCondition.dirichlet())


@pytest.fixture
def neumann_pi():
    return constant_problem((0.0, math.pi), BoundaryCondition.neumann())


@pytest.fixture
def neumann_unit():
    return constant_problem((0.0, 1.0), BoundaryCondition.neumann())


@pytest.fixture
def neumann_unit_pole():
    return constant_problem((0.0, 1.0), BoundaryCondition.neumann(), poles=((0.0, 1.0),))


@pytest.fixture
def make_constant():
    return constant_problem
