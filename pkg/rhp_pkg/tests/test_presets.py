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

from rhp.core import pencil
from rhp.core.errors import InputError
from rhp.core.pencil import PencilProblem
from rhp.models import presets
from rhp.models.epi import HeterogeneityKind, RabiesParams


def test_preset_names():
    assert presets.preset_names() == ('example39', 'capasso', 'morphogen', 'rabies-fig3', 'rabies-vaccine')


def test_single_pole_preset():
    p = presets.load_preset('example39')

    assert isinstance(p, PencilProblem)
    assert p.domain == (0.0, math.pi)
    assert p.alphas == (2.0,)
    assert p.bc_left.kind == p.bc_right.kind == 'dirichlet'
    assert p.poles[0].W(0.0) == pytest.approx(1.2)


def test_rabies_vaccine():
    rp = presets.load_preset('rabies-vaccine')

    assert isinstance(rp, RabiesParams)
    assert (rp.a, rp.b, rp.sigma, rp.K) == pytest.approx((0.0027, 0.00135, 0.0357, 1.5))
    assert rp.beta(0.5) == pytest.approx(0.2192 * 1.5)
    assert rp.alpha(0.3) == pytest.approx(0.2)
    assert rp.D(0.3) == pytest.approx(0.1371)


def test_constant_override():
    assert presets.load_preset('rabies-fig3', {'K': '2*0.5'}).K == pytest.approx(1.0)
    assert presets.load_preset('rabies-fig3', {'beta': '0.3*x'}).beta(0.5) == pytest.approx(0.15)


def test_unknown_preset():
    with pytest.raises(InputError, match='Unknown preset'):
        presets.load_preset('nope')


def test_unknown_field():
    with pytest.raises(InputError, match='does not take'):
        presets.load_preset('example39', {'foo': '1'})


def test_missing_field():
    with pytest.raises(InputError, match='--field gprime=EXPR'):
        presets.load_preset('capasso')


def test_constant_must_not_vary():
    with pytest.raises(InputError, match='must not depend on x'):
        presets.load_preset('rabies-fig3', {'K': 'x'})


def test_capasso():
    p = presets.load_preset('capasso', {'gprime': '1 + x'})

    assert p.alphas == (2.0,)
    assert p.D(0.5) == pytest.approx(0.1)
    assert p.V(0.5) == pytest.approx(1.0)
    assert p.poles[0].W(0.5) == pytest.approx(1.5)
    assert pencil.pencil_is_herglotz(p).holds


def test_capasso_rejects_signs():
    with pytest.raises(InputError, match='a12'):
        presets.load_preset('capasso', {'gprime': '1', 'a12': '-1'})


def test_morphogen():
    p = presets.load_preset('morphogen', {'abar': '0.5'})

    assert p.alphas == pytest.approx((2.5,))
    assert p.V(0.2) == pytest.approx(0.8)
    assert p.poles[0].W(0.2) == pytest.approx(1.2)
    assert p.bc_left.kind == 'neumann'
    assert p.bc_right.kind == 'dirichlet'


def test_morphogen_needs_constant_steady_state():
    with pytest.raises(InputError, match='constant steady state'):
        presets.load_preset('morphogen', {'abar': 'x'})
    with pytest.raises(InputError, match='non-negative'):
        presets.load_preset('morphogen', {'abar': '-1'})


@pytest.mark.parametrize('kind, value, field, x, expected', [
    (HeterogeneityKind.BETA_C1, 0.5, 'beta', 0.0, 0.2192 * 1.5),
    (HeterogeneityKind.ALPHA_C2, 0.5, 'alpha', 0.0, 0.3),
    (HeterogeneityKind.DIFFUSION_D0, 0.1, 'D', 0.0, 0.2),
    (HeterogeneityKind.DIFFUSION_C3, 0.5, 'D', 1.0, 0.0685 * 0.5),
])
def test_heterogeneity_recipe(kind, value, field, x, expected):
    rp = presets.heterogeneity_recipe(kind)(value)

    assert getattr(rp, field)(x) == pytest.approx(expected)


def test_diffusion_recipes_keep_panel_fields():
    rp = presets.heterogeneity_recipe(HeterogeneityKind.DIFFUSION_C3, c1=0.5, c2=0.2)(0.3)

    assert rp.beta(0.0) == pytest.approx(0.2192 * 1.5)
    assert rp.alpha(0.5) == pytest.approx((2.0 / math.pi) * (1.0 + 0.2 * (1.0 - 2.0 / math.pi)))
