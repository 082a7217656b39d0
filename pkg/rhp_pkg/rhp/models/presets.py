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

"""Named problems with their literature parameter values.

Pencil presets are kept as problem-file mappings; rabies presets are
parameter sets for rhp.models.epi. Presets that depend on a steady state or a
nonlinearity take those as `fields` (name -> expression string); the listed
constants may be overridden the same way.
"""

import dataclasses
import logging
import math
from typing import Callable, Dict, Optional, Tuple, Union

from ..core import coeffs
from ..core.errors import InputError
from ..core.pencil import PencilProblem
from .epi import DOMAIN, HeterogeneityKind, RabiesParams

# Define logger
logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Preset:
    """A named problem source.

    Attributes:
        name (str): Preset name
        summary (str): One-line description
        constants (dict): Overridable constants and their defaults
        required (tuple): Fields that must be supplied
        build (callable): Maps the resolved values to the problem
    """

    name: str
    summary: str
    constants: Dict[str, Union[float, str]]
    required: Tuple[str, ...]
    build: Callable[[Dict[str, str]], Union[PencilProblem, RabiesParams]]


def _constant(name: str, source) -> float:
    """Evaluates an x-free expression."""
    expr = coeffs.parse_expr(str(source))
    if any(isinstance(node, coeffs.Variable) for node in coeffs.iter_nodes(expr)):
        raise InputError('Constant %s must not depend on x: %s' % (name, source))
    return coeffs.eval_expr(expr, 0.0)


##################################
## Single-pole Dirichlet pencil ##
##################################

# -u'' + sin(x) u = λu - (0.2 + cos²x)/(λ - 2) u with u(0) = 0 = u(π).
# Lowest eigenvalues: about 1.22, 1.75 below the pole and 2.6, 4.9, 9.7 above it.
SINGLE_POLE = {
    'domain': [0.0, math.pi],
    'D': '1',
    'V': 'sin(x)',
    'W0': '1',
    'poles': [{'alpha': 2.0, 'W': '0.2 + cos(x)^2'}],
    'bc_left': {'b0': 1.0, 'b1': 0.0},
    'bc_right': {'b0': 1.0, 'b1': 0.0},
}


def _single_pole(values):
    return PencilProblem.from_dict(SINGLE_POLE)


#############################
## Propagule disease model ##
#############################

# u_t = d u_xx - a11 u + a12 v,  v_t = g(u) - a22 v.  With μ = -λ the
# linearization reads -d p'' = μ p - a11 p - a12 g'(ū)/(μ - a22) p, a pencil
# with V = a11 and the pole a22 weighted by a12 g'. The model fixes only
# the signs (d, aij > 0, g' > 0); the defaults below are illustrative.
CAPASSO_CONSTANTS = {'a11': 1.0, 'a12': 1.0, 'a22': 2.0, 'd': 0.1}


def _capasso(values):
    a11, a12, a22, d = (_constant(name, values[name]) for name in ('a11', 'a12', 'a22', 'd'))

    for name, value in (('a11', a11), ('a12', a12), ('a22', a22), ('d', d)):
        if not value > 0.0:
            raise InputError('Propagule model needs %s > 0, got %r' % (name, value))

    return PencilProblem.from_dict({
        'domain': [0.0, 1.0],
        'D': repr(d),
        'V': repr(a11),
        'W0': '1',
        'poles': [{'alpha': a22, 'W': '%r*(%s)' % (a12, values['gprime'])}],
        'bc_left': {'b0': 0.0, 'b1': 1.0},
        'bc_right': {'b0': 0.0, 'b1': 1.0},
    })


#####################
## Morphogen model ##
#####################

# â'' - (λ + q(x, λ)) â = 0 with
#   q = h0 (f0 + g0)/(f0 + g0 + h0 ā) · (λ + g0)/(λ + f0 + g0 + h0 ā).
# Writing c = f0 + g0 + h0 ā, k = h0 (f0 + g0)/c and μ = -λ:
#   -â'' = μ â - k â - k (c - g0)/(μ - c) â,
# so V = k and the pole c carries the weight k (c - g0) = k (f0 + h0 ā) > 0.
# A non-constant ā moves the pole with x, which the pencil does not admit.
MORPHOGEN_CONSTANTS = {'h0': 1.0, 'f0': 1.0, 'g0': 1.0}


def _morphogen(values):
    h0, f0, g0 = (_constant(name, values[name]) for name in ('h0', 'f0', 'g0'))

    for name, value in (('h0', h0), ('f0', f0), ('g0', g0)):
        if not value > 0.0:
            raise InputError('Morphogen model needs %s > 0, got %r' % (name, value))

    try:
        abar = _constant('abar', values['abar'])
    except InputError as exc:
        raise InputError('Morphogen preset needs a constant steady state abar: %s' % exc)

    if not abar >= 0.0:
        raise InputError('Steady state abar must be non-negative, got %r' % abar)

    c = f0 + g0 + h0 * abar
    k = h0 * (f0 + g0) / c

    return PencilProblem.from_dict({
        'domain': [0.0, 1.0],
        'D': '1',
        'V': repr(k),
        'W0': '1',
        'poles': [{'alpha': c, 'W': repr(k * (c - g0))}],
        'bc_left': {'b0': 0.0, 'b1': 1.0},
        'bc_right': {'b0': 1.0, 'b1': 0.0},
    })


###########################
## Spatial rabies models ##
###########################

# Shared rates: birth a = 0.0027, death b = a/2, inverse incubation
# σ = 0.0357 (all 1/year).
RABIES_A = 0.0027
RABIES_B = RABIES_A / 2
RABIES_SIGMA = 0.0357

# Reproduction-number experiments: α = 0.2, K = 0.98, mean transmission 0.2192.
# Diffusion is not fixed by these experiments; the vaccine value is used.
HOMOGENEOUS_CONSTANTS = {'alpha': '0.2', 'beta': '0.2192', 'D': '0.1371', 'K': 0.98}

# Vaccine experiments: K = 1.5, α = 0.2, D = 0.1371 and a transmission profile
# shaped like 6x(1 - x). The profile is scaled by the mean transmission
# 0.2192; with the unscaled profile R0 exceeds 3 for every strategy with
# c0 ≤ 1 and no strategy is ever stable.
VACCINE_CONSTANTS = {'alpha': '0.2', 'beta': '0.2192*6*x*(1-x)', 'D': '0.1371', 'K': 1.5}


def _rabies(values):
    return RabiesParams(
        a=RABIES_A,
        b=RABIES_B,
        sigma=RABIES_SIGMA,
        K=_constant('K', values['K']),
        alpha=coeffs.parse_field(values['alpha'], DOMAIN),
        beta=coeffs.parse_field(values['beta'], DOMAIN),
        D=coeffs.parse_field(values['D'], DOMAIN)
    )


PRESETS = {
    preset.name: preset for preset in (
        Preset('example39', 'Dirichlet pencil on (0, π) with one pole at 2', {}, (), _single_pole),
        Preset('capasso', 'Propagule disease model on (0, 1), no-flux ends', CAPASSO_CONSTANTS,
               ('gprime',), _capasso),
        Preset('morphogen', 'Bound-morphogen pencil on (0, 1), no-flux at 0, absorbing at 1',
               MORPHOGEN_CONSTANTS, ('abar',), _morphogen),
        Preset('rabies-fig3', 'Fox rabies, homogeneous reproduction-number parameters', HOMOGENEOUS_CONSTANTS,
               (), _rabies),
        Preset('rabies-vaccine', 'Fox rabies, vaccine-strategy parameters', VACCINE_CONSTANTS, (), _rabies),
    )
}


def preset_names() -> Tuple[str, ...]:
    return tuple(PRESETS)


def load_preset(name: str, fields: Optional[Dict[str, str]] = None) -> Union[PencilProblem, RabiesParams]:
    """Builds a preset, applying user-supplied fields.

    Args:
        name (str): Preset name
        fields (dict, optional): Defaults to None. Field and constant
            overrides, name -> expression string.

    Raises:
        InputError: Unknown preset, unknown or missing field

    Returns:
        PencilProblem or RabiesParams: Fully populated problem
    """
    try:
        preset = PRESETS[name]
    except KeyError:
        raise InputError('Unknown preset "%s" (choose from %s)' % (name, ', '.join(PRESETS)))

    fields = dict(fields or {})

    unknown = set(fields) - set(preset.constants) - set(preset.required)
    if unknown:
        raise InputError('Preset %s does not take field(s) %s' % (name, ', '.join(sorted(unknown))))

    missing = [field for field in preset.required if field not in fields]
    if missing:
        raise InputError('Preset %s requires --field %s=EXPR' % (name, missing[0]))

    values = dict(preset.constants)
    values.update(fields)

    logger.debug('Loading preset %s with %s', name, values)

    return preset.build(values)


###########################
## Heterogeneity recipes ##
###########################

# Transmission and removal sweeps: β = 0.2192(1 + c1 cos πx) at α = 0.2, or α = 0.2(1 + c2 cos πx) at
# β = 0.2192. The diffusion sweeps keep [α] with α = (2/π)(1 + c2(sin πx - 2/π)),
# use β = 0.2192(1 + c1 cos πx) and vary D = D0(1 + cos πx) or
# D = 0.0685(1 + c3 cos πx).
def heterogeneity_recipe(kind: HeterogeneityKind, c1: float = 0.0, c2: float = 0.0) -> Callable[[float], RabiesParams]:
    """Maps a sweep value to the parameters of the requested sweep."""
    kind = HeterogeneityKind(kind)
    base = load_preset('rabies-fig3')

    def field(source):
        return coeffs.parse_field(source, DOMAIN)

    panel_beta = field('0.2192*(1 + %r*cos(pi*x))' % c1)
    panel_alpha = field('(2/pi)*(1 + %r*(sin(pi*x) - 2/pi))' % c2)

    def recipe(value):
        if kind is HeterogeneityKind.BETA_C1:
            return base.replace(beta=field('0.2192*(1 + %r*cos(pi*x))' % value))
        if kind is HeterogeneityKind.ALPHA_C2:
            return base.replace(alpha=field('0.2*(1 + %r*cos(pi*x))' % value))
        if kind is HeterogeneityKind.DIFFUSION_D0:
            return base.replace(beta=panel_beta, alpha=panel_alpha, D=field('%r*(1 + cos(pi*x))' % value))
        return base.replace(beta=panel_beta, alpha=panel_alpha, D=field('0.0685*(1 + %r*cos(pi*x))' % value))

    return recipe
