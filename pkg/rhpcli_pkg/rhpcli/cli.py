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

"""rhp command-line front end

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 numerical failure.
"""

import csv
import dataclasses
import datetime
import enum
import json
import logging
import sys
from typing import Dict, Iterable, List, Optional, Sequence

import click
import numpy as np

import rhp
from rhp.core import herglotz, pencil
from rhp.core.errors import InputError, NumericalError
from rhp.core.pencil import DiscreteGrid, PencilProblem
from rhp.methods import prufer, wkb
from rhp.models import epi, presets
from rhp.models.epi import HeterogeneityKind, RabiesParams

# Define logger
logger = logging.getLogger(__name__)

###################
## Configuration ##
###################

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

DEFAULT_NX = 100
LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s: %(message)s'

HETEROGENEITY_DEFAULTS = {
    HeterogeneityKind.BETA_C1: [round(-0.9 + 0.1 * i, 12) for i in range(19)],
    HeterogeneityKind.ALPHA_C2: [round(-0.9 + 0.1 * i, 12) for i in range(19)],
    HeterogeneityKind.DIFFUSION_D0: [round(0.01 * i, 12) for i in range(1, 31)],
    HeterogeneityKind.DIFFUSION_C3: [round(0.1 * i, 12) for i in range(10)],
}


class Method(str, enum.Enum):
    LINEARIZE = 'linearize'
    SHOOT = 'shoot'
    WKB = 'wkb'


class OutputFormat(str, enum.Enum):
    CSV = 'csv'
    JSON = 'json'


@dataclasses.dataclass
class RunConfig:
    """Options of one invocation, validated before dispatch.

    Attributes:
        command (str): Subcommand path, e.g. "rabies vaccine-sweep"
        preset (str): Preset name
        problem (str): Problem-file path
        fields (dict): --field overrides
        n_x (int): Grid cells
        method (Method): Solver family
        j (int): Interval index
        k (int): Oscillation index
        tol (float): Solver tolerance
        fmt (OutputFormat): Output format
        out (str): Output path, '-' for stdout
    """

    command: str
    preset: Optional[str] = None
    problem: Optional[str] = None
    fields: Dict[str, str] = dataclasses.field(default_factory=dict)
    n_x: int = DEFAULT_NX
    method: Method = Method.LINEARIZE
    j: Optional[int] = None
    k: Optional[int] = None
    tol: Optional[float] = None
    fmt: OutputFormat = OutputFormat.CSV
    out: str = '-'

    def validate(self, needs_source: bool = True):
        """Raises:
            click.UsageError: Conflicting or missing options
        """
        if needs_source and (self.preset is None) == (self.problem is None):
            raise click.UsageError('Give exactly one of --preset or --problem')
        if self.fields and self.preset is None:
            raise click.UsageError('--field only applies to presets')
        if self.n_x < 4:
            raise click.UsageError('--nx must be at least 4')
        if self.method in (Method.SHOOT, Method.WKB) and (self.j is None or self.k is None):
            raise click.UsageError('--j and --k are required for %s' % self.method.value)
        if self.tol is not None and not self.tol > 0.0:
            raise click.UsageError('Tolerances must be positive')

    def load(self):
        if self.problem is not None:
            return PencilProblem.load(self.problem)
        return presets.load_preset(self.preset, self.fields)

    def load_pencil(self) -> PencilProblem:
        source = self.load()
        if isinstance(source, RabiesParams):
            return epi.build_stability_pencil(source)
        return source

    def load_rabies(self) -> RabiesParams:
        source = self.load()
        if not isinstance(source, RabiesParams):
            raise InputError('Preset %s is not a rabies parameter set' % self.preset)
        return source


#############
## Helpers ##
#############

def _cell(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return '%.12g' % value
    if value is None:
        return ''
    return str(value)


def write_csv(config: RunConfig, header: Sequence[str], rows: Iterable[Sequence]):
    with click.open_file(config.out, 'w') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])


def write_json(config: RunConfig, payload: dict):
    document = dict(payload)
    document['metadata'] = {
        'tool': rhp.__title__,
        'version': rhp.__version__,
        'command': config.command,
        'source': config.preset or config.problem,
        'fields': config.fields,
        'n_x': config.n_x,
        'tol': config.tol,
        'method': config.method.value,
        'generated': datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }

    with click.open_file(config.out, 'w') as handle:
        handle.write(json.dumps(document, indent=4, sort_keys=True))
        handle.write('\n')


def emit(config: RunConfig, header: Sequence[str], rows: List[Sequence], payload: Optional[dict] = None):
    if config.fmt == OutputFormat.JSON:
        write_json(config, payload if payload is not None else {'rows': [dict(zip(header, row)) for row in rows]})
    else:
        write_csv(config, header, rows)


def parse_fields(ctx, param, values) -> Dict[str, str]:
    fields = {}
    for value in values:
        name, sep, expr = value.partition('=')
        if not sep or not name.strip() or not expr.strip():
            raise click.BadParameter('expected NAME=EXPR, got "%s"' % value)
        fields[name.strip()] = expr.strip()
    return fields


def parse_values(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise click.BadParameter('expected comma-separated numbers, got "%s"' % text)


def source_options(command):
    command = click.option('--preset', help='Named problem (see `rhp preset list`)')(command)
    command = click.option('--problem', type=click.Path(dir_okay=False), help='Problem file (JSON)')(command)
    command = click.option('--field', 'fields', multiple=True, callback=parse_fields,
                           help='Preset field or constant, NAME=EXPR (repeatable)')(command)
    return command


def output_options(command):
    command = click.option('--format', 'fmt', type=click.Choice([f.value for f in OutputFormat]),
                           default=OutputFormat.CSV.value, show_default=True)(command)
    command = click.option('--out', default='-', show_default=True, help='Output path, - for stdout')(command)
    return command


#########
## CLI ##
#########

@click.group()
@click.option('-v', '--verbose', count=True, help='INFO with -v, DEBUG with -vv')
@click.version_option(rhp.__version__, prog_name='rhp')
def cli(verbose):
    """Rational Herglotz pencil toolkit."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT)
    logging.getLogger('rhp').setLevel(level)


@cli.command('check-herglotz')
@source_options
@output_options
@click.option('--nx', 'n_x', type=int, default=DEFAULT_NX, show_default=True)
@click.option('--partial', 'partials', multiple=True, callback=parse_fields,
              help='Jacobian entry, e.g. f_v=0.5 (repeatable)')
@click.option('--quadratic', help='Coefficients alpha,beta,gamma,delta of the reduced symbol')
def check_herglotz(preset, problem, fields, fmt, out, n_x, partials, quadratic):
    """Check the Herglotz property of a pencil, Jacobian or reduced symbol."""
    config = RunConfig('check-herglotz', preset, problem, fields, n_x, fmt=OutputFormat(fmt), out=out)
    sources = sum(bool(item) for item in (preset or problem, partials, quadratic))
    if sources != 1:
        raise click.UsageError('Give exactly one of --preset/--problem, --partial or --quadratic')

    header = ['check', 'holds', 'detail']
    rows = []

    if partials:
        try:
            sample = herglotz.JacobianSample.from_mapping({name: float(value) for name, value in partials.items()})
        except ValueError as exc:
            raise InputError('Jacobian entries must be numbers: %s' % exc)

        if sample.species == 2:
            rows.append(['sign_condition', herglotz.check_two_species(sample), 'f_v*g_u = %.12g'
                         % (sample.f_v * sample.g_u)])
        else:
            report = herglotz.check_three_species(sample)
            rows.append(['determinants', report.holds, 'conditions = %.12g, %.12g' % report.conditions])
            rows.append(['residue_test', report.primitive.herglotz, report.primitive.diagnostic])
            rows.append(['agreement', report.agrees, ''])
    elif quadratic:
        coefficients = parse_values(quadratic)
        if len(coefficients) != 4:
            raise click.BadParameter('expected four numbers', param_hint='--quadratic')
        report = herglotz.check_quadratic_reduction(*coefficients)
        rows.append(['residue_test', report.herglotz, report.diagnostic])
        rows.append(['compact_inequalities', report.compact, 'agrees = %s' % _cell(report.agrees)])
    else:
        config.validate()
        check = pencil.pencil_is_herglotz(config.load_pencil(), n_x)
        rows.append(['pencil', check.holds, '; '.join(check.failures)])

    emit(config, header, rows)


def _shoot(config: RunConfig, p: PencilProblem, rel_tol: float = prufer.REL_TOL):
    tol = prufer.SHOOT_TOL if config.tol is None else config.tol
    result = prufer.shoot_eigenvalue(p, config.j, config.k, tol, rel_tol)

    header = ['j', 'k', 'lambda', 'theta_b', 'target', 'crossings', 'iterations', 'bracket_lo', 'bracket_hi']
    row = [config.j, config.k, result.lam, result.theta_b, result.target, result.crossings,
           result.iterations] + list(result.bracket)
    emit(config, header, [row], dict(result.to_dict(), j=config.j, k=config.k))


def _wkb(config: RunConfig, p: PencilProblem, scan_cells: int = wkb.SCAN_CELLS):
    tol = wkb.QUAD_TOL if config.tol is None else config.tol
    m = wkb.quantization_number(p, config.k)
    lam = wkb.wkb_eigenvalue(p, config.j, m, quad_tol=tol, n_x=scan_cells)
    threshold = wkb.validity_threshold(p, config.j, scan_cells)

    header = ['j', 'k', 'm', 'lambda', 'validity_threshold']
    emit(config, header, [[config.j, config.k, float(m), lam, threshold]])


@cli.command()
@source_options
@output_options
@click.option('--nx', 'n_x', type=int, default=DEFAULT_NX, show_default=True)
@click.option('--method', type=click.Choice([m.value for m in Method]), default=Method.LINEARIZE.value,
              show_default=True, help='linearize reports the whole spectrum; shoot and wkb need --j and --k')
@click.option('--reality-tol', 'tol', type=float, default=pencil.REALITY_TOL, show_default=True)
@click.option('--j', type=int, help='Only report interval j')
@click.option('--k', type=int, help='Oscillation index for shoot and wkb')
@click.option('--dump-eigenfunctions', is_flag=True, help='Include u and v samples in JSON output')
def eigs(preset, problem, fields, fmt, out, n_x, method, tol, j, k, dump_eigenfunctions):
    """Indexed spectrum via the linearization, or one eigenvalue by another method."""
    config = RunConfig('eigs', preset, problem, fields, n_x, Method(method), j=j, k=k, tol=tol,
                       fmt=OutputFormat(fmt), out=out)
    config.validate()

    if config.method != Method.LINEARIZE:
        if dump_eigenfunctions:
            raise click.UsageError('--dump-eigenfunctions needs --method linearize')
        # reality tolerance does not apply to single-eigenvalue methods
        config = dataclasses.replace(config, tol=None)
        solve = _shoot if config.method == Method.SHOOT else _wkb
        solve(config, config.load_pencil())
        return

    if k is not None:
        raise click.UsageError('--k needs --method shoot or wkb')
    if dump_eigenfunctions and config.fmt != OutputFormat.JSON:
        raise click.UsageError('--dump-eigenfunctions needs --format json')

    p = config.load_pencil()
    result = pencil.solve_spectrum(p, DiscreteGrid.on(p, n_x), tol)

    if config.fmt == OutputFormat.JSON:
        payload = result.to_dict(eigenfunctions=dump_eigenfunctions)
        if j is not None:
            payload['eigenpairs'] = [pair for pair in payload['eigenpairs'] if pair['j'] == j]
        write_json(config, payload)
        return

    header = ['j', 'k', 'lambda', 'imag_magnitude', 'residual', 'near_pole']
    rows = [[row[name] for name in header] for row in result.to_rows() if j is None or row['j'] == j]
    write_csv(config, header, rows)


@cli.command()
@source_options
@output_options
@click.option('--j', type=int, required=True, help='Interval index')
@click.option('--k', type=int, required=True, help='Oscillation index')
@click.option('--tol', type=float, default=prufer.SHOOT_TOL, show_default=True)
@click.option('--rel-tol', type=float, default=prufer.REL_TOL, show_default=True)
def shoot(preset, problem, fields, fmt, out, j, k, tol, rel_tol):
    """Single eigenvalue by Prüfer-angle shooting."""
    config = RunConfig('shoot', preset, problem, fields, method=Method.SHOOT, j=j, k=k, tol=tol,
                       fmt=OutputFormat(fmt), out=out)
    config.validate()

    if not rel_tol > 0.0:
        raise click.UsageError('Tolerances must be positive')

    _shoot(config, config.load_pencil(), rel_tol)


@cli.command('wkb')
@source_options
@output_options
@click.option('--j', type=int, required=True, help='Interval index')
@click.option('--k', type=int, required=True, help='Oscillation index')
@click.option('--nx', 'n_x', type=int, default=wkb.SCAN_CELLS, show_default=True, help='Validity scan cells')
@click.option('--tol', type=float, default=wkb.QUAD_TOL, show_default=True, help='Quadrature tolerance')
def wkb_command(preset, problem, fields, fmt, out, j, k, n_x, tol):
    """WKB estimate of the eigenvalue of I_j with k roots."""
    config = RunConfig('wkb', preset, problem, fields, n_x, Method.WKB, j=j, k=k, tol=tol,
                       fmt=OutputFormat(fmt), out=out)
    config.validate()

    _wkb(config, config.load_pencil(), n_x)


@cli.command('wkb-accum')
@source_options
@output_options
@click.option('--pole', 'index', type=int, required=True, help='Pole index, 1-based')
@click.option('--tol', type=float, default=wkb.QUAD_TOL, show_default=True, help='Quadrature tolerance')
def wkb_accum(preset, problem, fields, fmt, out, index, tol):
    """Accumulation constant C of the eigenvalues below a pole."""
    config = RunConfig('wkb-accum', preset, problem, fields, tol=tol, fmt=OutputFormat(fmt), out=out)
    config.validate()

    p = config.load_pencil()
    constant = wkb.accumulation_constant(p, index, tol)
    alpha = p.alphas[index - 1]

    emit(config, ['pole', 'alpha', 'C'], [[index, alpha, constant]])


@cli.command()
@click.argument('dump', type=click.Path(exists=True, dir_okay=False))
@output_options
@click.option('--tol', type=float, default=1e-12, show_default=True, help='Allowed residual difference')
def verify(dump, fmt, out, tol):
    """Recompute residuals of an `eigs --format json --dump-eigenfunctions` file."""
    config = RunConfig('verify', problem=dump, tol=tol, fmt=OutputFormat(fmt), out=out)

    try:
        with open(dump) as handle:
            document = json.load(handle)
        p = PencilProblem.from_dict(document['problem'])
        xs = np.asarray(document['x'], dtype=float)
        pairs = document['eigenpairs']
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError('Not an eigs JSON dump: %s' % exc)

    weights = [pole.W.values(xs) for pole in p.poles]
    rows = []
    worst = 0.0

    for pair in pairs:
        if 'u' not in pair:
            raise InputError('Dump has no eigenfunctions; rerun eigs with --dump-eigenfunctions')

        u = np.asarray(pair['u'], dtype=float)
        v = [np.asarray(block, dtype=float) for block in pair['v']]
        recomputed = pencil.auxiliary_residual(pair['lambda'], u, v, weights, p.alphas)
        difference = abs(recomputed - pair['residual'])
        worst = max(worst, difference)

        rows.append([pair['j'], pair['k'], pair['lambda'], pair['residual'], recomputed, difference])

    emit(config, ['j', 'k', 'lambda', 'stored_residual', 'recomputed_residual', 'difference'], rows)

    if worst > tol:
        raise NumericalError('Residuals differ by up to %.3g (allowed %.3g)' % (worst, tol))


############
## Rabies ##
############

@cli.group()
def rabies():
    """Spatial fox-rabies experiments."""


def rabies_options(default_preset):
    def decorate(command):
        command = click.option('--preset', default=default_preset, show_default=True,
                               help='Rabies parameter preset')(command)
        command = click.option('--field', 'fields', multiple=True, callback=parse_fields,
                               help='Override alpha, beta, D or K, NAME=EXPR (repeatable)')(command)
        command = click.option('--nx', 'n_x', type=int, default=epi.RABIES_NX, show_default=True)(command)
        return output_options(command)
    return decorate


@rabies.command('r0')
@rabies_options('rabies-fig3')
def rabies_r0(preset, fields, n_x, fmt, out):
    """Reproduction number R0 = 1/μ₁."""
    config = RunConfig('rabies r0', preset, None, fields, n_x, fmt=OutputFormat(fmt), out=out)
    config.validate()

    emit(config, ['R0'], [[epi.reproduction_number(config.load_rabies(), n_x)]])


@rabies.command('growth')
@rabies_options('rabies-fig3')
def rabies_growth(preset, fields, n_x, fmt, out):
    """Principal growth rate λ0 and the R0 sign cross-check."""
    config = RunConfig('rabies growth', preset, None, fields, n_x, fmt=OutputFormat(fmt), out=out)
    config.validate()

    check = epi.sign_consistency(config.load_rabies(), n_x)
    emit(config, ['lambda0', 'spreads', 'R0', 'consistent'],
         [[check.lambda0, check.lambda0 > 0.0, check.r0, check.consistent]])


@rabies.command('vaccine-sweep')
@rabies_options('rabies-vaccine')
@click.option('--c0', type=float, required=True, help='Total vaccine quantity')
@click.option('--step', type=float, default=epi.SWEEP_STEP, show_default=True, help='Grid spacing for a0 and L')
def rabies_vaccine_sweep(preset, fields, n_x, fmt, out, c0, step):
    """λ0 over vaccine strategies (a0, L) at fixed c0."""
    config = RunConfig('rabies vaccine-sweep', preset, None, fields, n_x, fmt=OutputFormat(fmt), out=out)
    config.validate()

    rp = config.load_rabies()
    a0_grid, L_grid = epi.sweep_grid(step)
    result = epi.vaccine_sweep(rp, c0, a0_grid, L_grid, n_x, epi.thread_count())

    if config.fmt == OutputFormat.JSON:
        write_json(config, dict(result.to_dict(), parameters=rp.describe(), step=step))
        return

    with click.open_file(config.out, 'w') as handle:
        result.write_csv(handle)


@rabies.command('vaccine-threshold')
@rabies_options('rabies-vaccine')
@click.option('--c0-values', default='0.40,0.41,0.42,0.43,0.44,0.45,0.46,0.47,0.48,0.49,0.50', show_default=True,
              help='Comma-separated c0 candidates')
@click.option('--step', type=float, default=epi.SWEEP_STEP, show_default=True, help='Grid spacing for a0 and L')
def rabies_vaccine_threshold(preset, fields, n_x, fmt, out, c0_values, step):
    """Smallest c0 admitting a stable strategy."""
    config = RunConfig('rabies vaccine-threshold', preset, None, fields, n_x, fmt=OutputFormat(fmt), out=out)
    config.validate()

    a0_grid, L_grid = epi.sweep_grid(step)
    threshold = epi.stability_threshold(config.load_rabies(), parse_values(c0_values), a0_grid, L_grid, n_x,
                                        epi.thread_count())

    emit(config, ['c0_threshold', 'found'], [[threshold, threshold is not None]])


@rabies.command('heterogeneity')
@rabies_options('rabies-fig3')
@click.option('--kind', type=click.Choice([kind.value for kind in HeterogeneityKind]), required=True)
@click.option('--values', 'values_text', help='Comma-separated sweep values (default per kind)')
@click.option('--c1', type=float, default=0.0, show_default=True, help='β modulation for diffusion sweeps')
@click.option('--c2', type=float, default=0.0, show_default=True, help='α modulation for diffusion sweeps')
def rabies_heterogeneity(preset, fields, n_x, fmt, out, kind, values_text, c1, c2):
    """R0 across a spatial-heterogeneity sweep."""
    config = RunConfig('rabies heterogeneity', preset, None, fields, n_x, fmt=OutputFormat(fmt), out=out)
    config.validate()

    if preset != 'rabies-fig3' or fields:
        raise click.UsageError('heterogeneity sweeps use the rabies-fig3 parameters')

    kind = HeterogeneityKind(kind)
    values = parse_values(values_text) if values_text else HETEROGENEITY_DEFAULTS[kind]

    table = epi.heterogeneity_experiment(kind, values, presets.heterogeneity_recipe(kind, c1, c2), n_x)

    if config.fmt == OutputFormat.JSON:
        write_json(config, table.to_dict())
        return

    with click.open_file(config.out, 'w') as handle:
        table.write_csv(handle)


#############
## Presets ##
#############

@cli.group()
def preset():
    """List and show presets."""


@preset.command('list')
def preset_list():
    for name in presets.preset_names():
        click.echo(name)


@preset.command('show')
@click.argument('name')
@click.option('--field', 'fields', multiple=True, callback=parse_fields, help='NAME=EXPR (repeatable)')
def preset_show(name, fields):
    """Print a preset as JSON."""
    source = presets.load_preset(name, fields)

    if isinstance(source, RabiesParams):
        document = {'parameters': source.describe(), 'pencil': epi.build_stability_pencil(source).describe()}
    else:
        document = source.describe()

    click.echo(json.dumps(document, indent=4, sort_keys=True))


def run(argv: Optional[List[str]] = None) -> int:
    """Runs the CLI and maps failures to exit codes.

    Args:
        argv (list, optional): Defaults to None. Arguments without the
            program name; sys.argv[1:] when omitted.

    Returns:
        int: Exit status
    """
    try:
        result = cli.main(args=argv, prog_name='rhp', standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        click.echo('Aborted!', err=True)
        return EXIT_USAGE
    except InputError as exc:
        click.echo('Error: %s' % exc, err=True)
        return EXIT_INPUT
    except NumericalError as exc:
        click.echo('Numerical failure: %s' % exc, err=True)
        return EXIT_NUMERICAL

    return result if isinstance(result, int) else EXIT_OK
