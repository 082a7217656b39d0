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

import csv
import io
import json

import pytest
from click.testing import CliRunner

from rhpcli import cli as rhpcli


def invoke(*args):
    result = CliRunner().invoke(rhpcli.cli, list(args))
    assert result.exit_code == 0, result.output
    return result.output


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


#############
## Spectra ##
#############

def test_eigs_csv():
    rows = csv_rows(invoke('eigs', '--preset', 'example39'))

    assert len(rows) == 198
    row = [row for row in rows if row['j'] == '1' and row['k'] == '1'][0]
    assert float(row['lambda']) == pytest.approx(4.88, rel=0.015)
    assert row['near_pole'] == 'false'


def test_eigs_interval_filter():
    rows = csv_rows(invoke('eigs', '--preset', 'example39', '--j', '0', '--nx', '50'))

    assert len(rows) == 49
    assert {row['j'] for row in rows} == {'0'}


def test_eigs_deterministic():
    assert invoke('eigs', '--preset', 'example39', '--nx', '40') == invoke('eigs', '--preset', 'example39', '--nx', '40')


def test_eigs_from_problem_file(tmp_path):
    path = tmp_path / 'problem.json'
    path.write_text(json.dumps({
        'domain': [0.0, 3.141592653589793],
        'D': '1',
        'V': '0',
        'bc_left': {'b0': 1.0, 'b1': 0.0},
        'bc_right': {'b0': 1.0, 'b1': 0.0},
    }))

    rows = csv_rows(invoke('eigs', '--problem', str(path), '--nx', '100'))

    assert float(rows[0]['lambda']) == pytest.approx(1.0, abs=1e-3)
    assert rows[0]['k'] == '0'


def test_eigs_json_metadata():
    document = json.loads(invoke('eigs', '--preset', 'example39', '--nx', '20', '--format', 'json'))

    assert document['metadata']['command'] == 'eigs'
    assert document['metadata']['source'] == 'example39'
    assert document['metadata']['method'] == 'linearize'
    assert document['metadata']['generated'].endswith('+00:00')
    assert document['n_x'] == 20
    assert len(document['x']) == 19


def test_dump_and_verify(tmp_path):
    dump = tmp_path / 'dump.json'
    invoke('eigs', '--preset', 'example39', '--nx', '40', '--format', 'json', '--dump-eigenfunctions',
           '--out', str(dump))

    rows = csv_rows(invoke('verify', str(dump)))

    assert len(rows) == 78
    assert max(float(row['difference']) for row in rows) <= 1e-12


def test_verify_detects_tampering(tmp_path, capsys):
    dump = tmp_path / 'dump.json'
    invoke('eigs', '--preset', 'example39', '--nx', '20', '--format', 'json', '--dump-eigenfunctions',
           '--out', str(dump))

    document = json.loads(dump.read_text())
    document['eigenpairs'][0]['residual'] += 1.0
    dump.write_text(json.dumps(document))

    assert rhpcli.run(['verify', str(dump), '--out', str(tmp_path / 'report.csv')]) == rhpcli.EXIT_NUMERICAL
    assert 'Residuals differ' in capsys.readouterr().err


def test_verify_needs_eigenfunctions(tmp_path):
    dump = tmp_path / 'dump.json'
    invoke('eigs', '--preset', 'example39', '--nx', '20', '--format', 'json', '--out', str(dump))

    assert rhpcli.run(['verify', str(dump)]) == rhpcli.EXIT_INPUT


def test_shoot_json():
    document = json.loads(invoke('shoot', '--preset', 'example39', '--j', '1', '--k', '1', '--format', 'json'))

    assert document['lam'] == pytest.approx(4.88, abs=0.05)
    assert document['crossings'] == 1
    assert document['j'] == 1


def test_eigs_method_selector():
    shoot = ('--preset', 'example39', '--j', '1', '--k', '1')
    assert invoke('eigs', '--method', 'shoot', *shoot) == invoke('shoot', *shoot)

    quantized = ('--preset', 'example39', '--j', '0', '--k', '3')
    assert invoke('eigs', '--method', 'wkb', *quantized) == invoke('wkb', *quantized)

    document = json.loads(invoke('eigs', '--method', 'shoot', '--format', 'json', *shoot))
    assert document['metadata']['command'] == 'eigs'
    assert document['metadata']['method'] == 'shoot'
    assert document['lam'] == pytest.approx(4.88, abs=0.05)


def test_wkb_row():
    rows = csv_rows(invoke('wkb', '--preset', 'example39', '--j', '0', '--k', '3'))

    assert float(rows[0]['m']) == 4.0
    assert float(rows[0]['lambda']) == pytest.approx(1.956, abs=0.005)
    assert float(rows[0]['validity_threshold']) == pytest.approx(0.8292, abs=1e-3)


def test_wkb_accumulation():
    rows = csv_rows(invoke('wkb-accum', '--preset', 'example39', '--pole', '1'))

    assert float(rows[0]['alpha']) == 2.0
    assert float(rows[0]['C']) == pytest.approx(0.649, abs=0.005)


#####################
## Herglotz checks ##
#####################

def test_check_pencil():
    rows = csv_rows(invoke('check-herglotz', '--preset', 'example39'))

    assert rows == [{'check': 'pencil', 'holds': 'true', 'detail': ''}]


def test_check_broken_pencil(tmp_path):
    path = tmp_path / 'problem.json'
    path.write_text(json.dumps({
        'domain': [0.0, 1.0],
        'D': '1',
        'V': '0',
        'poles': [{'alpha': 1.0, 'W': 'x - 0.5'}],
        'bc_left': {'b0': 0.0, 'b1': 1.0},
        'bc_right': {'b0': 0.0, 'b1': 1.0},
    }))

    rows = csv_rows(invoke('check-herglotz', '--problem', str(path)))

    assert rows[0]['holds'] == 'false'
    assert 'not Herglotz' in rows[0]['detail']


def test_check_two_species():
    rows = csv_rows(invoke('check-herglotz', '--partial', 'f_u=0', '--partial', 'f_v=1', '--partial', 'g_u=-2',
                           '--partial', 'g_v=0'))

    assert rows[0]['check'] == 'sign_condition'
    assert rows[0]['holds'] == 'false'


def test_check_quadratic():
    rows = csv_rows(invoke('check-herglotz', '--quadratic', '1,0,0,-1'))

    assert rows[0] == {'check': 'residue_test', 'holds': 'true', 'detail': rows[0]['detail']}
    assert rows[1]['check'] == 'compact_inequalities'


def test_check_needs_one_source():
    assert rhpcli.run(['check-herglotz', '--preset', 'example39', '--quadratic', '1,0,0,-1']) == rhpcli.EXIT_USAGE
    assert rhpcli.run(['check-herglotz', '--quadratic', '1,0,0']) == rhpcli.EXIT_USAGE


############
## Rabies ##
############

def test_rabies_r0():
    rows = csv_rows(invoke('rabies', 'r0'))

    assert float(rows[0]['R0']) == pytest.approx(0.98526, abs=1e-4)


def test_rabies_growth_override():
    rows = csv_rows(invoke('rabies', 'growth', '--field', 'beta=0.4384', '--nx', '100'))

    assert rows[0]['spreads'] == 'true'
    assert rows[0]['consistent'] == 'true'
    assert float(rows[0]['R0']) > 1.0


def test_rabies_vaccine_sweep_csv():
    output = invoke('rabies', 'vaccine-sweep', '--c0', '0', '--step', '0.25', '--nx', '40')
    rows = csv_rows(output)

    assert output.startswith('c0,a0,L,lambda0,stable\n')
    # (a0, L) pairs on the 0.25 grid with a0 + L ≤ 1
    assert len(rows) == 9
    assert {row['stable'] for row in rows} == {'false'}


def test_rabies_heterogeneity_csv():
    rows = csv_rows(invoke('rabies', 'heterogeneity', '--kind', 'beta_c1', '--values', '0,0.5', '--nx', '50'))

    assert [row['value'] for row in rows] == ['0', '0.5']
    assert float(rows[1]['R0']) > float(rows[0]['R0'])


def test_rabies_heterogeneity_fixed_parameters():
    assert rhpcli.run(['rabies', 'heterogeneity', '--kind', 'beta_c1', '--preset', 'rabies-vaccine']) \
        == rhpcli.EXIT_USAGE


def test_rabies_rejects_pencil_preset():
    assert rhpcli.run(['rabies', 'r0', '--preset', 'example39']) == rhpcli.EXIT_INPUT


#############
## Presets ##
#############

def test_preset_list():
    assert invoke('preset', 'list').split() == ['example39', 'capasso', 'morphogen', 'rabies-fig3', 'rabies-vaccine']


def test_preset_show_rabies():
    document = json.loads(invoke('preset', 'show', 'rabies-vaccine'))

    assert set(document) == {'parameters', 'pencil'}
    assert document['parameters']['K'] == 1.5


def test_preset_show_with_field():
    document = json.loads(invoke('preset', 'show', 'capasso', '--field', 'gprime=2'))

    assert document['poles'][0]['alpha'] == 2.0


################
## Exit codes ##
################

@pytest.mark.parametrize('argv, code', [
    (['eigs'], rhpcli.EXIT_USAGE),
    (['eigs', '--preset', 'example39', '--problem', 'p.json'], rhpcli.EXIT_USAGE),
    (['eigs', '--preset', 'example39', '--nx', '3'], rhpcli.EXIT_USAGE),
    (['eigs', '--preset', 'example39', '--dump-eigenfunctions'], rhpcli.EXIT_USAGE),
    (['shoot', '--preset', 'example39', '--j', '1'], rhpcli.EXIT_USAGE),
    (['eigs', '--preset', 'example39', '--method', 'wkb', '--j', '0'], rhpcli.EXIT_USAGE),
    (['eigs', '--preset', 'example39', '--k', '1'], rhpcli.EXIT_USAGE),
    (['eigs', '--preset', 'example39', '--method', 'shoot', '--j', '1', '--k', '1', '--dump-eigenfunctions'],
     rhpcli.EXIT_USAGE),
    (['nonsense'], rhpcli.EXIT_USAGE),
    (['eigs', '--preset', 'nope'], rhpcli.EXIT_INPUT),
    (['preset', 'show', 'capasso'], rhpcli.EXIT_INPUT),
    (['shoot', '--preset', 'example39', '--j', '5', '--k', '0'], rhpcli.EXIT_INPUT),
    (['wkb', '--preset', 'example39', '--j', '0', '--k', '-1'], rhpcli.EXIT_INPUT),
    (['preset', 'list'], rhpcli.EXIT_OK),
])
def test_exit_codes(argv, code):
    assert rhpcli.run(argv) == code


def test_missing_problem_file(tmp_path):
    assert rhpcli.run(['eigs', '--problem', str(tmp_path / 'absent.json')]) == rhpcli.EXIT_INPUT


def test_field_requires_preset(tmp_path):
    assert rhpcli.run(['eigs', '--problem', str(tmp_path / 'p.json'), '--field', 'a=1']) == rhpcli.EXIT_USAGE
