import json
from fractions import Fraction

import pandas as pd
import pytest

from modules.core.errors import ConfigError
from modules.core.runner import CheckResult, RunReport
from modules.core.scalars import ZetaAssignment
from modules.utils.export import (
    TABLE_COLUMNS,
    lens_table_frame,
    report_json,
    summary_text,
    table_csv,
    write_report,
    write_summary,
    write_table,
    zeta_cell,
)

ROWS = [
    {'p': 5, 'q': 2, 'n': 1, 'zeta': ZetaAssignment.parse('1,2,3,4'), 'value': Fraction(12)},
    {'p': 5, 'q': 2, 'n': 2, 'zeta': '0:1:3:7', 'value': 3},
]


@pytest.fixture
def report():
    return RunReport('verify', {'move': '2-3', 'seed': 1},
                     [CheckResult('2-3 zeta[0] alpha 0', True), CheckResult('2-3 zeta[1] alpha 0', False, error='boom')],
                     elapsed=2.5)


def test_zeta_cell():
    assert zeta_cell(ZetaAssignment.parse('1,1/2,3')) == '1:1/2:3'
    assert zeta_cell((0, 1, 3)) == '0:1:3'


def test_table_frame():
    df = lens_table_frame(ROWS)
    assert list(df.columns) == TABLE_COLUMNS
    assert df['zeta'].tolist() == ['1:2:3:4', '0:1:3:7']
    assert df['value'].tolist() == ['12', '3']


def test_table_csv():
    assert table_csv(lens_table_frame(ROWS)) == 'p,q,n,zeta,value\n5,2,1,1:2:3:4,12\n5,2,2,0:1:3:7,3\n'


def test_empty_table_csv():
    assert table_csv(lens_table_frame([])) == 'p,q,n,zeta,value\n'


def test_write_csv(tmp_path):
    path = write_table(lens_table_frame(ROWS), tmp_path / 'out' / 'table.csv')
    assert path.read_text(encoding='utf-8').startswith('p,q,n,zeta,value\n')


def test_write_xlsx(tmp_path):
    path = write_table(lens_table_frame(ROWS), tmp_path / 'table.xlsx')
    df = pd.read_excel(path, engine='openpyxl', dtype=str)
    assert df['zeta'].tolist() == ['1:2:3:4', '0:1:3:7']


def test_write_table_failure(tmp_path):
    blocker = tmp_path / 'file'
    blocker.write_text('x')
    with pytest.raises(ConfigError):
        write_table(lens_table_frame(ROWS), blocker / 'table.csv')


@pytest.mark.parametrize('writer', [write_report, write_summary])
def test_write_report_failure(report, tmp_path, writer):
    blocker = tmp_path / 'file'
    blocker.write_text('x')
    with pytest.raises(ConfigError):
        writer(report, blocker / 'nested' / 'report.json')


def test_report_json(report, tmp_path):
    data = json.loads(report_json(report))
    assert data['command'] == 'verify'
    assert data['summary']['failed'] == 1
    assert 'elapsed' not in data
    path = write_report(report, tmp_path / 'report.json')
    assert json.loads(path.read_text(encoding='utf-8')) == data


def test_summary_text(report):
    text = summary_text(report)
    assert text.startswith('pachnercalc verify\n')
    assert '  move: 2-3' in text
    assert '[PASS] 2-3 zeta[0] alpha 0' in text
    assert '[FAIL] 2-3 zeta[1] alpha 0 (boom)' in text
    assert 'Checks failed: 1' in text
    assert 'Elapsed' not in text


def test_summary_with_timing(report, tmp_path):
    report.timing = True
    path = write_summary(report, tmp_path / 'summary.txt')
    assert 'Elapsed seconds: 2.50' in path.read_text(encoding='utf-8')
