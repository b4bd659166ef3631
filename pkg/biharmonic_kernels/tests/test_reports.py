import json
import os
import tempfile
import unittest
from unittest.mock import patch

import pandas as pd

from biharmonic_kernels.reports.report import (
    CheckRecord, SuiteReport, default_report_path, emit_report, report_directory, save_table)
from biharmonic_kernels.reports.suites import run_suite
from biharmonic_kernels.src.config import RunConfig
from biharmonic_kernels.src.exceptions import DomainError


class TestCheckRecord(unittest.TestCase):
    '''

    # TestCheckRecord
    `Status of a single check.`
    '''

    def test_constructors(self):
        self.assertEqual(CheckRecord.within('a', 'ref', 1e-12, 1e-10).status, 'pass')
        self.assertEqual(CheckRecord.within('a', 'ref', -1e-3, 1e-10).status, 'fail')
        self.assertEqual(CheckRecord.holds('b', 'ref', 0.5, False).status, 'fail')
        info = CheckRecord.info('c', 'ref', 'increasing')
        self.assertEqual(info.status, 'info')
        self.assertIsNone(info.tolerance)
        with self.assertRaises(DomainError):
            CheckRecord('d', 'ref', 0.0, None, 'skipped')


class TestSuiteReport(unittest.TestCase):
    '''

    # TestSuiteReport
    `Summaries and the JSON and CSV report files.`

    Test Cases
    test_emit_json

    - The document holds the run configuration and the records, with sorted keys.

    test_emit_csv

    - The CSV has exactly the columns id, paper_ref, value, tolerance, status.
    '''

    def setUp(self):
        self.report = SuiteReport('geometry', 7, 1, {'n': 5}, [
            CheckRecord.within('geometry.a', 'identity a', 1e-13, 1e-10),
            CheckRecord.within('geometry.b', 'identity b', 0.1, 1e-10),
            CheckRecord.info('geometry.c', 'table', 3.0),
        ], wall_time=1.25)

    def test_summary(self):
        self.assertFalse(self.report.passed)
        self.assertEqual([r.id for r in self.report.failures], ['geometry.b'])
        self.assertTrue(self.report.summary().startswith('suite geometry: 1 passed, 1 failed, 1 info'))

    def test_emit_json(self):
        with tempfile.TemporaryDirectory() as directory:
            path = emit_report(self.report, os.path.join(directory, 'nested', 'report.json'))
            with open(path) as file:
                document = json.load(file)
        self.assertEqual(set(document), {'schema_version', 'suite', 'seed', 'workers', 'config', 'header', 'records'})
        self.assertEqual(document['seed'], 7)
        self.assertEqual(document['records'][2]['status'], 'info')
        self.assertNotIn('wall_time', document)

    def test_emit_csv(self):
        with tempfile.TemporaryDirectory() as directory:
            path = emit_report(self.report, os.path.join(directory, 'report.csv'), 'csv')
            frame = pd.read_csv(path)
        self.assertEqual(list(frame.columns), ['id', 'paper_ref', 'value', 'tolerance', 'status'])
        self.assertEqual(len(frame), 3)

    def test_emit_unknown_format(self):
        with self.assertRaises(DomainError):
            emit_report(self.report, 'report.xml', 'xml')

    def test_save_table(self):
        with tempfile.TemporaryDirectory() as directory:
            path = save_table([{'n': 4, 'd_n': 0.198}], os.path.join(directory, 'constants.json'))
            with open(path) as file:
                self.assertEqual(json.load(file)[0]['n'], 4)
            with self.assertRaises(DomainError):
                save_table([{'n': 4}], os.path.join(directory, 'constants.txt'))

    def test_report_directory(self):
        with patch.dict(os.environ, {'BIHARMONIC_REPORT_DIR': '/tmp/biharmonic'}):
            self.assertEqual(str(report_directory()), '/tmp/biharmonic')
            self.assertEqual(default_report_path('ode', 'csv').name, 'ode_report.csv')


class TestSuites(unittest.TestCase):
    '''

    # TestSuites
    `Suites run from a seeded config and reproduce their records.`
    '''

    def test_geometry_suite_is_reproducible(self):
        config = RunConfig(n=5, seed=3)
        first, second = run_suite('geometry', config), run_suite('geometry', config)
        self.assertTrue(first.passed, msg=first.summary())
        self.assertEqual(first.document(), second.document())

    def test_unknown_suite(self):
        with self.assertRaises(DomainError):
            run_suite('topology')


if __name__ == '__main__':
    unittest.main()
