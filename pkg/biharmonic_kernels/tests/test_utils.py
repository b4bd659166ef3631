import json
import logging
import unittest
from unittest.mock import patch
from biharmonic_kernels.log.log_handler import JSONLinesFormatter
from biharmonic_kernels.src.exceptions import ContractError, QuadratureError
from biharmonic_kernels.src.utils import handle_exception, parse_point


class TestHandleException(unittest.TestCase):
    '''

    # TestHandleException
    `Unit tests for the handle_exception decorator used on every CLI command.`

    Test Cases
    test_handle_exception

    - A decorated function raising ValueError is logged with status, message and function name,
      and sys.exit is called with 1.

    test_handle_exception_for_library_error

    - Library errors (HarnessError family) are reported the same way.

    test_handle_exception_for_quadrature_error

    - QuadratureError adds its refinement history under 'diagnostics'.

    test_handle_exception_for_success

    - A function that returns normally is passed through untouched.
    '''

    @patch('biharmonic_kernels.src.utils.sys.exit')
    @patch('biharmonic_kernels.log.log_handler.logger.error')
    def test_handle_exception(self, mock_logger_error, mock_sys_exit):

        @handle_exception
        def test_function_on_value_error():
            raise ValueError("Test Error")
        test_function_on_value_error()
        mock_logger_error.assert_called_once_with({
            'status': 'ValueError',
            'message': 'Test Error',
            'function_name': 'test_function_on_value_error'
        })
        mock_sys_exit.assert_called_once_with(1)

    @patch('biharmonic_kernels.src.utils.sys.exit')
    @patch('biharmonic_kernels.log.log_handler.logger.error')
    def test_handle_exception_for_library_error(self, mock_logger_error, mock_sys_exit):

        @handle_exception
        def ill_posed_pair():
            raise ContractError("Operator pair (0,3) is ill-posed (i + j = 3)")
        ill_posed_pair()
        mock_logger_error.assert_called_once_with({
            'status': 'ContractError',
            'message': 'Operator pair (0,3) is ill-posed (i + j = 3)',
            'function_name': 'ill_posed_pair'
        })
        mock_sys_exit.assert_called_once_with(1)

    @patch('biharmonic_kernels.src.utils.sys.exit')
    @patch('biharmonic_kernels.log.log_handler.logger.error')
    def test_handle_exception_for_quadrature_error(self, mock_logger_error, mock_sys_exit):
        diagnostics = {'values': [0.9, 0.99], 'nodes': [64, 128]}

        @handle_exception
        def slow_integral():
            raise QuadratureError("no convergence", diagnostics=diagnostics)
        slow_integral()
        mock_logger_error.assert_called_once_with({
            'status': 'QuadratureError',
            'message': 'no convergence',
            'function_name': 'slow_integral',
            'diagnostics': diagnostics
        })
        mock_sys_exit.assert_called_once_with(1)

    @patch('biharmonic_kernels.src.utils.sys.exit')
    def test_handle_exception_for_success(self, mock_sys_exit):

        @handle_exception
        def fine():
            return 42
        self.assertEqual(fine(), 42)
        mock_sys_exit.assert_not_called()


class TestParsePoint(unittest.TestCase):
    '''

    # TestParsePoint
    `Comma separated coordinates as given to --point.`
    '''

    def test_parse_point(self):
        self.assertEqual(parse_point('0,0,0,0,1'), (0.0, 0.0, 0.0, 0.0, 1.0))
        self.assertEqual(parse_point(' 1.5, -2 ,'), (1.5, -2.0))

    def test_parse_point_invalid(self):
        with self.assertRaises(ValueError):
            parse_point('0,a,1')


class TestJSONLinesFormatter(unittest.TestCase):
    '''

    # TestJSONLinesFormatter
    `One JSON object per record, dict messages kept under fields.`
    '''

    def _record(self, msg):
        return logging.LogRecord('biharmonic_kernels', logging.DEBUG, __file__, 10, msg, None, None)

    def test_string_message(self):
        entry = json.loads(JSONLinesFormatter().format(self._record('suite finished')))
        self.assertEqual(entry['message'], 'suite finished')
        self.assertEqual(entry['level'], 'DEBUG')
        self.assertNotIn('fields', entry)

    def test_dict_message(self):
        entry = json.loads(JSONLinesFormatter().format(self._record({'quadrature': 'P_1', 'level': 2})))
        self.assertEqual(entry['message'], 'quadrature')
        self.assertEqual(entry['fields']['level'], 2)


if __name__ == '__main__':
    unittest.main()
