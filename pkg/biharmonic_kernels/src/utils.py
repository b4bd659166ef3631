import sys
import json
import functools
from typing import Callable, Any
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.src.exceptions import QuadratureError


def handle_exception(func: Callable[..., Any]):
    '''
    Decorator function for exception handling.

    Used on the CLI commands. It catches any exception raised below the command, logs it using the
    project's logger, prints the error message (in dict format) and exits the program with a
    status code of 1.

    Parameters:
        func (function): The function to be decorated.

    Returns:
        wrapper (function): The wrapped function with exception handling logic.

    Exceptions Handled:
        - QuadratureError: the refinement history is added under 'diagnostics'.
        - Exception: every other exception, including the rest of the HarnessError family.

    Logging:
        Logs the error message using the project's logger with the following format:
            {
                'status': <Exception Type>,
                'message': <Exception Message>,
                'function_name': <Name of the Function where the Exception Occurred>
            }

    Usage:
    ```
    @handle_exception
    def my_command():
        # code that may raise
        pass
    ```
    '''
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except QuadratureError as e:
            error_message = {
                'status': type(e).__name__,
                'message': str(e),
                'function_name': func.__name__,
                'diagnostics': e.diagnostics
            }
        except Exception as e:
            error_message = {
                'status': type(e).__name__,
                'message': str(e),
                'function_name': func.__name__
            }

        logger.error(error_message)
        print(json.dumps(error_message, default=str))
        sys.exit(1)

    return wrapper


def parse_point(text: str) -> tuple[float, ...]:
    '''
    Parse a comma separated coordinate list such as "0,0,0,0,1".
    '''
    try:
        return tuple(float(v) for v in text.split(',') if v.strip() != '')
    except ValueError as e:
        raise ValueError(f"Invalid point '{text}': {e}") from e


if __name__ == '__main__':
    @handle_exception
    def test():
        raise FileNotFoundError('missing config')

    test()
