import click

from biharmonic_kernels.CLI_handler.common import common_options, finish, run_config
from biharmonic_kernels.reports.suites import ALL, SUITE_NAMES, run_suite
from biharmonic_kernels.src.utils import handle_exception
"""
# Verification CLI

`verify <suite>` runs a named suite and writes its report to -o/--output, or to
`$BIHARMONIC_REPORT_DIR/<suite>_report.<format>` (default `reports/`). The exit code is 1 when a
check failed.

    py main.py verify kernels --n 5 --seed 7
    py main.py verify all --seed 7 --format csv
"""


@click.command(help="Run a verification suite and write its report.")
@click.argument('suite', type=click.Choice(SUITE_NAMES + (ALL,)), required=True)
@common_options
@handle_exception
def verify(suite, **flags):
    """
        Runs `suite` with the merged configuration.

        Args:
            suite (str): one of geometry, operators, kernels, green, solver, classification, extremal, ode, all.

        Returns:
            None
    """
    config = run_config(**flags)
    report = run_suite(suite, config)
    finish(report, config, write_default=True)
