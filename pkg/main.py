import click
from biharmonic_kernels.CLI_handler.evaluation.evaluation_cli import (
    bubble_check, constants, decay_fit, green_eval, inequality, kernel_eval, ode, solve)
from biharmonic_kernels.CLI_handler.verification.verify_cli import verify


@click.group()
def command_line_interface():
    pass


command_line_interface.add_command(kernel_eval)
command_line_interface.add_command(green_eval)
command_line_interface.add_command(solve)
command_line_interface.add_command(decay_fit)
command_line_interface.add_command(bubble_check)
command_line_interface.add_command(constants)
command_line_interface.add_command(ode)
command_line_interface.add_command(inequality)
command_line_interface.add_command(verify)


if __name__ == "__main__":
    command_line_interface()
