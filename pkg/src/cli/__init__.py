"""
Command-line layer for DenseCode Lab
Subcommand handlers and result writers
"""

from .commands import COMMANDS, check_tolerance, resolve_simulation
from .output_writer import OutputEnvelope, OutputWriter

__all__ = ['COMMANDS', 'check_tolerance', 'resolve_simulation', 'OutputEnvelope', 'OutputWriter']
