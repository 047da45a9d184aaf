# Command module initialization
from .base_command import BaseCommand
from .flattening_commands import CatCommand, BoundCommand, CheckCommand, RandomCommand
from .apolarity_commands import InSpanCommand, LengthCommand
from .decomposition_commands import VerifyCommand, GapCommand

COMMANDS = {command.name: command for command in (
    CatCommand, BoundCommand, CheckCommand, InSpanCommand, LengthCommand, VerifyCommand, GapCommand,
    RandomCommand)}
