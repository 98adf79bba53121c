"""Coloured diagnostics on stderr.

Results go to files and stdout stays clean; everything a person should read while a run
is going on goes through these helpers.
"""
import sys

from colorama import Fore, Style

# silenced by --quiet
verbose = True


def _emit(colour: str, tag: str, msg: str, force: bool = False) -> None:
    if not (verbose or force):
        return
    print(colour, f"{tag}: {msg}" if tag else msg, Style.RESET_ALL, file=sys.stderr)


def info(msg: str) -> None:
    _emit(Fore.CYAN, "", msg)


def success(msg: str) -> None:
    _emit(Fore.GREEN, "", msg)


def warn(msg: str) -> None:
    _emit(Fore.YELLOW, "WARNING", msg)


def error(msg: str) -> None:
    # errors are printed even in quiet mode
    _emit(Fore.RED, "ERROR", msg, force=True)
