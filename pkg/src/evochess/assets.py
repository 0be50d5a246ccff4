"""Bundled data assets: the 50-position tactical suite and 50 openings."""

from importlib.resources import files

from .chesscore import load_epd_file
from .harness import load_openings

SUITE_NAME = "suite50.epd"
OPENINGS_NAME = "openings50.fen"


def suite_path() -> str:
    return str(files("evochess") / "data" / SUITE_NAME)


def openings_path() -> str:
    return str(files("evochess") / "data" / OPENINGS_NAME)


def load_bundled_suite() -> list:
    return load_epd_file(suite_path())


def load_bundled_openings() -> list:
    return load_openings(openings_path())
