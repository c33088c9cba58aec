import sys
from pathlib import Path
from typing import Dict, List

import pytest

from lindep.cli import load_prelude
from lindep.syntax import Def, parse_program
from lindep.typecheck import Checker

ROOT = Path(__file__).resolve().parent.parent
PROGRAMS = ROOT / "programs"

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))


def check_source(source: str, paper_iter: bool = False, prelude: bool = True) -> List:
    """Check ``source`` after the prelude; returns the user's CheckResults."""
    checker = Checker(paper_iter=paper_iter)
    globals_: Dict = {}
    if prelude:
        checker.check_program(load_prelude(), globals_)
    return checker.check_program(parse_program(source, "<test>"), globals_)


def definitions(source: str = "", prelude: bool = True) -> Dict:
    decls = list(load_prelude()) if prelude else []
    decls += list(parse_program(source, "<test>"))
    return {d.name: d.body for d in decls if isinstance(d, Def)}


@pytest.fixture
def check():
    return check_source


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
