import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from planeram.polycore import HomogeneousForm, monomials  # noqa: E402
from planeram.projmap import (CommonZero, ProjectivePoint, compose, linear_map,  # noqa: E402
                              perturbed_power_map, power_map, validate)

DATA = Path(__file__).resolve().parent.parent / "data"


def random_form(rng: random.Random, m: int, box: int = 3, density: float = 0.6):
    terms = {e: rng.randint(-box, box) for e in monomials(3, m) if rng.random() < density}
    return HomogeneousForm(terms)


def random_map(rng: random.Random, m: int):
    while True:
        forms = [random_form(rng, m) for _ in range(3)]
        if any(F.is_zero or F.degree != m for F in forms):
            continue
        try:
            return validate(forms)
        except CommonZero:
            continue


def random_point(rng: random.Random, h: int = 5) -> ProjectivePoint:
    while True:
        c = [rng.randint(-h, h) for _ in range(3)]
        if any(c):
            return ProjectivePoint(*c)


A1 = [[1, 1, 0], [0, 1, 1], [1, 0, 2]]
A2 = [[2, 0, 1], [1, 1, 0], [0, 1, 1]]


def corpus():
    """Maps with known completely ramified points, name -> (map, CR points)."""
    coord = [ProjectivePoint(1, 0, 0), ProjectivePoint(0, 1, 0), ProjectivePoint(0, 0, 1)]
    L1 = linear_map(A1)
    L2 = linear_map(A2)
    twisted = compose(L1, compose(power_map(2), L2))
    return {
        "power2": (power_map(2), coord),
        "power3": (power_map(3), coord),
        "perturbed2": (perturbed_power_map(2, "1"), coord),
        "perturbed3": (perturbed_power_map(3, "x+y+z"), coord),
        "twisted2": (twisted, [L1(P) for P in coord]),
    }


@pytest.fixture(scope="session")
def maps():
    return corpus()


@pytest.fixture
def rng():
    return random.Random(20261014)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
