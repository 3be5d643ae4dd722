import math

import numpy as np
import pytest
from hypothesis import settings

from lsplines.operators import ExpGeneral, ExpSym, Linear, Trig
from lsplines.partition import make_partition

settings.register_profile("suite", deadline=None, max_examples=40)
settings.load_profile("suite")

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_acceptance(name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.append((name, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status}  {name}: {detail}")


def random_family(rng: np.random.Generator, lam_lo: float = 1e-6,
                  lam_hi: float = 50.0):
    """One of the four operator families with log-uniform parameters."""
    k = int(rng.integers(0, 4))
    if k == 0:
        return Linear()
    if k == 1:
        return ExpSym(10.0 ** rng.uniform(math.log10(lam_lo), math.log10(lam_hi)))
    if k == 2:
        l1 = 10.0 ** rng.uniform(math.log10(lam_lo), math.log10(lam_hi))
        l2 = -(10.0 ** rng.uniform(math.log10(lam_lo), math.log10(lam_hi)))
        return ExpGeneral(l1, l2)
    return Trig(10.0 ** rng.uniform(math.log10(lam_lo), math.log10(lam_hi)))


def random_admissible_partition(rng: np.random.Generator, family, n: int,
                                gap_lo: float = 1e-3, gap_hi: float = 2.0):
    """Random partition with log-uniform gaps, clipped to the family's cap."""
    gaps = 10.0 ** rng.uniform(math.log10(gap_lo), math.log10(gap_hi), size=n - 1)
    cap = family.interval_cap()
    if math.isfinite(cap):
        gaps = np.minimum(gaps, cap * (1 - 1e-3) * rng.uniform(0.2, 1.0, size=n - 1))
    return make_partition(np.concatenate([[0.0], np.cumsum(gaps)]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
