import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from localpriv import Alphabet, Channel, Prior  # noqa: E402

ACCEPTANCE_LINES = []


def random_channel(rng, n_in, n_out, sparse=False):
    m = rng.dirichlet(np.ones(n_out), size=n_in)
    if sparse:
        mask = rng.random(m.shape) < 0.3
        mask[np.arange(n_in), rng.integers(0, n_out, n_in)] = False
        m = np.where(mask, 0.0, m)
        m /= m.sum(axis=1, keepdims=True)
    return Channel.from_rows(m)


def random_prior(rng, alphabet):
    return Prior(alphabet, rng.dirichlet(np.ones(len(alphabet))))


def random_suite(seed=20261015, dense=1000, sparse=200):
    """Random (channel, full-support prior) instances with sizes 2..8."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(dense + sparse):
        n_in, n_out = rng.integers(2, 9, size=2)
        c = random_channel(rng, n_in, n_out, sparse=i >= dense)
        out.append((c, random_prior(rng, c.input)))
    return out


@pytest.fixture(scope="session")
def suite():
    return random_suite()


def grid_rows(n_out, step=4):
    """All probability rows of length n_out with entries in multiples of 1/step."""
    return [tuple(v / step for v in combo)
            for combo in itertools.product(range(step + 1), repeat=n_out)
            if sum(combo) == step]


def grid_channels(max_in=3, max_out=3, min_in=2):
    for n_in in range(min_in, max_in + 1):
        for n_out in range(1, max_out + 1):
            rows = grid_rows(n_out)
            for combo in itertools.product(rows, repeat=n_in):
                yield np.array(combo)


@pytest.fixture
def binary():
    return Alphabet(("yes", "no"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
