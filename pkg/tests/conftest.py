import itertools
import pathlib
import sys

import numpy as np
import pytest

# allow running the suite from a clean checkout without installing
_src = pathlib.Path(__file__).resolve().parent.parent / "src"
if str(_src) not in sys.path:
    sys.path.insert(0, str(_src))


def brute_force_schur(ks, lo, hi, bound):
    """Independent oracle: enumerate sign vectors coordinatewise.

    Checks the four partial-sum conditions directly on each candidate in the
    product box [-bound, bound]^J; only usable at tiny sizes.
    """
    out = set()
    J = len(ks)
    for eps in itertools.product(range(-bound, bound + 1), repeat=J):
        s = 0
        ok = True
        seen_pos = False
        exceeded = False
        for e in eps:
            s += e
            if s < 0 or (seen_pos and s <= 0):
                ok = False
                break
            if s > 0:
                seen_pos = True
            if s > 1:
                exceeded = True
        if ok and s == 1 and exceeded:
            m = sum(e * k for e, k in zip(eps, ks))
            if lo <= m <= hi:
                out.add(m)
    return sorted(out)


def random_lacunary(rng, max_j=8, k_max=10**6, start_max=50):
    """Random strictly increasing strongly lacunary integer enumeration."""
    J = int(rng.integers(1, max_j + 1))
    ks = [int(rng.integers(1, start_max))]
    while len(ks) < J:
        nxt = 2 * ks[-1] + int(rng.integers(1, max(2, ks[-1])))
        if nxt > k_max:
            break
        ks.append(nxt)
    return ks


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
