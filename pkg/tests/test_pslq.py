import mpmath as mp
import numpy as np
import pytest

from symclose._expr import parse_real
from symclose._pslq import DeadlineExceeded, pslq


def run(values, digits=50, bound=10_000):
    with mp.workdps(digits):
        xs = [parse_real(v) if isinstance(v, str) else v for v in values]
        tol = mp.mpf(10) ** (-digits // 2)
        return pslq(xs, tol, bound)


def test_simple_relations():
    assert run(["pi", "pi/4"]) in ([1, -4], [-1, 4])
    assert run(["pi", "acos(1/3)", "acos(1/3)"]) in ([0, 1, -1], [0, -1, 1])


def test_no_relation_for_arccos_one_third():
    assert run(["pi", "acos(1/3)"], digits=64) is None


def test_planted_relations_agree_with_mpmath():
    rng = np.random.default_rng(7)
    with mp.workdps(60):
        for _ in range(40):
            base = [mp.pi, mp.acos(mp.mpf(1) / 3), mp.log(3)]
            coeffs = [int(c) for c in rng.integers(-30, 31, size=3)]
            if coeffs[-1] == 0:
                coeffs[-1] = 1
            # last value makes sum(c_j x_j) - c x_last = 0 exactly
            last = mp.fsum(c * b for c, b in zip(coeffs, base)) / 7
            values = base + [last]
            ours = pslq(values, mp.mpf(10) ** -30, 1000)
            theirs = mp.pslq(values, tol=mp.mpf(10) ** -30, maxcoeff=1000, maxsteps=10**5)
            assert ours is not None and theirs is not None
            assert abs(mp.fsum(c * v for c, v in zip(ours, values))) < mp.mpf(10) ** -30
            # the relation lattice is one-dimensional here, so both agree up to sign
            assert ours in (theirs, [-c for c in theirs])


def test_deadline():
    with mp.workdps(200):
        values = [mp.pi] + [mp.acos(mp.mpf(1) / (2 * j + 1)) for j in range(1, 8)]
        with pytest.raises(DeadlineExceeded):
            pslq(values, mp.mpf(10) ** -100, 10**12, deadline=0.0)


def test_expression_parser():
    with mp.workdps(30):
        assert parse_real("acos(1/3)") == mp.acos(mp.mpf(1) / 3)
        assert parse_real("-2*pi + sqrt(4)") == 2 - 2 * mp.pi
        assert parse_real("0.1") == mp.mpf("0.1")
    with pytest.raises(ValueError):
        parse_real("__import__('os')")
    with pytest.raises(ValueError):
        parse_real("1 +")
