import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcasc.analysis import (
    equiangularity,
    frame_diagnostics,
    frame_potential,
    mub_detect,
    tight_residual,
    wbe_check,
    wbe_rms,
)
from bcasc.bounds import welch_bound
from bcasc.codes import SphericalCode

from conftest import basis, random_code, random_unitary


def mub3():
    """Standard basis plus the three quadratic-phase Fourier bases in dimension 3."""
    w = np.exp(2j * np.pi / 3)
    j = np.arange(3)
    blocks = [np.eye(3)]
    for a in range(3):
        blocks.append(np.stack([w ** (a * j**2 + b * j) for b in range(3)], axis=1) / np.sqrt(3))
    return SphericalCode(np.hstack(blocks))


def sic3():
    """Nine-vector equiangular tight frame in dimension 3 (Weyl-Heisenberg orbit)."""
    w = np.exp(2j * np.pi / 3)
    fid = np.array([0, 1, -1]) / np.sqrt(2)
    cols = []
    for a in range(3):
        for b in range(3):
            cols.append(np.roll(fid, a) * w ** (b * np.arange(3)))
    return SphericalCode(np.stack(cols, axis=1))


def untf(n, m, seed):
    """Unit-norm tight frame: harmonic frame rotated by a random unitary."""
    k = np.arange(m)
    a = np.exp(2j * np.pi * np.outer(np.arange(n), k) / m) / np.sqrt(n)
    return SphericalCode(random_unitary(n, seed) @ a)


def test_potential_of_basis():
    assert frame_potential(basis(4)) == pytest.approx(4)
    assert tight_residual(basis(4)) == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize("n,m", [(2, 5), (3, 7), (4, 9)])
def test_tight_frame_potential(n, m):
    code = untf(n, m, seed=m)
    eig = np.linalg.eigvalsh(code.entries @ code.entries.conj().T)
    np.testing.assert_allclose(eig, m / n, atol=1e-12)
    assert frame_potential(code) == pytest.approx(m * m / n, abs=1e-9)
    assert tight_residual(code) < 1e-9


def test_etf_potential_and_flags():
    code = sic3()
    assert frame_potential(code) == pytest.approx(27, abs=1e-9)
    d = frame_diagnostics(code)
    assert d.is_mwbe and d.is_wbe and d.is_tight and d.is_equiangular
    assert wbe_check(code, 1e-9) == (True, pytest.approx(0.5))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 5), extra=st.integers(1, 12))
def test_potential_rms_identity(seed, n, extra):
    m = n + extra
    code = random_code(n, m, seed=seed)
    fp = frame_potential(code)
    rms = wbe_rms(code)
    assert fp == pytest.approx(m + m * (m - 1) * rms**2, rel=1e-10)
    assert fp >= m * m / n - 1e-9
    assert rms >= welch_bound(n, m) - 1e-9
    assert (tight_residual(code) < 1e-9) == (abs(fp - m * m / n) < 1e-9)


def test_degenerate_code_is_not_wbe():
    a = np.hstack([np.eye(3), np.eye(3)[:, :1]])
    ok, rms = wbe_check(SphericalCode(a))
    assert not ok and rms > welch_bound(3, 4)


def test_equiangularity():
    assert equiangularity(basis(3)) == (True, 0.0)
    ok, spread = equiangularity(random_code(3, 5, seed=1), 1e-3)
    assert not ok and spread > 1e-3


def test_mub_detects_known_set():
    part = mub_detect(mub3())
    assert part is not None and part.is_mub
    assert len(part.blocks) == 4
    assert part.cross_min == pytest.approx(1 / np.sqrt(3))
    assert part.cross_max == pytest.approx(1 / np.sqrt(3))


def test_mub_single_block():
    part = mub_detect(basis(3))
    assert part.blocks == [(0, 1, 2)] and part.is_mub
    assert part.cross_min is None


def test_mub_requires_divisibility():
    assert mub_detect(random_code(3, 16, seed=0)) is None


def test_mub_absent_for_random_code():
    assert mub_detect(random_code(3, 12, seed=0)) is None


def exhaustive_partitions(adj, size):
    """Every partition of the vertices into cliques of ``size``."""
    m = adj.shape[0]

    def rec(free):
        if not free:
            yield []
            return
        first, rest = free[0], free[1:]
        for others in itertools.combinations(rest, size - 1):
            block = (first,) + others
            if all(adj[p, q] for p, q in itertools.combinations(block, 2)):
                left = [v for v in rest if v not in others]
                for tail in rec(left):
                    yield [block] + tail

    return list(rec(list(range(m))))


@settings(max_examples=20, deadline=None)
@given(perm=st.permutations(range(12)), phases=st.lists(st.floats(0, 2 * np.pi), min_size=12, max_size=12))
def test_mub_matches_exhaustive_search(perm, phases):
    a = mub3().entries[:, perm] * np.exp(1j * np.array(phases))
    code = SphericalCode(a)
    adj = np.abs(code.entries.conj().T @ code.entries) < 1e-6
    np.fill_diagonal(adj, False)
    oracle = exhaustive_partitions(adj, 3)
    part = mub_detect(code)
    assert len(oracle) == 1
    assert sorted(part.blocks) == sorted(oracle[0])


def test_diagnostics_small_m():
    d = frame_diagnostics(basis(3))
    assert not d.is_wbe and not d.is_mwbe
    assert d.is_tight and d.frame_potential == pytest.approx(3)
    assert set(d.as_dict()) >= {"frame_potential", "mub_partition", "tight_residual"}
