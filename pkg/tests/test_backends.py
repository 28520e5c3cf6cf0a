from __future__ import annotations

import random

import pytest

from khdetect import _kernels, _purekernels


def _random_sparse(rng, nr, nc, density):
    entries = [
        (r, c) for r in range(nr) for c in range(nc) if rng.random() < density
    ]
    masks = [0] * nr
    for r, c in entries:
        masks[r] ^= 1 << c
    return entries, masks


def test_pure_sparse_rank_matches_dense_rank():
    rng = random.Random(3)
    for _ in range(80):
        nr, nc = rng.randrange(0, 10), rng.randrange(1, 10)
        entries, masks = _random_sparse(rng, nr, nc, 0.4)
        rows = [e[0] for e in entries]
        cols = [e[1] for e in entries]
        got = _purekernels.f2_sparse_rank(nr, nc, rows, cols)
        assert got == _purekernels.f2_rank(masks, nc)


def test_sparse_rank_cancels_duplicate_entries():
    # The same coordinate twice is zero mod 2.
    assert _purekernels.f2_sparse_rank(1, 1, [0, 0], [0, 0]) == 0
    assert _purekernels.f2_sparse_rank(2, 2, [0, 0, 0], [0, 0, 1]) == 1


def test_sparse_rank_rejects_out_of_range():
    with pytest.raises(IndexError):
        _purekernels.f2_sparse_rank(2, 2, [2], [0])


compiled = pytest.importorskip("khdetect._core")


def test_compiled_backend_is_loadable():
    assert compiled.BACKEND == "compiled"


def test_compiled_f2_rank_matches_pure():
    rng = random.Random(11)
    for _ in range(150):
        nr, nc = rng.randrange(0, 14), rng.randrange(1, 90)
        rows = [rng.getrandbits(nc) for _ in range(nr)]
        assert compiled.f2_rank(rows, nc) == _purekernels.f2_rank(rows, nc)


def test_compiled_f2_rank_wide_rows():
    # Multi-word rows: identity pattern spread over 200 columns.
    rows = [1 << (67 * i) for i in range(4)]
    assert compiled.f2_rank(rows, 0) == 4
    assert compiled.f2_rank([0, 0], 128) == 0


def test_compiled_sparse_rank_matches_pure():
    rng = random.Random(12)
    for _ in range(120):
        nr, nc = rng.randrange(0, 12), rng.randrange(1, 12)
        entries, masks = _random_sparse(rng, nr, nc, 0.35)
        rows = [e[0] for e in entries]
        cols = [e[1] for e in entries]
        got = compiled.f2_sparse_rank(nr, nc, rows, cols)
        assert got == _purekernels.f2_rank(masks, nc)


def test_compiled_sparse_rank_duplicates_and_ranges():
    assert compiled.f2_sparse_rank(1, 1, [0, 0], [0, 0]) == 0
    with pytest.raises(IndexError):
        compiled.f2_sparse_rank(2, 2, [0], [5])


def test_dispatcher_honors_pure_env(monkeypatch):
    import importlib
    import khdetect._kernels as K

    monkeypatch.setenv("KHDETECT_PURE", "1")
    K2 = importlib.reload(K)
    assert K2.backend_name() == "pure"
    monkeypatch.delenv("KHDETECT_PURE")
    K3 = importlib.reload(K)
    assert K3.backend_name() == "compiled"
