from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from tilescape import _kernels

BACKENDS = [pytest.param(_kernels.python_backend, id="python")]
if _kernels.compiled_backend is not None:
    BACKENDS.append(pytest.param(_kernels.compiled_backend, id="compiled"))

masks = st.tuples(st.integers(1, 12), st.integers(1, 12)).flatmap(
    lambda s: arrays(np.bool_, s, elements=st.booleans()))


def _cells(mask):
    ys, xs = np.nonzero(mask)
    return set(zip(xs.tolist(), ys.tolist()))


def test_compiled_backend_is_active_when_built():
    if _kernels.compiled_backend is None:
        pytest.skip("extension not built")
    assert _kernels.BACKEND == "compiled"


@pytest.mark.parametrize("k", BACKENDS)
@given(mask=masks)
def test_label4_matches_flood_fill(k, mask):
    labels, count = k.label4(mask)
    comps = oracles.components(_cells(mask))
    assert count == len(comps)
    assert (labels[~mask] == -1).all()
    for idx, comp in enumerate(comps):
        ids = {int(labels[y, x]) for x, y in comp}
        assert ids == {idx}  # numbered by first cell in row-major order


@pytest.mark.parametrize("k", BACKENDS)
@given(mask=masks, data=st.data())
def test_bfs_distances_match_oracle(k, mask, data):
    h, w = mask.shape
    start = (data.draw(st.integers(0, w - 1)), data.draw(st.integers(0, h - 1)))
    dist = k.bfs_distances(mask, start)
    cells = _cells(mask)
    for y in range(h):
        for x in range(w):
            expect = oracles.bfs_path_length(cells, start, (x, y))
            assert dist[y, x] == (-1 if expect is None else expect)


@pytest.mark.parametrize("k", BACKENDS)
@given(mask=masks, data=st.data())
def test_shortest_path_is_valid_and_minimal(k, mask, data):
    h, w = mask.shape
    start = (data.draw(st.integers(0, w - 1)), data.draw(st.integers(0, h - 1)))
    goal = (data.draw(st.integers(0, w - 1)), data.draw(st.integers(0, h - 1)))
    path = k.shortest_path(mask, start, goal)
    expect = oracles.bfs_path_length(_cells(mask), start, goal)
    if expect is None:
        assert path is None
        return
    assert path[0] == start and path[-1] == goal
    assert len(path) - 1 == expect
    for (ax, ay), (bx, by) in zip(path, path[1:]):
        assert abs(ax - bx) + abs(ay - by) == 1
        assert mask[by, bx]


@given(mask=masks, data=st.data())
def test_backends_agree_exactly(mask, data):
    if _kernels.compiled_backend is None:
        pytest.skip("extension not built")
    py, c = _kernels.python_backend, _kernels.compiled_backend
    h, w = mask.shape
    start = (data.draw(st.integers(0, w - 1)), data.draw(st.integers(0, h - 1)))
    goal = (data.draw(st.integers(0, w - 1)), data.draw(st.integers(0, h - 1)))
    la, na = py.label4(mask)
    lb, nb = c.label4(mask)
    assert na == nb and (la == lb).all()
    assert (py.bfs_distances(mask, start) == c.bfs_distances(mask, start)).all()
    assert py.shortest_path(mask, start, goal) == c.shortest_path(mask, start, goal)


def test_pure_python_env_switch(monkeypatch):
    import importlib

    monkeypatch.setenv("TILESCAPE_PURE_PYTHON", "1")
    mod = importlib.reload(_kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.label4 is mod.python_backend.label4
    finally:
        monkeypatch.delenv("TILESCAPE_PURE_PYTHON")
        importlib.reload(_kernels)
