from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from measure_modes import Q, kernels
from measure_modes import _kernels_py

compiled = pytest.importorskip("measure_modes._kernels", reason="compiled kernels not built")

small = st.integers(-50, 50)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(small, min_size=n + 1, max_size=n + 1), st.lists(small, min_size=n, max_size=n))),
    st.integers(1, 3), st.booleans())
def test_scan_unions_parity(data, max_comp, closed):
    pts, cells = data
    assert compiled.scan_unions(pts, cells, max_comp, closed) == _kernels_py.scan_unions(pts, cells, max_comp, closed)


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.tuples(st.integers(0, 64), st.integers(0, 20)),
                                                   min_size=n, max_size=n)),
       st.integers(1, 5).flatmap(lambda n: st.lists(st.tuples(st.integers(0, 64), st.integers(0, 20)),
                                                   min_size=n, max_size=n)))
def test_prohorov_parity(a, b):
    xa = sorted({x for x, _ in a})
    ma = [sum(m for x, m in a if x == y) for y in xa]
    xb = sorted({x for x, _ in b})
    mb = [sum(m for x, m in b if x == y) for y in xb]
    assert (compiled.prohorov_one_sided(xa, ma, xb, mb)
            == _kernels_py.prohorov_one_sided(xa, ma, xb, mb))


def test_backend_dispatch_falls_back_for_huge_integers():
    big = [2**70, 1, 2**70]
    assert kernels.scan_unions(big, [1, -1], 2, False) == _kernels_py.scan_unions(big, [1, -1], 2, False)


def test_scale_to_integers():
    ints, d = kernels.scale_to_integers([Q(1, 2), Q(1, 3), Q(0)])
    assert d == 6 and ints == [3, 2, 0]
    assert all(type(i) is int for i in ints)
