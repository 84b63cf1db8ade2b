import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtmom.count import iter_members
from gtmom.gt import (
    ConstrainedArray,
    GTPattern,
    ParamTriple,
    Signature,
    Tableau,
    ValidationError,
    _relabel_to_array,
    _relabel_to_rows,
    array_to_gt,
    cell,
    gt_to_array,
    gt_to_tableau,
    interlaces,
    sum_constraints,
    tableau_to_gt,
    top_signature,
    validate_array,
    validate_gt_constraints,
    validate_tableau_constraints,
)

EXAMPLE = GTPattern.from_lists([(1,), (2, 0), (2, 1, 0), (2, 2, 0, 0)])
P221 = ParamTriple(2, 2, 1)


def test_param_triple_validation():
    assert ParamTriple(0, 1, 1).size == 1
    assert ParamTriple(3, 3, 2).depth == 12
    for bad in [(-1, 1, 1), (1, 0, 1), (1, 1, 0)]:
        with pytest.raises(ValueError):
            ParamTriple(*bad)
    with pytest.raises(ValueError):
        ParamTriple(1.5, 1, 1)
    with pytest.raises(ValueError):
        ParamTriple(True, 1, 1)


def test_signature_rules():
    assert Signature((3, 3, 0, 0)).length == 4
    with pytest.raises(ValueError):
        Signature((1, 2))
    with pytest.raises(ValueError):
        Signature((1, -1))
    with pytest.raises(ValueError):
        Signature(("a",))


@pytest.mark.parametrize(
    "lower, upper, expected",
    [((1,), (2, 0), True), ((2,), (1, 0), False), ((2, 1, 0), (2, 2, 0, 0), True), ((0,), (0, 0), True)],
)
def test_interlaces(lower, upper, expected):
    assert interlaces(lower, upper) is expected


def test_interlaces_length_mismatch():
    with pytest.raises(ValueError):
        interlaces((1, 0), (1, 0))


def test_top_signature():
    assert top_signature(P221).parts == (2, 2, 0, 0)
    assert top_signature(ParamTriple(0, 1, 1)).parts == (0, 0)
    assert top_signature(ParamTriple(3, 1, 2)).parts == (3, 3, 0, 0)


def test_pattern_structure_errors():
    with pytest.raises(ValueError):
        GTPattern.from_lists([(1,), (1, 0, 0)])
    with pytest.raises(ValidationError):
        GTPattern.from_lists([(2,), (1, 0)])


def test_gt_to_tableau_examples():
    t = gt_to_tableau(GTPattern.from_lists([(1,), (2, 0)]))
    assert t.shape.parts == (2, 0) and t.rows == ((1, 2), ())
    t0 = gt_to_tableau(GTPattern.from_lists([(0,), (0, 0)]))
    assert t0.rows == ((), ())
    g = tableau_to_gt(Tableau(Signature((2, 2)), ((1, 1), (2, 2))))
    assert g == GTPattern.from_lists([(2,), (2, 2)])


def test_tableau_semistandard_checks():
    with pytest.raises(ValidationError):
        Tableau(Signature((2, 2)), ((1, 1), (1, 2)))  # column not strict
    with pytest.raises(ValidationError):
        Tableau(Signature((2, 0)), ((2, 1), ()))  # row decreasing
    with pytest.raises(ValueError):
        Tableau(Signature((2, 0)), ((1,), ()))  # wrong row length


def test_validate_gt_constraints_examples():
    assert validate_gt_constraints(EXAMPLE, P221)
    bad = GTPattern.from_lists([(1,), (1, 0), (2, 1, 0), (2, 2, 0, 0)])
    assert not validate_gt_constraints(bad, P221)
    zero = GTPattern.from_lists([(0,) * (i + 1) for i in range(6)])
    assert validate_gt_constraints(zero, ParamTriple(0, 3, 1))
    with pytest.raises(ValueError):
        validate_gt_constraints(EXAMPLE, ParamTriple(3, 2, 1))
    with pytest.raises(ValueError):
        validate_gt_constraints(EXAMPLE, ParamTriple(2, 1, 1))


def test_validate_tableau_constraints_examples():
    p = ParamTriple(1, 1, 1)
    assert validate_tableau_constraints(Tableau(Signature((1, 0)), ((1,), ())), p)
    assert validate_tableau_constraints(gt_to_tableau(EXAMPLE), P221)
    three_small = Tableau(Signature((2, 2, 0, 0)), ((1, 1), (2, 3), (), ()))
    assert not validate_tableau_constraints(three_small, P221)
    with pytest.raises(ValueError):
        validate_tableau_constraints(Tableau(Signature((1, 0)), ((1,), ())), P221)


def test_gt_to_array_example():
    x = gt_to_array(EXAMPLE, P221)
    assert x.entries == ((1, 2), (0, 1))
    assert cell(2, 1) == (0, 1)
    assert x.x(1, 1) == 1
    assert x.x(2, 1) == 2 and x.x(1, 2) == 0 and x.x(2, 2) == 1
    assert array_to_gt(x) == EXAMPLE


def test_zero_pattern_maps_to_zero_array():
    p = ParamTriple(0, 2, 2)
    zero = GTPattern.from_lists([(0,) * (i + 1) for i in range(p.depth)])
    x = gt_to_array(zero, p)
    assert all(v == 0 for row in x.entries for v in row)


def test_gt_to_array_rejects_invalid():
    bad = GTPattern.from_lists([(1,), (1, 0), (2, 1, 0), (2, 2, 0, 0)])
    with pytest.raises(ValidationError):
        gt_to_array(bad, P221)
    with pytest.raises(ValidationError):
        array_to_gt(ConstrainedArray(ParamTriple(1, 2, 1), ((0, 0), (1, 0))))


def test_validate_array_examples():
    p = ParamTriple(1, 2, 1)
    assert validate_array(ConstrainedArray(p, ((0, 1), (0, 0))))
    assert not validate_array(ConstrainedArray(p, ((0, 0), (1, 0))))
    assert not validate_array(ConstrainedArray(p, ((0, 0), (0, 0))))  # sum 0 != 1
    assert not validate_array(ConstrainedArray(p, ((0, 2), (0, 0))))  # entry above N
    with pytest.raises(ValueError):
        ConstrainedArray(p, ((0, 1),))


def test_sum_constraints_k3():
    cons = sum_constraints(ParamTriple(2, 3, 1))
    cells = sorted(tuple(sorted(c)) for c, _ in cons)
    assert cells == [((1, 2), (2, 1)), ((2, 3), (3, 2))]
    assert all(t == 2 for _, t in cons)
    # even k: the two l = k/2 constraints coincide and appear once
    assert len(sum_constraints(ParamTriple(1, 2, 1))) == 1
    assert len(sum_constraints(ParamTriple(1, 4, 1))) == 3


def test_k3_members_satisfy_both_sums():
    p = ParamTriple(2, 3, 1)
    for rows in iter_members(p):
        x = ConstrainedArray(p, rows)
        assert x.x(1, 2) + x.x(2, 1) == 2
        assert x.x(2, 3) + x.x(3, 2) == 2


def test_json_roundtrips():
    assert GTPattern.from_json(EXAMPLE.to_json()) == EXAMPLE
    t = gt_to_tableau(EXAMPLE)
    assert Tableau.from_json(t.to_json()) == t
    x = gt_to_array(EXAMPLE, P221)
    assert ConstrainedArray.from_json(x.to_json()) == x
    assert x.to_json()["matrix"] == [[1, 2], [0, 1]]


@pytest.mark.parametrize("N,k,beta", [(2, 2, 1), (2, 3, 1), (1, 2, 2), (2, 1, 2)])
def test_fixed_coordinate_law(N, k, beta):
    p = ParamTriple(N, k, beta)
    m = p.size
    for rows in iter_members(p):
        g = array_to_gt(ConstrainedArray(p, rows))
        for j in range(1, m):
            row = g.row(2 * m - j).parts
            assert row[: m - j] == (N,) * (m - j)
            assert row[len(row) - (m - j):] == (0,) * (m - j)


@pytest.mark.parametrize("N,k,beta", [(2, 2, 1), (3, 2, 1), (2, 3, 1), (1, 2, 2), (2, 1, 2)])
def test_constraint_transport_on_all_patterns(N, k, beta):
    """Every interlacing pattern with the right top row: the three validators agree."""
    p = ParamTriple(N, k, beta)
    members = {tuple(r) for r in iter_members(p)}
    seen = 0
    for g in _all_patterns(top_signature(p).parts):
        ok_g = validate_gt_constraints(g, p)
        ok_t = validate_tableau_constraints(gt_to_tableau(g), p)
        arr = _relabel_to_array(g, p)
        ok_x = validate_array(ConstrainedArray(p, arr))
        assert ok_g == ok_t == ok_x
        assert (arr in members) == ok_g
        seen += ok_g
    assert seen == len(members)


def _all_patterns(top):
    """All GT patterns with the given top row (small cases only)."""

    def below(row):
        ranges = [range(row[i + 1], row[i] + 1) for i in range(len(row) - 1)]
        return itertools.product(*ranges)

    def rec(rows):
        if len(rows[0]) == 1:
            yield GTPattern.from_lists(rows)
            return
        for r in below(rows[0]):
            yield from rec([r] + rows)

    yield from rec([tuple(top)])


@st.composite
def monotone_arrays(draw, max_m=4, max_N=4):
    m = draw(st.integers(1, max_m))
    N = draw(st.integers(0, max_N))
    X = [[0] * m for _ in range(m)]
    for r in range(m):
        for c in range(m):
            lo = X[r][c - 1] if c else 0
            hi = X[r - 1][c] if r else N
            X[r][c] = draw(st.integers(lo, hi)) if lo <= hi else lo
    return m, N, tuple(tuple(r) for r in X)


@settings(max_examples=200, deadline=None)
@given(monotone_arrays())
def test_relabelling_transports_monotone_arrays_to_patterns(data):
    """Without sum constraints the relabelling is a bijection onto interlacing patterns."""
    m, N, X = data
    p = ParamTriple(N, 1, m)  # size m, no sum constraints
    rows = _relabel_to_rows(X, p)
    g = GTPattern.from_lists(rows)  # raises unless every pair interlaces
    assert g.top == top_signature(p)
    assert _relabel_to_array(g, p) == X


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_tableau_roundtrip_random_patterns(data):
    depth = data.draw(st.integers(1, 5))
    top = sorted(data.draw(st.lists(st.integers(0, 4), min_size=depth, max_size=depth)), reverse=True)
    rows = [tuple(top)]
    while len(rows[0]) > 1:
        row = rows[0]
        rows.insert(0, tuple(data.draw(st.integers(row[i + 1], row[i])) for i in range(len(row) - 1)))
    g = GTPattern.from_lists(rows)
    assert tableau_to_gt(gt_to_tableau(g)) == g
