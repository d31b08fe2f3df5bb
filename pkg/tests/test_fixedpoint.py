import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetametric import (
    CaristiData,
    FiniteSpace,
    InputError,
    InvariantError,
    MultiMap,
    PointOracle,
    Sampler,
    TableMap,
    banach_solve,
    bundled_fixtures,
    caristi_fixed_point,
    caristi_order,
    check_gamma,
    check_psi,
    endpoint,
    estimate_contraction,
    make_action,
    minimal_elements,
    psi_from_phi,
)
from thetametric.errors import PreconditionError
from thetametric.fixedpoint import fixed_points, gamma_rational, psi_inverse_bound, verify_partial_order

LINE = PointOracle.functional(lambda a, b: abs(a - b))


@pytest.fixture
def chain():
    fx = bundled_fixtures()["caristi-chain"]
    sp = fx.build_space()
    a = fx.build_action()
    return fx, sp, a, fx.build_caristi(sp, a)


# -- contraction estimate and Banach iteration --------------------------------------


def test_estimate_contraction():
    pairs = [(0.0, 1.0), (2.0, 7.0), (-3.0, 4.0)]
    assert estimate_contraction(LINE, lambda x: x / 2, pairs) == 0.5
    assert estimate_contraction(LINE, lambda x: x, pairs) == 1.0
    assert estimate_contraction(LINE, lambda x: 3.0, pairs) == 0.0
    with pytest.raises(InputError):
        estimate_contraction(LINE, lambda x: x, [])
    with pytest.raises(InputError):
        estimate_contraction(LINE, lambda x: x, [(1.0, 1.0)])
    with pytest.raises(InputError):
        estimate_contraction(LINE, lambda x: x)


def test_estimate_contraction_on_table():
    fx = bundled_fixtures()["contraction-5pt"]
    sp = fx.build_space()
    po = PointOracle.finite(sp)
    assert estimate_contraction(po, fx.build_map(sp)) == 0.5


def test_halving_map():
    tr = banach_solve(LINE, lambda x: x / 2, 1.0, tol_fix=1e-8, alpha_hat=0.5)
    # step k is exactly 2^-k; stop at the first k with 2^-k <= 1e-8
    k = next(k for k in range(1, 100) if Fraction(1, 2**k) <= Fraction(1, 10**8))
    assert tr.converged and tr.iterations == k == 27
    assert tr.result == 2.0**-k and abs(tr.result) <= 1e-8
    assert tr.decay_violations == []
    assert tr.residual == 2.0 ** -(k + 1)


def test_constant_map_takes_one_real_step():
    tr = banach_solve(LINE, lambda x: 4.0, 1.0)
    assert tr.iterates[1] == 4.0 and tr.result == 4.0
    assert tr.step_dists == [3.0, 0.0]


def test_two_cycle_hits_max_iter():
    tr = banach_solve(LINE, lambda x: -x, 1.0, max_iter=50, alpha_hat=0.5)
    assert tr.status == "max_iter" and tr.result is None and tr.iterations == 50
    assert tr.decay_violations == list(range(1, 50))


def test_divergence():
    tr = banach_solve(LINE, lambda x: x * 1e200, 1.0)
    assert tr.status == "diverged" and tr.result is None


def test_banach_argument_errors():
    with pytest.raises(InputError):
        banach_solve(LINE, lambda x: x, 0.0, tol_fix=0.0)
    with pytest.raises(InputError):
        banach_solve(LINE, lambda x: x, 0.0, max_iter=0)


def test_finite_contraction_unique_fixed_point():
    fx = bundled_fixtures()["contraction-5pt"]
    sp = fx.build_space()
    po = PointOracle.finite(sp)
    T = fx.build_map(sp)
    for x0 in po.points():
        tr = banach_solve(po, T, x0, alpha_hat=0.5)
        assert tr.converged and sp.labels[tr.result] == "q0"
    assert fixed_points(po, T) == [0]


@settings(max_examples=60, deadline=None)
@given(
    alpha=st.floats(0.0, 0.95),
    c=st.floats(-100, 100),
    x0=st.floats(-1e3, 1e3),
)
def test_affine_contractions_converge_to_their_root(alpha, c, x0):
    tr = banach_solve(LINE, lambda x: alpha * x + c, x0, alpha_hat=alpha, tol_cmp=1e-9)
    assert tr.converged
    root = c / (1.0 - alpha)
    # |x_n - x*| <= step / (1 - alpha)
    assert abs(tr.result - root) <= 1e-8 * (1 + alpha / (1 - alpha)) + 1e-9 * max(1.0, abs(root))
    assert tr.decay_violations == []


# -- potentials and scaling maps -----------------------------------------------------


def test_telescoping_potential_passes(chain):
    _, sp, a, cd = chain
    rep = check_psi(sp, a, cd)
    assert rep.passed
    assert rep.notes["semicontinuity"] == "vacuous on a finite space"


def test_constant_potential_breaks_triangle():
    sp = FiniteSpace(["a", "b", "c"], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    psi = np.ones((3, 3)) - np.eye(3)
    rep = check_psi(sp, make_action("k_sum"), CaristiData(lambda t: t, psi))
    assert not rep.status["E3"] and rep.status["E2"]
    # theta(1, 1) = 2 > 1 on the distinct triple (a, b, c)
    v = next(v for v in rep.violations if v.inputs == {"x": "a", "y": "b", "z": "c"})
    assert v.values == {"theta_psi_xy_psi_yz": 2.0, "psi_xz": 1.0}


def test_nonzero_diagonal():
    sp = FiniteSpace(["a", "b"], [[0, 1], [1, 0]])
    rep = check_psi(sp, make_action("k_sum"), CaristiData(lambda t: t, np.array([[1.0, 0.0], [0.0, 0.0]])))
    assert not rep.status["E2"]


def test_one_point_potential():
    sp = FiniteSpace(["o"], [[0]])
    assert check_psi(sp, make_action("sum_plus_prod"), CaristiData(lambda t: t, np.zeros((1, 1)))).passed


def test_exponential_potential_breaks_triangle():
    sp = FiniteSpace(["a", "b"], [[0, 1], [1, 0]])
    a = make_action("prod_over_one_plus_prod")
    psi = psi_from_phi([0.0, 1.5], "exp", a)
    cd = CaristiData.tabulate(sp, lambda t: t, psi)
    rep = check_psi(sp, a, cd)
    # theta(e^u, e^-u) = 1 / (1 + 1) > psi(x, x) = 0
    bad = [v for v in rep.violations if v.inputs["x"] == v.inputs["z"]]
    assert bad and bad[0].values["theta_psi_xy_psi_yz"] == pytest.approx(0.5)


def test_psi_from_phi_forms():
    psi = psi_from_phi([4.0, 2.0, 0.0], ("odd_root", 1), make_action("root_sum_power", n=3))
    assert psi(0, 2) == pytest.approx(-(4.0 ** (1 / 3)), rel=1e-15)
    assert psi(2, 0) == pytest.approx(4.0 ** (1 / 3), rel=1e-15)
    flat = psi_from_phi([1.0, 1.0], "exp")
    assert flat(0, 1) == 1.0 and flat(0, 0) == 0.0
    with pytest.warns(UserWarning, match="not designed"):
        psi_from_phi([1.0, 2.0], "exp", make_action("k_sum"))
    with pytest.raises(InputError):
        psi_from_phi([1.0], ("odd_root", -1))
    with pytest.raises(InputError):
        psi_from_phi([1.0], "log")


def test_gamma_checks():
    plus = make_action("k_sum")
    sp = Sampler(random_points=500)
    assert check_gamma(CaristiData(lambda t: t, np.zeros((1, 1))), plus, sp).passed
    rep = check_gamma(CaristiData(gamma_rational, np.zeros((1, 1))), plus, Sampler(random_points=10_000))
    assert rep.passed and rep.notes["pairs"] >= 10_000
    sq = check_gamma(CaristiData(lambda t: t * t, np.zeros((1, 1))), plus, sp)
    assert not sq.status["subadditive"] and sq.status["nondecreasing"]
    # (x + y)^2 > x^2 + y^2 whenever x, y > 0, e.g. 4 > 2 at (1, 1)
    for v in sq.violations:
        x, y = v.inputs["x"], v.inputs["y"]
        assert x > 0 and y > 0 and v.values["gamma_theta"] == (x + y) ** 2
    assert len(sq.violations) >= 500
    bad = check_gamma(CaristiData(lambda t: t + 1.0, np.zeros((1, 1))), plus, sp)
    assert not bad.status["zero"]
    flat = check_gamma(CaristiData(lambda t: 0.0, np.zeros((1, 1))), plus, sp)
    assert not flat.status["positive"]


def test_caristi_json_variants():
    sp = FiniteSpace(["a", "b"], [[0, 1], [1, 0]])
    cd = CaristiData.from_json(
        {"gamma": {"kind": "custom_table", "t": [0, 1], "values": [0, 2]}, "psi": {"kind": "table", "table": {"a": {"a": 0, "b": 3}, "b": {"a": -3, "b": 0}}}},
        sp,
    )
    assert cd.gamma(0.5) == 1.0 and cd.gamma(3.0) == 6.0
    assert cd.psi.tolist() == [[0.0, 3.0], [-3.0, 0.0]]
    assert CaristiData.from_json({"gamma": {"kind": "rational"}, "psi": {"kind": "table", "table": [[0, 1], [1, 0]]}}, sp).gamma(1.0) == 0.5
    for bad in (
        {},
        {"psi": {"kind": "nope", "phi": {"a": 0, "b": 0}}},
        {"gamma": {"kind": "nope"}, "psi": {"kind": "table", "table": [[0]]}},
        {"psi": {"kind": "table", "table": [[0]]}},
        {"psi": {"kind": "table", "table": {"a": {"a": 0}}}},
        {"psi": {"kind": "exp_phi", "phi": {"a": 0}}},
        {"psi": {"kind": "exp_phi"}},
        {"gamma": {"kind": "custom_table", "t": [1, 0], "values": [0, 1]}, "psi": {"kind": "table", "table": [[0, 0], [0, 0]]}},
    ):
        with pytest.raises(InputError):
            CaristiData.from_json(bad, sp)


def test_inverse_bound_on_bundled_potentials():
    for fx in bundled_fixtures().values():
        if fx.caristi is None:
            continue
        sp = fx.build_space()
        a = fx.build_action()
        checked, viol = psi_inverse_bound(sp, a, fx.build_caristi(sp, a))
        assert checked > 0 and viol == []


# -- order, minimal elements, fixed points -----------------------------------------------


def test_chain_order(chain):
    _, sp, a, cd = chain
    R = caristi_order(sp, a, cd)
    # x precedes y iff |i - j| <= phi(y) - phi(x), i.e. x sits further down the chain
    expected = [[True, False, False], [True, True, False], [True, True, True]]
    assert R.tolist() == expected
    assert minimal_elements(R) == [2]


def test_minimal_elements_cases():
    assert minimal_elements(np.eye(3, dtype=bool)) == [0, 1, 2]
    R = np.eye(4, dtype=bool)
    R[1, 0] = R[3, 2] = True
    assert minimal_elements(R) == [1, 3]


def test_verify_partial_order_rejects():
    with pytest.raises(InvariantError, match="reflexive"):
        verify_partial_order(np.zeros((2, 2), dtype=bool))
    with pytest.raises(InvariantError, match="antisymmetric"):
        verify_partial_order(np.ones((2, 2), dtype=bool))
    R = np.eye(3, dtype=bool)
    R[0, 1] = R[1, 2] = True
    with pytest.raises(InvariantError, match="transitive"):
        verify_partial_order(R)


def test_chain_fixed_point_and_endpoint(chain):
    fx, sp, a, cd = chain
    res = caristi_fixed_point(sp, a, cd, fx.build_map(sp))
    assert res.point == "p2" and res.minimal == ["p2"]
    assert endpoint(sp, a, cd, fx.build_multimap(sp)).point == "p2"


def test_cuberoot_fixture():
    fx = bundled_fixtures()["caristi-cuberoot"]
    sp = fx.build_space()
    a = fx.build_action()
    cd = fx.build_caristi(sp, a)
    assert check_psi(sp, a, cd).passed
    assert caristi_fixed_point(sp, a, cd, fx.build_map(sp)).point == "p2"
    assert endpoint(sp, a, cd, fx.build_multimap(sp)).point == "p2"


def test_caristi_preconditions(chain):
    fx, sp, a, cd = chain
    with pytest.raises(PreconditionError, match="hypothesis"):
        caristi_fixed_point(sp, a, cd, TableMap.from_labels(sp, {"p0": "p1", "p1": "p2", "p2": "p0"}))
    with pytest.raises(PreconditionError, match="hypothesis"):
        endpoint(sp, a, cd, MultiMap.from_labels(sp, {"p0": ["p1"], "p1": ["p0"], "p2": ["p2"]}))
    with pytest.raises(PreconditionError, match="not regular"):
        caristi_fixed_point(sp, make_action("k_sum", k=0.5), cd, fx.build_map(sp))
    bad = CaristiData(lambda t: t, np.ones((3, 3)) - np.eye(3))
    with pytest.raises(PreconditionError, match="psi"):
        caristi_order(sp, a, bad)
    with pytest.raises(PreconditionError, match="gamma"):
        caristi_order(sp, a, CaristiData(lambda t: t * t, cd.psi))
    with pytest.raises(InputError):
        caristi_fixed_point(sp, a, cd, TableMap([0, 1]))


def test_map_validation():
    sp = bundled_fixtures()["caristi-chain"].build_space()
    with pytest.raises(InputError):
        TableMap([0, 5])
    with pytest.raises(InputError):
        TableMap.from_labels(sp, {"p0": "p0"})
    with pytest.raises(InputError):
        TableMap.from_labels(sp, {"p0": "p9", "p1": "p1", "p2": "p2"})
    with pytest.raises(InputError):
        MultiMap([[], [1]])
    with pytest.raises(InputError):
        MultiMap([[3], [1]])
    with pytest.raises(InputError):
        MultiMap.from_labels(sp, {"p0": ["p0"]})


@settings(max_examples=40, deadline=None)
@given(
    pos=st.lists(st.integers(-50, 50), min_size=1, max_size=7, unique=True),
    phi=st.lists(st.integers(0, 100), min_size=7, max_size=7),
    picks=st.lists(st.integers(0, 6), min_size=7, max_size=7),
)
def test_random_caristi_maps_have_fixed_points(pos, phi, picks):
    n = len(pos)
    labels = [f"x{i}" for i in range(n)]
    sp = FiniteSpace(labels, [[abs(p - q) for q in pos] for p in pos])
    a = make_action("k_sum")
    phi = [float(v) for v in phi[:n]]
    cd = CaristiData.tabulate(sp, lambda t: t, psi_from_phi(phi, ("odd_root", 0), a))
    # a Caristi map may send x anywhere with d(x, y) <= phi(x) - phi(y); x itself always qualifies
    table = []
    for i in range(n):
        ok = [j for j in range(n) if abs(pos[i] - pos[j]) <= phi[i] - phi[j]]
        table.append(ok[picks[i] % len(ok)])
    T = TableMap(table)
    res = caristi_fixed_point(sp, a, cd, T, Sampler(random_points=50))
    x = sp.index(res.point)
    assert T(x) == x
    # a minimal element admits no strict predecessor, checked directly
    assert not any(abs(pos[y] - pos[x]) <= phi[x] - phi[y] for y in range(n) if y != x)
