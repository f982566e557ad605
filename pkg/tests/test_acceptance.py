"""Acceptance battery.

One test per criterion; each asserts its stated tolerance, enforces its
runtime budget (kernels are pre-compiled by the session fixture), and prints
a ``ACCEPTANCE n ... PASS`` line. Run with ``pytest tests/test_acceptance.py
-v -s`` to see the lines.
"""

import time

import numpy as np
import pytest

from sepkit._kernels import product_form_batch
from sepkit.criteria import ENTANGLED, SEPARABLE, decide, lmpp_spectral_test, ppt_check
from sepkit.errors import OrthogonalityViolationError
from sepkit.maps_witnesses import (
    Witness,
    bloch_action,
    certify_witness,
    decompose_witness_2x2,
    eval_witness,
    map_from_witness,
    witness_from_map,
)
from sepkit.product_opt import OptBudget, grid_extremize, seesaw_extremize
from sepkit.states import (
    MultipartiteState,
    ProductVector,
    density_from_pure,
    haar_product_locals_batch,
    max_entangled_vector,
    named_operator,
    random_separable,
    werner_state,
)
from sepkit.tensor_core import HilbertDims, kron, partial_transpose
from sepkit.upb import bound_entangled_state, build_witness, builtin_upb, verify_upb
from tests.conftest import random_hermitian

BUDGET = OptBudget(seed=0)
ALL_3Q_CUTS = [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]


def _finish(num, label, t0, limit):
    elapsed = time.perf_counter() - t0
    assert elapsed < limit, f"criterion {num} took {elapsed:.1f}s, budget {limit}s"
    print(f"ACCEPTANCE {num} ({label}): PASS in {elapsed:.2f}s (budget {limit:.0f}s)")


@pytest.fixture(scope="module")
def flip_witness():
    return certify_witness(Witness(HilbertDims((2, 2)), named_operator("flip_V", 2)), BUDGET)


@pytest.fixture(scope="module")
def shifts_assets():
    u = verify_upb(builtin_upb("shifts"), BUDGET)
    rho = bound_entangled_state(u)
    wit = build_witness(u, None, BUDGET)
    return u, rho, wit


def test_criterion_1_werner_threshold(flip_witness):
    t0 = time.perf_counter()
    for p in [0.0, 0.2, 1.0 / 3.0, 0.4, 1.0]:
        st = werner_state(p)
        rep = ppt_check(st, (2,))
        assert abs(rep.min_eig_pt - (1.0 - 3.0 * p) / 4.0) <= 1e-9
        assert abs(eval_witness(flip_witness, st) - (1.0 - 3.0 * p) / 2.0) <= 1e-9
        verdict = decide(st)
        expected = SEPARABLE if p <= 1.0 / 3.0 else ENTANGLED
        assert verdict.status == expected, f"p={p}: {verdict.status}"
    _finish(1, "werner threshold", t0, 1.0)


def test_criterion_2_flip_blindness(flip_witness):
    t0 = time.perf_counter()
    st = density_from_pure(max_entangled_vector(2), (2, 2))
    assert abs(eval_witness(flip_witness, st) - 1.0) <= 1e-12
    rep = lmpp_spectral_test(st, map_from_witness(flip_witness), on=(2,))
    assert rep.certified
    assert abs(rep.min_eig + 0.5) <= 1e-9
    assert rep.min_eig < -1e-7
    _finish(2, "flip-witness blindness vs map test", t0, 1.0)


def test_criterion_3_choi_round_trip():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    for dims in [(2, 2), (2, 2, 2)]:
        d = HilbertDims(dims)
        for _ in range(50):
            h = random_hermitian(rng, d.total)
            w = Witness(d, h)
            back = witness_from_map(map_from_witness(w))
            assert np.max(np.abs(back.matrix - h)) <= 1e-12
            m = map_from_witness(w)
            again = map_from_witness(witness_from_map(m))
            assert np.max(np.abs(again.choi - m.choi)) <= 1e-12
            assert again.in_dims == m.in_dims and again.out_dims == m.out_dims
    _finish(3, "witness/map round trip x100", t0, 5.0)


def test_criterion_4_trace_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(55)
    for d in (2, 3):
        p_plus = named_operator("P_plus", d)
        v = named_operator("flip_V", d)
        assert np.max(np.abs(partial_transpose(p_plus, (d, d), (1,)) * d - v)) <= 1e-12
    for _ in range(100):
        x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        y = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        lhs = np.trace(x @ y)
        rhs = np.trace(
            partial_transpose(x, (2, 2), (1,)) @ partial_transpose(y, (2, 2), (1,))
        )
        assert abs(lhs - rhs) <= 1e-10 * (1.0 + abs(lhs))
    v2 = named_operator("flip_V", 2)
    for _ in range(100):
        x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        y = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        lhs = np.trace(v2 @ kron(x, y))
        rhs = np.trace(x @ y)
        assert abs(lhs - rhs) <= 1e-10 * (1.0 + abs(rhs))
    _finish(4, "trace identity suite", t0, 2.0)


def test_criterion_5_shifts_pipeline():
    t0 = time.perf_counter()
    u = verify_upb(builtin_upb("shifts"), BUDGET)
    assert u.epsilon > 1e-6
    assert abs(u.certificate.value - u.certificate.cross_value) <= 1e-3

    rho = bound_entangled_state(u)
    evals = np.linalg.eigvalsh(rho.rho)
    assert np.max(np.abs(evals[:4])) <= 1e-10
    assert np.max(np.abs(evals[4:] - 0.25)) <= 1e-10

    for subset in ALL_3Q_CUTS:
        rep = ppt_check(rho, subset)
        assert rep.min_eig_pt >= -1e-9, f"cut {subset}: {rep.min_eig_pt}"

    wit = build_witness(u, None, BUDGET)
    assert abs(eval_witness(wit, rho) + u.epsilon) <= 1e-7

    rng = np.random.default_rng(99)
    locals_list = haar_product_locals_batch((2, 2, 2), 100_000, rng)
    vals = product_form_batch(locals_list, wit.matrix)
    assert vals.min() >= -1e-7
    _finish(5, "shifts end to end", t0, 60.0)


def test_criterion_6_overlapping_member_fixture():
    t0 = time.perf_counter()
    ket0 = np.array([1.0, 0.0], dtype=complex)
    ket1 = np.array([0.0, 1.0], dtype=complex)
    plus = (ket0 + ket1) / np.sqrt(2.0)
    minus = (ket0 - ket1) / np.sqrt(2.0)
    literal = (
        (ket0, ket0, ket0),
        (plus, ket1, minus),
        (ket1, minus, plus),
        (plus, minus, ket1),
    )
    with pytest.raises(OrthogonalityViolationError) as exc:
        from sepkit.upb import UpbSet

        UpbSet(HilbertDims((2, 2, 2)), tuple(ProductVector(t) for t in literal))
    assert exc.value.i == 2 and exc.value.j == 4
    assert abs(exc.value.overlap - 0.5) <= 1e-12
    _finish(6, "overlapping member list rejected", t0, 1.0)


def test_criterion_7_bloch_and_decomposition(shifts_assets):
    t0 = time.perf_counter()
    _, _, wit = shifts_assets
    m = map_from_witness(wit)
    rng = np.random.default_rng(31337)
    dirs = rng.standard_normal((2000, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    for k in range(1000):
        act = bloch_action(m, dirs[2 * k], dirs[2 * k + 1])
        assert act.alpha >= -1e-9
        assert np.linalg.norm(act.k_vec) <= 1.0 + 1e-9

    v = named_operator("flip_V", 2)
    a, b = decompose_witness_2x2(Witness(HilbertDims((2, 2)), v))
    p_plus = named_operator("P_plus", 2)
    scale = 1.0 + np.linalg.norm(v)
    assert np.linalg.norm(v - a - partial_transpose(b, (2, 2), (2,))) <= 1e-6 * scale
    assert np.linalg.norm(a) <= 1e-6
    assert np.linalg.norm(b - 2.0 * p_plus) <= 1e-6
    _finish(7, "bloch bounds + flip decomposition", t0, 30.0)


def test_criterion_8_soundness(shifts_assets, flip_witness):
    t0 = time.perf_counter()
    _, _, shifts_wit = shifts_assets
    catalog = [("flip", flip_witness), ("shifts", shifts_wit)]
    cases = [((2, 2), 70), ((2, 3), 70), ((2, 2, 2), 60)]
    count = 0
    for dims, reps in cases:
        for seed in range(reps):
            st = random_separable(dims, k=3 + (seed % 4), seed=seed)
            assert decide(st, catalog).status != ENTANGLED
            bare = MultipartiteState(st.dims, st.rho)
            assert decide(bare, catalog).status != ENTANGLED
            for _, wit in catalog:
                if wit.dims == st.dims:
                    assert eval_witness(wit, st) >= -1e-7
            count += 1
    assert count == 200
    _finish(8, "soundness on 200 separable states", t0, 60.0)


def test_criterion_9_optimizer_properties():
    t0 = time.perf_counter()
    rng = np.random.default_rng(777)

    # per-sweep monotonicity on 50 operators
    for trial in range(50):
        h = random_hermitian(rng, 8)
        h /= np.linalg.norm(h, 2)
        direction, sign = ("max", 1.0) if trial % 2 == 0 else ("min", -1.0)
        _, hists = seesaw_extremize(
            h, (2, 2, 2), direction, restarts=4, seed=trial, return_histories=True
        )
        for hist in hists:
            assert (sign * np.diff(hist)).min() >= -1e-12

    # seesaw/grid agreement on 20 instances (5 refinement levels resolve the
    # lattice to ~1e-5 so the comparison probes the seesaw, not the grid)
    for trial in range(20):
        h = random_hermitian(rng, 8)
        h /= np.linalg.norm(h, 2)
        direction = "min" if trial % 2 else "max"
        s = seesaw_extremize(h, (2, 2, 2), direction, restarts=64, seed=trial)
        g = grid_extremize(h, (2, 2, 2), direction, grid_points=16, refine_levels=5)
        assert abs(s.value - g.value) <= 1e-3, f"trial {trial}: {s.value} vs {g.value}"

    # best product overlap with the maximally entangled projector
    p_plus = named_operator("P_plus", 2)
    s = seesaw_extremize(p_plus, (2, 2), "max", restarts=16, seed=1)
    g = grid_extremize(p_plus, (2, 2), "max", grid_points=24, refine_levels=3)
    assert abs(s.value - 0.5) <= 1e-3
    assert abs(g.value - 0.5) <= 1e-3
    _finish(9, "optimizer properties", t0, 120.0)
