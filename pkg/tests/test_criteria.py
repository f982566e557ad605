import numpy as np
import pytest

from sepkit.criteria import (
    ENTANGLED,
    INCONCLUSIVE,
    SEPARABLE,
    canonical_cuts,
    decide,
    lmpp_spectral_test,
    ppt_check,
    semisep_report,
)
from sepkit.errors import BadSubsetError, UnverifiedMapWarning
from sepkit.maps_witnesses import Witness, certify_witness, eval_witness, map_from_witness
from sepkit.product_opt import OptBudget
from sepkit.states import (
    MultipartiteState,
    density_from_pure,
    max_entangled_vector,
    maximally_mixed,
    named_operator,
    random_separable,
)
from sepkit.tensor_core import HilbertDims, permute_subsystems, permuted_dims
from sepkit.states import werner_state
from sepkit.upb import bound_entangled_state, build_witness, builtin_upb, verify_upb

BUDGET = OptBudget(seed=0)


@pytest.fixture(scope="module")
def shifts_assets():
    u = verify_upb(builtin_upb("shifts"), BUDGET)
    rho = bound_entangled_state(u)
    wit = build_witness(u, None, BUDGET)
    return u, rho, wit


@pytest.fixture(scope="module")
def flip_wit():
    return certify_witness(Witness(HilbertDims((2, 2)), named_operator("flip_V", 2)), BUDGET)


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.4, 1.0])
def test_ppt_check_werner_analytic(p):
    rep = ppt_check(werner_state(p), (2,))
    assert abs(rep.min_eig_pt - (1 - 3 * p) / 4) <= 1e-9
    assert rep.passes == ((1 - 3 * p) / 4 >= -1e-9)


def test_ppt_check_subset_complement_agree():
    st = werner_state(0.8)
    a = ppt_check(st, (1,))
    b = ppt_check(st, (2,))
    assert abs(a.min_eig_pt - b.min_eig_pt) <= 1e-12
    assert a.passes == b.passes


def test_ppt_check_product_state_passes_every_cut(rng):
    st = random_separable((2, 3, 2), k=1, seed=5)
    for subset in [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]:
        assert ppt_check(st, subset).passes


def test_ppt_check_invariant_under_permutation(rng):
    st = random_separable((2, 2, 2), k=5, seed=8)
    perm = (3, 1, 2)
    rho_p = permute_subsystems(st.rho, st.dims, perm)
    st_p = MultipartiteState(permuted_dims(st.dims, perm), rho_p)
    # subsystem 2 sits at position 3 after the permutation (perm[2] = 2)
    a = ppt_check(st, (2,))
    b = ppt_check(st_p, (3,))
    assert abs(a.min_eig_pt - b.min_eig_pt) <= 1e-12


def test_ppt_check_bad_subsets():
    st = werner_state(0.5)
    with pytest.raises(BadSubsetError):
        ppt_check(st, ())
    with pytest.raises(BadSubsetError):
        ppt_check(st, (1, 2))
    with pytest.raises(BadSubsetError):
        ppt_check(st, (5,))


def test_semisep_bound_entangled_passes_yet_witness_detects(shifts_assets):
    _, rho, wit = shifts_assets
    reports = semisep_report(rho)
    assert len(reports) == 3
    assert all(r.passes for r in reports)
    assert eval_witness(wit, rho) < -1e-7


def test_semisep_werner_fails_single_cut():
    reports = semisep_report(werner_state(1.0))
    assert len(reports) == 2
    assert all(not r.passes for r in reports)


def test_semisep_random_separable_passes(rng):
    for seed in range(3):
        st = random_separable((2, 2, 2), k=4, seed=seed)
        assert all(r.passes for r in semisep_report(st))


def test_lmpp_transposition_matches_ppt(flip_wit):
    m = map_from_witness(flip_wit)
    for st in (werner_state(1.0), werner_state(0.2)):
        rep = lmpp_spectral_test(st, m, on=(2,))
        cut = ppt_check(st, (2,))
        assert abs(rep.min_eig - cut.min_eig_pt) <= 1e-12
        assert rep.certified


def test_lmpp_transposition_on_three_qubits(shifts_assets, flip_wit):
    # the one-qubit transposition applied to subsystem 3 reproduces that cut
    _, rho, _ = shifts_assets
    m = map_from_witness(flip_wit)
    rep = lmpp_spectral_test(rho, m, on=(3,))
    cut = ppt_check(rho, (3,))
    assert abs(rep.min_eig - cut.min_eig_pt) <= 1e-12


def test_lmpp_warns_on_unverified_map():
    wit = Witness(HilbertDims((2, 2)), named_operator("flip_V", 2))  # no certificate
    m = map_from_witness(wit)
    with pytest.warns(UnverifiedMapWarning):
        rep = lmpp_spectral_test(werner_state(1.0), m, on=(2,))
    assert not rep.certified
    assert rep.min_eig < -1e-7


def test_lmpp_separable_state_stays_nonnegative(shifts_assets, rng):
    _, _, wit = shifts_assets
    m = map_from_witness(wit)
    for seed in range(5):
        st = random_separable((2, 2, 2), k=4, seed=seed)
        rep = lmpp_spectral_test(st, m, on=(2, 3))
        assert rep.min_eig >= -1e-8


def test_canonical_cuts_enumeration():
    assert canonical_cuts(2) == [(1,)]
    assert canonical_cuts(3) == [(1,), (1, 2), (1, 3)]


def test_decide_certificate_path(rng):
    st = random_separable((2, 2, 2), k=4, seed=3)
    v = decide(st)
    assert v.status == SEPARABLE
    assert v.decomposition is st.decomposition


@pytest.mark.parametrize("p,expected", [(0.0, SEPARABLE), (0.2, SEPARABLE), (0.5, ENTANGLED), (1.0, ENTANGLED)])
def test_decide_werner_exactness(p, expected):
    v = decide(werner_state(p))
    assert v.status == expected
    if expected == ENTANGLED:
        assert v.failing_cut is not None
        assert v.failing_cut.min_eig_pt < -1e-7
    else:
        assert v.exactness == "ppt-exact-2x2"


def test_decide_2x3_exactness(rng):
    st = random_separable((2, 3), k=5, seed=12)
    bare = MultipartiteState(st.dims, st.rho)  # certificate stripped
    v = decide(bare)
    assert v.status == SEPARABLE
    assert v.exactness == "ppt-exact-2x3"


def test_decide_pplus_entangled():
    st = density_from_pure(max_entangled_vector(2), (2, 2))
    v = decide(st)
    assert v.status == ENTANGLED
    assert v.failing_cut is not None


def test_decide_bound_entangled_needs_witness(shifts_assets):
    _, rho, wit = shifts_assets
    no_catalog = decide(rho)
    assert no_catalog.status == INCONCLUSIVE
    with_catalog = decide(rho, [("shifts", wit)])
    assert with_catalog.status == ENTANGLED
    assert with_catalog.witness_name == "shifts"
    assert with_catalog.witness_value < -1e-7
    # independently re-checkable certificate
    assert abs(eval_witness(wit, rho) - with_catalog.witness_value) <= 1e-12


def test_decide_never_separable_outside_exact_regimes(rng):
    st = random_separable((3, 3), k=6, seed=4)
    bare = MultipartiteState(st.dims, st.rho)
    assert decide(bare).status == INCONCLUSIVE


def test_decide_multipartite_cut_certificate(shifts_assets):
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1 / np.sqrt(2)
    st = density_from_pure(ghz, (2, 2, 2))
    v = decide(st)
    assert v.status == ENTANGLED
    assert v.failing_cut is not None
    assert v.failing_cut.subset == (1,)


def test_decide_soundness_against_catalog(shifts_assets, flip_wit, rng):
    # separable constructions stay nonnegative against every catalog witness
    _, _, shifts_wit = shifts_assets
    catalog = [("flip", flip_wit), ("shifts", shifts_wit)]
    for seed in range(5):
        for dims in [(2, 2), (2, 2, 2)]:
            st = random_separable(dims, k=4, seed=seed)
            v = decide(st, catalog)
            assert v.status != ENTANGLED
            for _, wit in catalog:
                if wit.dims == st.dims:
                    assert eval_witness(wit, st) >= -1e-9


def test_decide_maximally_mixed():
    assert decide(maximally_mixed((2, 2))).status == SEPARABLE
    assert decide(maximally_mixed((2, 2, 2))).status == INCONCLUSIVE


def test_default_catalog_detects_shipped_cases(shifts_assets):
    from sepkit.criteria import default_catalog

    cat22 = default_catalog((2, 2), BUDGET)
    assert [name for name, _ in cat22] == ["flip"]
    assert eval_witness(cat22[0][1], werner_state(1.0)) < -1e-7

    cat222 = default_catalog((2, 2, 2), BUDGET)
    assert [name for name, _ in cat222] == ["shifts"]
    _, rho, _ = shifts_assets
    v = decide(rho, cat222)
    assert v.status == ENTANGLED
    assert v.witness_name == "shifts"

    assert default_catalog((3, 3)) == []
