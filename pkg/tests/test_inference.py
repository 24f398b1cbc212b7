import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from indist.core import Interval, MissingEdge, MixtureModel, OverlapGraph, all_partitions
from indist.inference import (
    KNOWN_FORMS,
    and_probability_range,
    and_probability_range_linprog,
    c1_bounds,
    chain_bounds,
    chain_through_interval,
    classical_bounds,
    classical_oracle_check,
    classical_r_AD_bounds,
    polytope_inequalities,
    product_bounds,
    product_bounds_array,
    product_chain_bounds,
    product_lower,
    product_oracle_check,
    product_r_AD_bounds,
    product_r_AD_routes_array,
    product_upper,
    three_term_r_AD_upper,
    truth_table_vertices,
)
from indist.inference.oracles import haar_states, pairwise_overlaps

unit = st.floats(0.0, 1.0, allow_nan=False)
XXXX = (0.826, 0.640, 0.872)
XXXY = (0.802, 0.780, 0.00)


def iv(x):
    return x.as_tuple()


# ------------------------------------------------------------ classical


class TestC1:
    def test_xxxx(self):
        assert iv(c1_bounds(OverlapGraph.chain(*XXXX))) == pytest.approx((0.338, 0.640), abs=1e-12)

    def test_xxxy(self):
        assert iv(c1_bounds(OverlapGraph.chain(*XXXY))) == (0.0, 0.0)

    def test_ones(self):
        assert iv(c1_bounds(OverlapGraph.chain(1, 1, 1))) == (1.0, 1.0)

    def test_missing_edge(self):
        with pytest.raises(MissingEdge):
            c1_bounds(OverlapGraph.from_edges({"AB": 1.0, "BC": 1.0}))

    def test_negative_lower_is_flagged(self):
        out = c1_bounds(OverlapGraph.chain(*XXXY))
        assert out.raw_lo < 0 and out.was_clamped


class TestChain:
    def test_examples(self):
        assert iv(chain_bounds(0.826, 0.640)) == pytest.approx((0.466, 0.814))
        assert iv(chain_bounds(0.640, 0.872)) == pytest.approx((0.512, 0.768))
        assert iv(chain_bounds(1, 1)) == (1.0, 1.0)

    @given(unit, unit)
    def test_always_consistent(self, a, b):
        assert isinstance(chain_bounds(a, b), Interval)


class TestClassicalAD:
    def test_xxxx(self):
        assert iv(classical_r_AD_bounds(OverlapGraph.chain(*XXXX))) == pytest.approx((0.338, 0.942))

    def test_xxxy(self):
        assert iv(classical_r_AD_bounds(OverlapGraph.chain(*XXXY))) == pytest.approx((0.0, 0.418))

    def test_ones(self):
        assert iv(classical_r_AD_bounds(OverlapGraph.chain(1, 1, 1))) == (1.0, 1.0)

    @given(unit, unit, unit)
    def test_three_term_form_agrees(self, a, b, c):
        hi = classical_r_AD_bounds(OverlapGraph.chain(a, b, c)).hi
        assert hi == pytest.approx(three_term_r_AD_upper(a, b, c), abs=1e-12)

    @given(unit, unit, unit)
    def test_report_consistent_in_unit_cube(self, a, b, c):
        rep = classical_bounds(OverlapGraph.chain(a, b, c))
        assert rep.consistent
        for x in rep.intervals().values():
            assert 0.0 <= x.lo <= x.hi <= 1.0


def _three_label_partitions():
    # blocks over x, y, z: identity indicators (xy, yz, xz)
    return np.array([[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=float)


@pytest.mark.parametrize("r1,r2", [(0.826, 0.640), (0.3, 0.9), (0.5, 0.5), (0.1, 0.2), (1.0, 0.7)])
def test_chain_bounds_tight(r1, r2):
    """Every value in the interval is realised by some mixture, nothing outside is."""
    M = _three_label_partitions()
    bounds = chain_bounds(r1, r2)
    for v in np.linspace(0, 1, 41):
        res = linprog(np.zeros(5), A_eq=np.vstack([M.T, np.ones(5)]), b_eq=[r1, r2, v, 1.0], bounds=(0, None))
        feasible = res.status == 0
        inside = bounds.lo - 1e-9 <= v <= bounds.hi + 1e-9
        assert feasible == inside, (v, bounds)


def test_classical_bounds_contain_mixture_values():
    rng = np.random.default_rng(2)
    parts = all_partitions()
    for _ in range(300):
        w = rng.dirichlet(np.full(15, 0.3))
        m = MixtureModel(tuple(zip(w, parts)), tol=1e-9)
        ov = m.overlaps()
        rep = classical_bounds(OverlapGraph.chain(ov["AB"], ov["BC"], ov["CD"]))
        assert rep.c1.contains(m.c1, 1e-12)
        assert rep.r_AC.contains(ov["AC"], 1e-12)
        assert rep.r_BD.contains(ov["BD"], 1e-12)
        assert rep.r_AD.contains(ov["AD"], 1e-12)


# ------------------------------------------------------------ product


class TestProductChain:
    def test_xxxx_ac(self):
        lo, hi = iv(product_chain_bounds(0.826, 0.640))
        assert lo == pytest.approx(0.227, abs=1e-3)
        assert hi == pytest.approx(0.9555, abs=5e-4)

    def test_xxxx_bd(self):
        lo, hi = iv(product_chain_bounds(0.640, 0.872))
        assert lo == pytest.approx(0.283, abs=1e-3)
        assert hi == pytest.approx(0.925, abs=1e-3)

    def test_lower_switch_general(self):
        out = product_chain_bounds(0.5, 0.4, "general")
        assert out.lo == 0.0 and out.hi == pytest.approx(product_upper(0.5, 0.4))
        assert product_chain_bounds(0.5, 0.4, "qubit").lo > 0.0

    def test_integer_hint(self):
        assert product_lower(0.5, 0.4, 2) == product_lower(0.5, 0.4, "qubit")
        assert product_lower(0.5, 0.4, 4) == 0.0

    @given(unit, unit)
    def test_upper_is_one_iff_equal(self, a, b):
        up = product_upper(a, b)
        assert up <= 1.0 + 1e-15
        if a == b:
            assert up == pytest.approx(1.0, abs=1e-12)
        # away from the diagonal the deficit is visible
        if abs(math.sqrt(a) - math.sqrt(b)) > 1e-3 and abs(math.sqrt(1 - a) - math.sqrt(1 - b)) > 1e-3:
            assert up < 1.0 - 1e-7


class TestProductAD:
    def test_xxxx_lower(self):
        out = product_r_AD_bounds(OverlapGraph.chain(*XXXX))
        assert out.lo == pytest.approx(0.017, abs=1e-3)

    def test_xxxx_upper_is_one(self):
        # the interior maximum of the chained upper bound reaches 1
        assert product_r_AD_bounds(OverlapGraph.chain(*XXXX)).hi == pytest.approx(1.0, abs=1e-9)

    def test_xxxx_endpoint_scan_gives_smaller_value(self):
        out = product_r_AD_bounds(OverlapGraph.chain(*XXXX), upper_method="endpoints")
        assert out.hi == pytest.approx(0.976, abs=2e-3)

    def test_xxxx_r_ad_one_is_attained_by_qubits(self):
        """Explicit qubit states with the measured chain overlaps and r_AD = 1."""
        th = [2 * math.acos(math.sqrt(r)) for r in XXXX]  # Bloch angles of AB, BC, CD

        def bloch(theta, phi):
            return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])

        # B at the pole; D at Bloch angle th_AB so that A = D works; C chosen
        # at angle th_BC from B and th_CD from D (spherical triangle exists)
        B = bloch(0.0, 0.0)
        D = bloch(th[0], 0.0)
        # for C at (th_BC, phi): cos(angle CD) = cos a cos b + sin a sin b cos phi
        a, b = th[1], th[0]
        cos_phi = (math.cos(th[2]) - math.cos(a) * math.cos(b)) / (math.sin(a) * math.sin(b))
        C = bloch(a, math.acos(cos_phi))
        A = D
        ov = pairwise_overlaps(np.array([[A, B, C, D]]))
        assert ov["AB"][0] == pytest.approx(XXXX[0])
        assert ov["BC"][0] == pytest.approx(XXXX[1])
        assert ov["CD"][0] == pytest.approx(XXXX[2])
        assert ov["AD"][0] == pytest.approx(1.0)

    def test_xxxy(self):
        rep = product_bounds(OverlapGraph.chain(*XXXY))
        assert iv(rep.r_AC) == pytest.approx((0.339, 0.9993), abs=1e-3)
        assert iv(rep.r_BD) == pytest.approx((0.0, 0.22), abs=1e-3)
        assert iv(rep.r_AD) == pytest.approx((0.0, 0.661), abs=1e-3)

    def test_ones(self):
        rep = product_bounds(OverlapGraph.chain(1, 1, 1))
        for x in rep.intervals().values():
            assert iv(x) == pytest.approx((1.0, 1.0))

    def test_routes_agree_on_grid(self):
        g = np.linspace(0, 1, 50)
        a, b, c = np.meshgrid(g, g, g, indexing="ij")
        for hint in ("general", "qubit"):
            r = product_r_AD_routes_array(a, b, c, hint)
            for k in (0, 1):
                assert np.max(np.abs(r["ABD"][k] - r["ACD"][k])) < 1e-6

    def test_scalar_routes_agree(self):
        rng = np.random.default_rng(0)
        for a, b, c in rng.random((25, 3)):
            g = OverlapGraph.chain(a, b, c)
            for hint in ("general", "qubit"):
                x = product_r_AD_bounds(g, hint, route="ABD")
                y = product_r_AD_bounds(g, hint, route="ACD")
                assert iv(x) == pytest.approx(iv(y), abs=1e-6)

    def test_closed_form_matches_extremization(self):
        rng = np.random.default_rng(1)
        pts = rng.random((40, 3))
        for hint in ("general", "qubit"):
            arr = product_bounds_array(pts[:, 0], pts[:, 1], pts[:, 2], hint)
            for k, (a, b, c) in enumerate(pts):
                rep = product_bounds(OverlapGraph.chain(a, b, c), hint)
                for name, x in rep.intervals().items():
                    lo, hi = arr[name]
                    assert (x.lo, x.hi) == pytest.approx((lo[k], hi[k]), abs=1e-8)

    def test_chain_through_interval_method_validation(self):
        with pytest.raises(ValueError):
            chain_through_interval(0.5, Interval(0.2, 0.4), upper_method="bogus")


# ------------------------------------------------------------ polytope


class TestPolytope:
    def test_exactly_known_facets(self):
        facets = polytope_inequalities()
        assert len(facets) == 8
        assert set(facets) == set(KNOWN_FORMS.values())

    def test_vertex_all_ones_tight(self):
        facets = polytope_inequalities()
        assert sum(f.tight((1, 1, 1, 1)) for f in facets) >= 4
        assert all(f.satisfied(v) for f in facets for v in truth_table_vertices())

    def test_point_violates_in8(self):
        in8 = KNOWN_FORMS["p123 >= p1 + p2 + p3 - 2"]
        assert not in8.satisfied((1, 1, 1, 0))

    def test_interior_point(self):
        assert all(f.satisfied((0.9, 0.8, 0.9, 0.6)) for f in polytope_inequalities())

    def test_lp_matches_c1_on_grid(self):
        facets = polytope_inequalities()
        grid = np.linspace(0, 1, 20)
        for p1, p2, p3 in itertools.product(grid, repeat=3):
            lo, hi = and_probability_range(p1, p2, p3, facets)
            c = c1_bounds(OverlapGraph.chain(p1, p2, p3))
            assert hi == c.hi
            assert max(lo, 0.0) == c.lo

    def test_linprog_cross_check(self):
        grid = np.linspace(0, 1, 5)
        for p in itertools.product(grid, repeat=3):
            exact = and_probability_range(*p)
            lp = and_probability_range_linprog(*p)
            assert lp == pytest.approx(exact, abs=1e-9)

    def test_str(self):
        assert str(KNOWN_FORMS["p123 <= p1"]) == "- p1 + p123 <= 0"


# ------------------------------------------------------------ oracles


class TestOracles:
    def test_random_mixtures(self):
        rep = classical_oracle_check(trials=5_000, seed=3)
        assert rep.ok and rep.tested == 5_000

    def test_targeted_xxxx(self):
        rep = classical_oracle_check(OverlapGraph.chain(*XXXX), trials=5_000, seed=1)
        assert rep.feasible and rep.ok
        assert rep.details["max_marginal_mismatch"] < 1e-9
        lo, hi = rep.details["c1_range"]
        assert lo == pytest.approx(0.338, abs=1e-9) and hi == pytest.approx(0.640, abs=1e-9)

    def test_targeted_ones(self):
        rep = classical_oracle_check(OverlapGraph.chain(1, 1, 1), trials=100)
        assert rep.ok and rep.details["c1_range"] == pytest.approx((1.0, 1.0))

    def test_targeted_zeros(self):
        rep = classical_oracle_check(OverlapGraph.chain(0, 0, 0), trials=1_000)
        assert rep.ok and rep.details["c1_range"] == (0.0, 0.0)

    def test_deterministic(self):
        a = classical_oracle_check(trials=2_000, seed=9)
        b = classical_oracle_check(trials=2_000, seed=9)
        assert a == b

    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_product_dims(self, dim):
        rep = product_oracle_check(dim, trials=5_000, seed=dim, scalar_checks=20)
        assert rep.ok

    def test_general_bound_fails_qubit_lower_in_dim4(self):
        # the qubit lower bound is not valid in higher dimension: the oracle
        # must find violations when given the wrong hint
        from indist.inference.oracles import check_product_states

        states = haar_states(np.random.default_rng(0), 20_000, 4)
        bad, _ = check_product_states(states, "qubit")
        assert bad > 0
        assert check_product_states(states, "general")[0] == 0

    def test_identical_states(self):
        psi = np.array([1.0, 0.0], dtype=complex)
        r = pairwise_overlaps(np.array([[psi] * 4]))
        assert all(v[0] == pytest.approx(1.0) for v in r.values())

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_product_bounds_sound_random_seed(self, seed):
        states = haar_states(np.random.default_rng(seed), 50, 3)
        r = pairwise_overlaps(states)
        for k in range(5):
            rep = product_bounds(OverlapGraph.chain(r["AB"][k], r["BC"][k], r["CD"][k]))
            assert rep.r_AC.contains(r["AC"][k], 1e-9)
            assert rep.r_BD.contains(r["BD"][k], 1e-9)
            assert rep.r_AD.contains(r["AD"][k], 1e-9)
