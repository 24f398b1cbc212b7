import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from indist.core import (
    CHAIN_EDGES,
    DistinguishabilityPartition,
    DuplicateEdge,
    Interval,
    InvalidMixture,
    LengthMismatch,
    MissingEdge,
    MixtureModel,
    ModelInconsistent,
    OutOfRangeOverlap,
    OutputDistribution,
    OverlapGraph,
    SelfLoop,
    all_partitions,
    canonical_partition,
    clamp_unit,
    photon_number,
    render,
    validate_graph,
)

unit = st.floats(0.0, 1.0, allow_nan=False)


class TestValidateGraph:
    def test_table_row_ok(self):
        validate_graph(OverlapGraph.chain(0.826, 0.640, 0.872))

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeOverlap):
            validate_graph(OverlapGraph.from_edges({"AB": 1.2}))

    def test_negative_value(self):
        with pytest.raises(OutOfRangeOverlap):
            validate_graph(OverlapGraph.from_edges({"AB": -0.1}))

    def test_self_loop(self):
        with pytest.raises(SelfLoop):
            validate_graph(OverlapGraph.from_edges({"AA": 0.5}))

    def test_duplicate_edge_either_orientation(self):
        with pytest.raises(DuplicateEdge):
            validate_graph(OverlapGraph.from_edges([("AB", 0.5), ("BA", 0.6)]))

    def test_missing_edge_lookup(self):
        g = OverlapGraph.from_edges({"AB": 0.5})
        with pytest.raises(MissingEdge):
            g.overlap("CD")

    def test_lookup_is_orientation_free(self):
        g = OverlapGraph.from_edges({"DA": 0.3})
        assert g.overlap("AD") == 0.3
        assert g.overlap(("D", "A")) == 0.3

    def test_sigmas(self):
        g = OverlapGraph.chain(0.826, 0.640, 0.872, sigmas=(0.006, 0.008, 0.004))
        assert g.chain_sigmas() == (0.006, 0.008, 0.004)
        assert [e.name for e in g.edges] == list(CHAIN_EDGES)

    @given(st.floats(-2, 3, allow_nan=False), st.floats(-2, 3, allow_nan=False), st.floats(-2, 3, allow_nan=False))
    def test_clamped_chain_always_valid(self, a, b, c):
        g = OverlapGraph.chain(a, b, c, clamp=True)
        validate_graph(g)
        for e, raw in zip(g.edges, (a, b, c)):
            assert e.clamped == (raw < 0 or raw > 1)


class TestInterval:
    def test_clamped_records_raw(self):
        iv = Interval.clamped(-0.2, 0.5)
        assert iv.as_tuple() == (0.0, 0.5)
        assert iv.raw_lo == -0.2 and iv.was_clamped

    def test_inconsistent(self):
        out = Interval.clamped(0.7, 0.3)
        assert isinstance(out, ModelInconsistent)
        assert not out
        assert (out.raw_lo, out.raw_hi) == (0.7, 0.3)

    def test_invalid_direct(self):
        with pytest.raises(ValueError):
            Interval(0.6, 0.5)

    def test_intersect(self):
        assert Interval(0.1, 0.6).intersect(Interval(0.4, 0.9)).as_tuple() == (0.4, 0.6)
        assert isinstance(Interval(0.1, 0.2).intersect(Interval(0.4, 0.9)), ModelInconsistent)

    @given(st.floats(-5, 5, allow_nan=False))
    def test_clamp_unit(self, x):
        v, flag = clamp_unit(x)
        assert 0.0 <= v <= 1.0
        assert flag == (x < 0 or x > 1)


class TestPartitions:
    def test_examples(self):
        assert canonical_partition("XXXX").blocks == (("A", "B", "C", "D"),)
        assert canonical_partition("XXYY").blocks == (("A", "B"), ("C", "D"))
        assert canonical_partition("XYWZ").blocks == (("A",), ("B",), ("C",), ("D",))
        assert canonical_partition("XXYZ").blocks == (("A", "B"), ("C",), ("D",))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            canonical_partition("XXY")

    def test_letters_arbitrary(self):
        assert canonical_partition("QQRR") == canonical_partition("XXYY")
        assert canonical_partition("YXYY") == canonical_partition("XYXX")

    def test_fifteen_partitions_round_trip(self):
        parts = all_partitions()
        assert len(parts) == 15
        assert len({p.render() for p in parts}) == 15
        for p in parts:
            assert canonical_partition(render(p)) == p

    def test_canonical_order(self):
        p = DistinguishabilityPartition((("D", "C"), ("B",), ("A",)))
        assert p.blocks == (("A",), ("B",), ("C", "D"))
        assert p.render() == "XYZZ"

    def test_not_a_partition(self):
        with pytest.raises(ValueError):
            DistinguishabilityPartition((("A", "B"), ("C",)))

    @given(st.lists(st.sampled_from("PQRS"), min_size=4, max_size=4))
    def test_identity_iff_equal_letters(self, letters):
        s = "".join(letters)
        p = canonical_partition(s)
        for i, u in enumerate("ABCD"):
            for j, v in enumerate("ABCD"):
                assert p.identical(u, v) == (s[i] == s[j])


class TestMixture:
    def test_weights_validated(self):
        with pytest.raises(InvalidMixture):
            MixtureModel.from_weights({"XXXX": 0.5, "XYZW": 0.4})
        with pytest.raises(InvalidMixture):
            MixtureModel.from_weights({"XXXX": 1.2, "XYZW": -0.2})

    def test_repeated_partition_rejected(self):
        p = canonical_partition("XXYY")
        with pytest.raises(InvalidMixture):
            MixtureModel(((0.5, p), (0.5, p)))

    def test_from_weights_merges_equivalent_names(self):
        m = MixtureModel.from_weights({"XXYY": 0.25, "QQRR": 0.25, "XXXX": 0.5})
        assert m.weight("XXYY") == 0.5

    def test_overlaps_and_c1(self):
        m = MixtureModel.from_weights({"XXXX": 0.6, "XXYY": 0.3, "XYZW": 0.1})
        assert m.c1 == 0.6
        ov = m.overlaps()
        assert math.isclose(ov["AB"], 0.9) and math.isclose(ov["BC"], 0.6) and math.isclose(ov["CD"], 0.9)

    def test_zero_weights_dropped(self):
        m = MixtureModel.from_weights({"XXXX": 1.0, "XYZW": 0.0})
        assert len(m.terms) == 1


class TestOutputDistribution:
    def test_missing_is_zero_and_sorted(self):
        d = OutputDistribution({(1, 0): 0.25, (0, 1): 0.75})
        assert d[(2, 0)] == 0.0
        assert list(d) == [(0, 1), (1, 0)]
        assert d.total() == 1.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            OutputDistribution({(1,): -0.5})

    def test_add_and_l1(self):
        a = OutputDistribution({(1,): 0.5})
        b = OutputDistribution({(2,): 0.5})
        assert (a + b).total() == 1.0
        assert a.l1(b) == 1.0

    def test_photon_number(self):
        assert photon_number((1, 1, 0, 0, 1, 1)) == 4
