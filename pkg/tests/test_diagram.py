"""Wiring diagrams: edge structure, the rebuild oracle, renderings."""

import re

import numpy as np
import pytest

from equimap.diagram import (
    LEFT,
    RIGHT,
    WiringDiagram,
    matrix_from_wiring,
    render_dot,
    render_text,
    verify_wiring,
    wiring,
)
from equimap.errors import ParameterError
from equimap.perms import Permutation, enumerate_sym


def _perm(text, k):
    return Permutation.from_cycles(text, k)


class TestStructure:
    def test_identity_0_1(self):
        # No transposed rows beyond row 0; the identity permutation links
        # row 0 straight across (flipped) and row 1 straight across.
        d = wiring(Permutation.identity(2), 0, 1)
        assert d.edges == (
            ((LEFT, 0), (RIGHT, 0)),
            ((LEFT, 1), (RIGHT, 1)),
        )

    def test_colors(self):
        d = wiring(Permutation.identity(3), 1, 1)
        assert d.color(LEFT, 0) == "black"
        assert d.color(LEFT, 1) == "black"
        assert d.color(LEFT, 2) == "white"
        assert d.color(RIGHT, 0) == "white"
        assert d.color(RIGHT, 2) == "black"

    def test_every_edge_joins_black_to_white(self):
        for a, b in [(0, 1), (1, 0), (1, 1), (2, 1)]:
            for p in enumerate_sym(a + b + 1):
                d = wiring(p, a, b)
                for e1, e2 in d.edges:
                    assert {d.color(*e1), d.color(*e2)} == {"black", "white"}

    def test_transposition_flips_edge_endpoints(self):
        # Under (0, 1) only leg 1 is transposed, so the swap's crossing
        # wires become same-side pairs (the Bell projector pattern).
        d = wiring(_perm("(1 2)", 2), 0, 1)
        assert set(d.edges) == {
            ((LEFT, 0), (LEFT, 1)),
            ((RIGHT, 0), (RIGHT, 1)),
        }
        # Under (1, 0) both legs flip, which leaves the crossing intact:
        # the full transpose of the swap operator is the swap again.
        d = wiring(_perm("(1 2)", 2), 1, 0)
        assert set(d.edges) == {
            ((LEFT, 0), (RIGHT, 1)),
            ((LEFT, 1), (RIGHT, 0)),
        }

    def test_degree_mismatch(self):
        with pytest.raises(ParameterError):
            wiring(Permutation.identity(3), 0, 1)

    def test_matching_validation(self):
        with pytest.raises(ParameterError):
            WiringDiagram(a=0, b=1, edges=(((LEFT, 0), (RIGHT, 0)),))
        with pytest.raises(ParameterError):
            WiringDiagram(
                a=0,
                b=1,
                edges=(
                    ((LEFT, 0), (RIGHT, 1)),  # black-black
                    ((LEFT, 1), (RIGHT, 0)),
                ),
            )


class TestRebuildOracle:
    @pytest.mark.parametrize("a,b", [(0, 1), (1, 0), (0, 2), (1, 1), (2, 0)])
    def test_exhaustive_small_signatures(self, a, b):
        for n in (2, 3):
            for p in enumerate_sym(a + b + 1):
                assert verify_wiring(wiring(p, a, b), p, n)

    def test_rebuild_shape_and_entries(self):
        d = wiring(_perm("(1 2 3)", 3), 1, 1)
        M = matrix_from_wiring(d, 2)
        assert M.shape == (8, 8)
        assert set(np.unique(M)) <= {0.0, 1.0}

    def test_mismatched_permutation_fails_verification(self):
        p = _perm("(1 2 3)", 3)
        q = _perm("(1 3 2)", 3)
        assert not verify_wiring(wiring(p, 1, 1), q, 2)

    def test_dimension_check(self):
        with pytest.raises(ParameterError):
            matrix_from_wiring(wiring(Permutation.identity(2), 0, 1), 1)


class TestRenderText:
    def test_golden_identity_0_1(self):
        d = wiring(Permutation.identity(2), 0, 1)
        assert render_text(d) == (
            "wiring a=0 b=1\n"
            "  leg 1: L[*]-e1  R[o]-e1\n"
            "  leg 2: L[o]-e2  R[*]-e2"
        )

    def test_title_and_edge_ids(self):
        d = wiring(_perm("(1 2)", 2), 1, 0)
        out = render_text(d, title="pi=(1 2)")
        lines = out.splitlines()
        assert lines[0] == "wiring a=1 b=0 pi=(1 2)"
        assert len(lines) == 3
        # Left column pairs with itself, so both left marks carry edge e1.
        assert lines[1].count("e1") + lines[1].count("e2") == 2


class TestRenderDot:
    def _assert_well_formed(self, src, expected_clusters):
        lines = src.strip().splitlines()
        assert lines[0].startswith("graph ")
        assert lines[0].endswith("{")
        assert lines[-1] == "}"
        assert src.count("{") == src.count("}")
        assert src.count("subgraph cluster_") == expected_clusters
        node_re = re.compile(r"^\s*(t\d+_[LR]\d+) \[fillcolor=(black|white), pos=")
        edge_re = re.compile(r"^\s*(t\d+_[LR]\d+) -- (t\d+_[LR]\d+);$")
        declared = set()
        edges = []
        for line in lines[1:-1]:
            m = node_re.match(line)
            if m:
                declared.add(m.group(1))
            m = edge_re.match(line)
            if m:
                edges.append((m.group(1), m.group(2)))
        assert edges, "no edges emitted"
        for u, v in edges:
            assert u in declared and v in declared

    def test_single_diagram(self):
        d = wiring(Permutation.identity(2), 0, 1)
        src = render_dot(d)
        self._assert_well_formed(src, expected_clusters=1)
        assert "graph wiring {" in src

    def test_term_list_with_labels(self):
        terms = [
            (p.cycle_string(), wiring(p, 0, 1)) for p in enumerate_sym(2)
        ]
        src = render_dot(terms, graph_name="basis")
        self._assert_well_formed(src, expected_clusters=2)
        assert 'label="(1 2)";' in src
        assert "graph basis {" in src
