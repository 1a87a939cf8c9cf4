#!/usr/bin/env python3
"""
Closed forms against the permutation-sum evaluation of theta and tetrahedral nets
"""

import os
import sys
from fractions import Fraction

import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from errors import BadInput, CapExceeded, Inadmissible
from penrose import TrivalentNet, inversions, mercedes_net, penrose_evaluate, theta_net
from recoupling import admissible_sextuples, is_admissible_triple, tet_exact, theta_exact


def test_inversions():
    assert inversions((0, 1, 2)) == 0
    assert inversions((1, 0, 2)) == 1
    assert inversions((2, 1, 0)) == 3


def test_nets_validate():
    assert theta_net(2, 2, 2).validate()
    assert mercedes_net((1, 2, 3, 1, 2, 3)).validate()


def test_malformed_net_rejected():
    dangling = TrivalentNet(name="broken", vertices=(("a", "b", "c"), ("a", "b", "d")), labels={"a": 1, "b": 1, "c": 0, "d": 0})
    with pytest.raises(BadInput):
        dangling.validate()


def test_empty_net_evaluates_to_one():
    assert penrose_evaluate(theta_net(0, 0, 0)) == 1
    assert penrose_evaluate(mercedes_net((0, 0, 0, 0, 0, 0))) == 1


def test_single_loop():
    # one strand through the theta net closes one loop
    assert penrose_evaluate(theta_net(1, 1, 0)) == -2


def test_regular_tetrahedral_net():
    assert penrose_evaluate(mercedes_net((2, 2, 2, 2, 2, 2))) == Fraction(3, 2)


def test_theta_oracle_equivalence():
    for a in range(7):
        for b in range(7):
            for c in range(7):
                if is_admissible_triple(a, b, c):
                    assert penrose_evaluate(theta_net(a, b, c)) == theta_exact(a, b, c), (a, b, c)


def test_tetrahedral_oracle_equivalence():
    for labels in admissible_sextuples(3):
        assert penrose_evaluate(mercedes_net(labels)) == tet_exact(labels), labels


def test_oracle_cap():
    with pytest.raises(CapExceeded):
        penrose_evaluate(theta_net(4, 4, 4), cap=3)


def test_inadmissible_vertex():
    with pytest.raises(Inadmissible):
        penrose_evaluate(theta_net(1, 1, 1))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
