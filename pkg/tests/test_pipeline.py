import pytest

from disponte import answer
from disponte.errors import PreconditionError
from disponte.parser import parse_query


@pytest.mark.parametrize("mode", ["pinpoint", "minas"])
def test_fixture_probabilities(example1, example2, nature_lover, mode):
    a = answer(example1, nature_lover, mode)
    assert a.entailed and a.probability == pytest.approx(0.3, abs=1e-9)
    b = answer(example2, nature_lover, mode)
    assert b.probability == pytest.approx(0.58, abs=1e-9)
    assert b.minas == [frozenset({1, 2, 3, 4}), frozenset({1, 2, 3, 5})]


def test_orders(example1, nature_lover):
    a = answer(example1, nature_lover, order=[6, 5, 4, 3, 2, 1])
    assert a.probability == pytest.approx(0.3, abs=1e-9)
    with pytest.raises(PreconditionError):
        answer(example1, nature_lover, order=[1, 2, 3])
    with pytest.raises(ValueError):
        answer(example1, nature_lover, "both")


def test_not_entailed(example1):
    a = answer(example1, parse_query("ClassAssertion(Dog, kevin)"))
    assert not a.entailed and a.probability == 0.0 and a.minas == []
