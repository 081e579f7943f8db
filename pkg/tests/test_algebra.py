import numpy as np
import pytest

from congalg.algebra import FiniteAlgebra, Signature, format_alg, make_algebra, parse_alg
from congalg.errors import InputError
from congalg.qomega import make_qn


def test_tables_are_lexicographic_first_argument_most_significant():
    # x - y mod 3
    A = make_algebra(3, [("sub", 2, [(x - y) % 3 for x in range(3) for y in range(3)])])
    assert A.op("sub", 2, 0) == 2
    assert A.op("sub", 0, 2) == 1


def test_roundtrip_qn():
    A = make_qn(3).algebra
    B = parse_alg(format_alg(A))
    assert A == B and hash(A) == hash(B)
    assert B.labels == A.labels


def test_comments_and_free_layout():
    text = """# a comment
    algebra Z2   # trailing
    size 2
    op plus 2 0 1
    1 0
    op one 0
    1
    """
    A = parse_alg(text)
    assert A.name == "Z2" and A.size == 2
    assert A.signature == Signature((("plus", 2), ("one", 0)))
    assert A.op("plus", 1, 1) == 0


@pytest.mark.parametrize("text, fragment", [
    ("", "empty"),
    ("# only comments\n", "empty"),
    ("size 2\nop f x\n", "line 2"),
    ("size 2\nop f 1\n0 2\n", "line 3"),
    ("size 2\nop f 1\n0\n", "end of file"),
    ("size 2\nop f 1\n0 1\nop f 1\n1 0\n", "duplicate"),
    ("op f 1\n0\n", "before size"),
    ("size 2\nfrob 3\n", "unknown directive"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(InputError, match=fragment):
        parse_alg(text)


def test_table_validation():
    with pytest.raises(InputError):
        make_algebra(2, [("f", 1, [0, 2])])
    with pytest.raises(InputError):
        make_algebra(2, [("f", 2, [0, 1, 1])])
    with pytest.raises(InputError):
        Signature((("f", 1), ("f", 2)))


def test_algebra_is_immutable():
    A = make_qn(1).algebra
    with pytest.raises(ValueError):
        A.tables[0][0, 0] = 1


def test_elementary_maps_skip_nullary_and_dedupe():
    A = make_algebra(2, [("c", 0, [1]), ("f", 1, [0, 0]), ("g", 1, [0, 0])])
    em = A.elementary
    assert em.maps.tolist() == [[0, 0]]
    assert em.provenance == ((1, 0, ()),)
