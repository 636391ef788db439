"""Residue ring reduction, function tables with their JSON form, and the
CRT split/combine pair."""

import json
import random

import pytest

from cpfq.polyring import NEG_INF, parse, to_text
from cpfq.residue import (
    FunctionTable,
    ResidueRing,
    crt_combine,
    crt_split,
    reduce_mod,
)
from helpers import make_field, pol, ring, table


def test_reduce_canonical():
    R = ring(3, "t^2+1")
    rng = random.Random(11)
    for _ in range(100):
        h = pol(3, "t^5") * R.field.element(rng.randrange(3)) + pol(3, "t^3+2t+1") * R.field.element(rng.randrange(3))
        r = R.reduce(h)
        assert r.degree is NEG_INF or r.degree < 2
        assert R.reduce(r) == r
        assert ((h - r) % R.modulus).is_zero()


def test_ring_ops_match_poly_ops():
    R = ring(2, "t^3+t+1")
    els = R.elements()
    for a in els:
        for b in els:
            assert R.add(a, b) == R.reduce(a + b)
            assert R.mul(a, b) == R.reduce(a * b)
            assert R.sub(a, b) == R.reduce(a - b)


def test_inv_unit():
    R = ring(2, "t^3+t^2")
    one = pol(2, "1")
    for a in R.elements():
        gcd_deg = 0 if a.is_zero() else None
        try:
            inv = R.inv_unit(a)
        except ValueError:
            continue
        assert R.mul(a, inv) == one
    with pytest.raises(ValueError):
        R.inv_unit(pol(2, "t"))  # shares the factor t with the modulus


def test_element_index_round_trip():
    R = ring(3, "t^3")
    for i, rep in enumerate(R.elements()):
        assert R.element(i) == rep
        assert R.index(rep) == i


# ----------------------------------------------------------- FunctionTable
def test_table_json_golden():
    sig = table(ring(2, "t^2"), ring(2, "t"), lambda h: h)
    expected = ('{"q": 2, "f": "t^2", "g": "t", '
                '"values": {"0": "0", "1": "1", "t": "0", "t+1": "1"}}')
    assert json.dumps(sig.to_json_obj()) == expected


def test_table_json_golden_extension():
    d4 = ring(4, "t")
    sig = table(d4, d4, lambda h: h * h)
    expected = ('{"q": 4, "p": 2, "m": 2, "field_modulus": "u^2+u+1", '
                '"f": "t", "g": "t", '
                '"values": {"0": "0", "1": "1", "u": "u+1", "u+1": "u"}}')
    assert json.dumps(sig.to_json_obj()) == expected


@pytest.mark.parametrize("q,f,g", [(2, "t^2", "t^3+t"), (3, "t", "t^2+2"), (4, "t", "t^2+ut")])
def test_table_json_round_trip(q, f, g):
    rng = random.Random(5)
    dom, cod = ring(q, f), ring(q, g)
    for _ in range(10):
        vals = [cod.elements()[rng.randrange(cod.size)] for _ in range(dom.size)]
        sig = FunctionTable(dom, cod, vals)
        back = FunctionTable.from_json_obj(sig.to_json_obj())
        assert back == sig
        assert back.domain.modulus == dom.modulus


def test_table_json_rejects_malformed():
    sig = table(ring(2, "t^2"), ring(2, "t"), lambda h: h)
    good = sig.to_json_obj()
    missing = dict(good)
    del missing["g"]
    with pytest.raises(ValueError):
        FunctionTable.from_json_obj(missing)
    extra = dict(good)
    extra["spurious"] = 1
    with pytest.raises(ValueError):
        FunctionTable.from_json_obj(extra)
    short = dict(good)
    short["values"] = {"0": "0"}
    with pytest.raises(ValueError):
        FunctionTable.from_json_obj(short)
    bad_val = dict(good)
    bad_val["values"] = dict(good["values"], **{"0": "t^9"})
    with pytest.raises(ValueError):
        FunctionTable.from_json_obj(bad_val)


def test_table_values_follow_index_order():
    dom = ring(2, "t^2")
    sig = table(dom, dom, lambda h: h)
    keys = list(sig.to_json_obj()["values"])
    assert keys == [to_text(r) for r in dom.elements()]


def test_table_validates_codomain_reps():
    dom, cod = ring(2, "t"), ring(2, "t")
    with pytest.raises(ValueError):
        FunctionTable(dom, cod, [pol(2, "t^2"), pol(2, "0")])  # not canonical


def test_value_at_and_equality():
    dom = ring(2, "t^2")
    ident = table(dom, dom, lambda h: h)
    assert ident.value_at(pol(2, "t")) == pol(2, "t")
    assert ident == table(dom, dom, lambda h: h)
    assert ident != table(dom, dom, lambda h: h + pol(2, "1"))


# ------------------------------------------------------------------- CRT
def test_crt_round_trip_exhaustive():
    # all 256 functions A_{t^2} -> A_{t(t+1)}
    dom, cod = ring(2, "t^2"), ring(2, "t^2+t")
    reps = cod.elements()
    import itertools
    for combo in itertools.product(range(4), repeat=4):
        sig = FunctionTable(dom, cod, [reps[i] for i in combo])
        parts = crt_split(sig)
        assert [to_text(p.codomain.modulus) for p in parts] == ["t", "t+1"]
        assert crt_combine(parts) == sig


def test_crt_round_trip_random_prime_powers():
    rng = random.Random(23)
    dom, cod = ring(2, "t^2"), ring(2, "t^4+t^3")  # t^3 (t+1)
    for _ in range(25):
        vals = [cod.elements()[rng.randrange(cod.size)] for _ in range(dom.size)]
        sig = FunctionTable(dom, cod, vals)
        assert crt_combine(crt_split(sig)) == sig


def test_crt_combine_non_monic_modulus():
    rng = random.Random(7)
    dom = ring(3, "t")
    g = pol(3, "2t^3+2t")  # 2 t (t^2+1)
    cod = ResidueRing(g)
    vals = [cod.elements()[rng.randrange(cod.size)] for _ in range(dom.size)]
    sig = FunctionTable(dom, cod, vals)
    parts = crt_split(sig)
    back = crt_combine(parts, modulus=g)
    assert back == sig
    # default combine yields the monic product
    assert to_text(crt_combine(parts).codomain.modulus) == "t^3+t"


def test_crt_combine_errors():
    dom = ring(2, "t^2")
    a = table(dom, ring(2, "t"), lambda h: h)
    b = table(ring(2, "t"), ring(2, "t+1"), lambda h: h)
    with pytest.raises(ValueError):
        crt_combine([a, b])  # domains differ
    c = table(dom, ring(2, "t^2+t"), lambda h: h)
    with pytest.raises(ValueError):
        crt_combine([a, c])  # t(t+1) is not a prime power
    with pytest.raises(ValueError):
        crt_combine([a, table(dom, ring(2, "t^2"), lambda h: h)])  # repeated prime
    with pytest.raises(ValueError):
        crt_combine([a], modulus=pol(2, "t+1"))  # modulus mismatch


def test_reduce_mod_helper():
    assert reduce_mod(pol(2, "t^3+t"), pol(2, "t^2")) == pol(2, "t")
