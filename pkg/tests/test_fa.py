from hypothesis import given, strategies as st

from storebound.fa import (
    NFA, commute, from_machine, primitive_root, strongly_connected,
    to_machine, word_star_dfa,
)
from storebound.machine import enumerate_language


def ab_star():
    # (ab)*
    return NFA("ab", ["0"], ["0"], [("0", "a", "1"), ("1", "b", "0")])


def test_accepts():
    m = ab_star()
    assert m.accepts("")
    assert m.accepts("abab")
    assert not m.accepts("a")
    assert not m.accepts("ba")


def test_eps_closure_and_union():
    a = NFA("a", ["0"], ["1"], [("0", "a", "1")])
    b = NFA("b", ["0"], ["1"], [("0", "b", "1")])
    u = a.union(b)
    assert u.accepts("a") and u.accepts("b") and not u.accepts("ab")


def test_determinize_complement():
    m = ab_star()
    c = m.complement()
    for w in ["", "ab", "abab", "a", "b", "ba", "aab"]:
        assert c.accepts(w) != m.accepts(w)


def test_intersect_difference_subset():
    m = ab_star()
    sigma_star = NFA("ab", ["0"], ["0"], [("0", "a", "0"), ("0", "b", "0")])
    assert m.is_subset(sigma_star)
    assert not sigma_star.is_subset(m)
    inter = m.intersect(sigma_star)
    assert inter.equivalent(m)
    assert m.difference(m).is_empty()


def test_reverse():
    m = NFA("ab", ["0"], ["2"], [("0", "a", "1"), ("1", "b", "2")])
    r = m.reverse()
    assert r.accepts("ba") and not r.accepts("ab")


def test_shortest_and_enumerate():
    m = ab_star()
    assert m.shortest_word() == ""
    assert m.enumerate(4) == ["", "ab", "abab"]
    n = NFA("ab", ["0"], ["1"], [("0", "a", "0"), ("0", "b", "1")])
    assert n.shortest_word() == "b"


def test_emptiness_and_infinity():
    dead = NFA("a", ["0"], [], [("0", "a", "0")])
    assert dead.is_empty()
    fin = NFA("a", ["0"], ["1"], [("0", "a", "1")])
    assert not fin.is_infinite()
    inf = ab_star()
    assert inf.is_infinite()
    # epsilon-only cycle is not pumping
    eps = NFA("a", ["0"], ["0"], [("0", "", "1"), ("1", "", "0")])
    assert not eps.is_infinite()


def test_scc():
    comp = strongly_connected(
        {"a", "b", "c"}, [("a", "x", "b"), ("b", "x", "a"), ("b", "x", "c")])
    assert comp["a"] == comp["b"] != comp["c"]


def test_word_star_dfa():
    m = word_star_dfa("ab", "ab")
    assert m.accepts("") and m.accepts("ababab")
    assert not m.accepts("aab") and not m.accepts("ba")


@given(st.text(alphabet="ab", min_size=1, max_size=12))
def test_primitive_root_properties(w):
    p = primitive_root(w)
    assert p and len(w) % len(p) == 0
    assert p * (len(w) // len(p)) == w
    assert primitive_root(p) == p


@given(st.text(alphabet="ab", max_size=6), st.text(alphabet="ab", max_size=6))
def test_commute_iff_common_root(u, v):
    if u and v:
        assert commute(u, v) == (primitive_root(u) == primitive_root(v))


def test_machine_round_trip():
    m = ab_star()
    spec = to_machine(m, "abstar")
    words, complete = enumerate_language(spec, 6)
    assert complete
    assert [w[0] for w in words] == ["", "ab", "abab", "ababab"]
    back = from_machine(spec)
    assert back.equivalent(m)
