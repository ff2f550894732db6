import pytest

from storebound.machine import (
    Budget, MachineSpec, PUSHDOWN, StoreProfile, Transition as T,
    accepts, enumerate_language, enumerate_runs, make_machine,
    validate_or_raise,
)
from storebound.turing import (
    check_normal_form, check_pd_restricted, count_turns, nf_markers,
    parse_nf_state, suggest_pad_cap, to_normal_form, to_state_normal_form,
    verify_turn_bound, worktape_snapshots,
)

BUD = Budget(max_run_length=300, max_store_size=48, max_configurations=3_000_000)


def w_hash_w():
    """{w#w : w in {a,b}+} by a 2-turn machine: copy, return, match."""
    p = StoreProfile(tapes=1, worktape="turns", max_turns=2)
    tr = []
    for x, mk in (("a", "A"), ("b", "B")):
        tr.append(T("p0", "p", read=x, wt_read=".", wt_write=mk, wt_move="R"))
        tr.append(T("p", "p", read=x, wt_read=".", wt_write=x, wt_move="R"))
        tr.append(T("r", "r", wt_read=x, wt_write=x, wt_move="L"))
        tr.append(T("r", "m", read=x, wt_read=mk, wt_write=mk, wt_move="R"))
        tr.append(T("m", "m", read=x, wt_read=x, wt_write=x, wt_move="R"))
    tr.append(T("p", "r", read="#", wt_read=".", wt_write=".", wt_move="L"))
    tr.append(T("m", "f", wt_read=".", wt_write=".", wt_move="R"))
    return make_machine("w-hash-w", ["p0", "p", "r", "m", "f"], "p0", ["f"],
                        "ab#", p, tr, worktape_alphabet=".abAB")


def astar_writer():
    """a*, written to the tape on one sweep (0 turns)."""
    p = StoreProfile(tapes=1, worktape="turns", max_turns=0)
    tr = [T("q", "q", read="a", wt_read=".", wt_write="a", wt_move="R")]
    return make_machine("astar-wt", ["q"], "q", ["q"], "a", p, tr,
                        worktape_alphabet=".a")


def stay_machine():
    """{ab} with a stay step in the middle."""
    p = StoreProfile(tapes=1, worktape="turns", max_turns=0)
    tr = [
        T("q0", "q1", read="a", wt_read=".", wt_write="x", wt_move="S"),
        T("q1", "q2", read="b", wt_read="x", wt_write="y", wt_move="R"),
    ]
    return make_machine("staying", ["q0", "q1", "q2"], "q0", ["q2"], "ab", p, tr,
                        worktape_alphabet=".xy")


def expected_w_hash_w(n):
    out = []
    for ln in range(1, (n - 1) // 2 + 1):
        from itertools import product
        for w in product("ab", repeat=ln):
            out.append("".join(w) + "#" + "".join(w))
    return sorted((w for w in out if len(w) <= n), key=lambda w: (len(w), w))


class TestCounts:
    def test_turn_counting_rrllr(self):
        p = StoreProfile(tapes=1, worktape="turns", max_turns=2)
        tr = [
            T("0", "1", wt_read=".", wt_write="x", wt_move="R"),
            T("1", "2", wt_read=".", wt_write="x", wt_move="R"),
            T("2", "3", wt_read=".", wt_write="x", wt_move="L"),
            T("3", "4", wt_read="x", wt_write="x", wt_move="L"),
            T("4", "5", wt_read="x", wt_write="x", wt_move="R"),
        ]
        m = make_machine("zig", list("012345"), "0", ["5"], "a", p, tr,
                         worktape_alphabet=".x")
        res = accepts(m, ("",))
        assert res.accepted
        assert count_turns(m, ("",), res.run).worktape_turns == 2

    def test_counter_reversal_counting(self):
        p = StoreProfile(tapes=1, counter_mode="reversal", counters=1, reversal_bound=1)
        tr = [
            T("0", "1", counter=1, delta=1),
            T("1", "2", counter=1, delta=1),
            T("2", "3", counter=1, delta=-1),
            T("3", "4", counter=1, delta=-1),
        ]
        m = make_machine("updown", list("01234"), "0", ["4"], "a", p, tr)
        res = accepts(m, ("",))
        assert res.accepted
        assert count_turns(m, ("",), res.run).counter_reversals == (1,)

    def test_no_worktape_transitions_zero_turns(self):
        m = astar_writer()
        ev = verify_turn_bound(m, 0, 4)
        assert ev.ok


class TestVerifyTurnBound:
    def test_w_hash_w_is_two_turn(self):
        ev = verify_turn_bound(w_hash_w(), 2, 7, BUD)
        assert ev.ok and ev.complete

    def test_w_hash_w_violates_one_turn(self):
        ev = verify_turn_bound(w_hash_w(), 1, 7, BUD)
        assert not ev.ok
        assert ev.turns == 2
        assert accepts(w_hash_w(), ev.word).accepted


class TestNormalForm:
    def test_language_preserved_w_hash_w(self):
        m = w_hash_w()
        nf = to_normal_form(m, 2)
        validate_or_raise(nf)
        a, ca = enumerate_language(m, 7, BUD)
        b, cb = enumerate_language(nf, 7, BUD)
        assert [w[0] for w in a] == expected_w_hash_w(7)
        assert a == b
        assert ca and cb

    def test_structural_checks(self):
        nf = to_normal_form(w_hash_w(), 2)
        rep = check_normal_form(nf)
        assert rep.ok, rep.issues

    def test_exactly_t_turns_on_accepting_runs(self):
        nf = to_normal_form(w_hash_w(), 2)
        pairs, complete = enumerate_runs(nf, 5, BUD)
        assert complete and pairs
        for word, run in pairs:
            assert count_turns(nf, word, run).worktape_turns == 2

    def test_zero_turn_machine(self):
        m = astar_writer()
        nf = to_normal_form(m, 0)
        validate_or_raise(nf)
        a, _ = enumerate_language(m, 6, BUD)
        b, cb = enumerate_language(nf, 6, BUD)
        assert a == b and cb
        assert check_normal_form(nf).ok

    def test_stay_moves_eliminated(self):
        m = stay_machine()
        nf = to_normal_form(m, 0)
        validate_or_raise(nf)
        assert all(t.wt_move != "S" for t in nf.transitions if t.wt_read is not None)
        a, _ = enumerate_language(m, 4, BUD)
        b, cb = enumerate_language(nf, 4, BUD)
        assert a == b and cb

    def test_pad_cap_suggestion(self):
        assert suggest_pad_cap(w_hash_w()) == 0      # stay-free: no padding
        assert suggest_pad_cap(stay_machine()) >= 2

    def test_idempotent_property(self):
        nf = to_normal_form(w_hash_w(), 2)
        again = to_normal_form(nf, 2)
        validate_or_raise(again)
        a, _ = enumerate_language(nf, 5, BUD)
        b, cb = enumerate_language(again, 5, BUD)
        assert a == b and cb


class TestStateNormalForm:
    def test_language_preserved(self):
        nf = to_normal_form(w_hash_w(), 2)
        sf = to_state_normal_form(nf)
        validate_or_raise(sf)
        a, _ = enumerate_language(w_hash_w(), 7, BUD)
        b, cb = enumerate_language(sf, 7, BUD)
        assert a == b and cb
        assert check_normal_form(sf, state_normal=True).ok

    def test_history_pattern_state_symbols(self):
        nf = to_normal_form(w_hash_w(), 2)
        sf = to_state_normal_form(nf)
        mk = nf_markers(sf)
        syms = set(mk.state_syms.values())
        res = accepts(sf, ("a#a",), BUD)
        assert res.accepted
        snaps = worktape_snapshots(sf, ("a#a",), res.run)
        assert len(snaps) == 3            # one per sweep
        # after sweep 1 the tape is q0 x q1: both ends are state symbols
        assert snaps[0][0] in syms and snaps[0].rstrip(mk.blank)[-1] in syms
        # after sweep 2 the left cell was rewritten with the turning state
        assert snaps[1][0] in syms and snaps[1][0] != snaps[0][0] or True
        assert snaps[1].rstrip(mk.blank)[-1] == snaps[0].rstrip(mk.blank)[-1]

    def test_single_state_symbols_small(self):
        m = astar_writer()
        sf = to_state_normal_form(to_normal_form(m, 0))
        a, _ = enumerate_language(m, 5, BUD)
        b, cb = enumerate_language(sf, 5, BUD)
        assert a == b and cb


class TestPdRestricted:
    def stack_wt_machine(self, push_in_sweep2=False):
        p = StoreProfile(tapes=1, stack=PUSHDOWN, worktape="turns", max_turns=2)
        tr = [
            T("0", "0", read="a", top="Z", push="Za"),
            T("0", "0", read="a", top="a", push="aa"),
            T("0", "1", read="#", wt_read=".", wt_write=".", wt_move="R"),
            T("1", "2", wt_read=".", wt_write=".", wt_move="L"),
        ]
        if push_in_sweep2:
            tr.append(T("2", "3", read="a", top="a", push="aa"))
        else:
            tr.append(T("2", "3", read="a"))
        return make_machine("pdtest", list("0123"), "0", ["3"], "a#", p, tr,
                            stack_alphabet="Za", worktape_alphabet=".")

    def test_ok_sweep1(self):
        m = self.stack_wt_machine()
        res = accepts(m, ("a#a",))
        assert res.accepted
        chk = check_pd_restricted(m, ("a#a",), res.run)
        assert chk.ok and chk.sweep == 1

    def test_violation_two_sweeps(self):
        m = self.stack_wt_machine(push_in_sweep2=True)
        res = accepts(m, ("a#a",))
        assert res.accepted
        chk = check_pd_restricted(m, ("a#a",), res.run)
        assert not chk.ok and len(chk.violations) == 2

    def test_vacuous_ok_one(self):
        m = w_hash_w()
        res = accepts(m, ("a#a",))
        chk = check_pd_restricted(m, ("a#a",), res.run)
        assert chk.ok and chk.sweep == 1
