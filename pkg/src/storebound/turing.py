"""Finite-turn worktape machines: turn accounting, normal form, and
state normal form.

The normal form rebuilds a t-turn machine so that every accepting run makes
exactly t turns, the head never stays, sweeps span the whole used tape, and
turns happen only at the left end cell and one guessed right end cell.  Stay
steps are simulated on interleaved # padding (capped per cell write) and
mid-tape turns by marking the cell, walking to the end, turning there, and
walking back.  State normal form additionally writes a symbol naming the
entered control state at every end-cell turn.

Normalized state names are machine-parseable: "<turns><dir>|<kind>|<payload>"
so later constructions can read off the sweep index of every transition.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .machine import (
    Budget, DEFAULT_BUDGET, L, R, S, MachineSpec, NONE, StoreProfile,
    Transition, enumerate_runs, fresh_symbols, make_machine, replay, step,
    _initial,
)


# ---------------------------------------------------------------------------
# Turn / flip / reversal accounting


@dataclass(frozen=True)
class TurnCounts:
    worktape_turns: int
    stack_flips: int
    counter_reversals: tuple


def count_turns(m: MachineSpec, word, run) -> TurnCounts:
    """Exact counts along a replayable run.

    A stay move never counts as a turn; only L<->R changes do.  A counter
    reversal is a switch between nondecreasing and nonincreasing.
    """
    cfg = _initial(m, tuple(word))
    k = m.profile.counters
    last = [0] * k
    revs = [0] * k
    turns = 0
    flips = 0
    wt_last = ""
    for i in run:
        t = m.transitions[i]
        nxt = step(m, cfg, t)
        if t.wt_read is not None and t.wt_move in (L, R):
            if wt_last and t.wt_move != wt_last:
                turns += 1
            wt_last = t.wt_move
        if t.flip:
            flips += 1
        if t.counter is not None and t.delta != 0:
            j = t.counter - 1
            d = 1 if t.delta > 0 else -1
            if last[j] != 0 and d != last[j]:
                revs[j] += 1
            last[j] = d
        cfg = nxt
    return TurnCounts(turns, flips, tuple(revs))


@dataclass(frozen=True)
class TurnEvidence:
    ok: bool                       # True = no violation found at desk scale
    word: Optional[tuple] = None   # a violating accepting run, when found
    run: Optional[tuple] = None
    turns: Optional[int] = None
    complete: bool = True


def verify_turn_bound(m: MachineSpec, bound: int, max_len: int,
                      budget: Budget = DEFAULT_BUDGET) -> TurnEvidence:
    """Search accepting runs on inputs up to max_len for one exceeding the
    claimed turn bound.  Absence of a violation is evidence, not proof."""
    relaxed = m
    if m.profile.has_worktape() and m.profile.max_turns <= bound:
        # allow the search to exhibit runs beyond the claimed bound
        relaxed = replace(m, profile=replace(m.profile, max_turns=bound + 2))
    pairs, complete = enumerate_runs(relaxed, max_len, budget)
    for word, run in pairs:
        tc = count_turns(relaxed, word, run)
        if tc.worktape_turns > bound:
            return TurnEvidence(False, word, run, tc.worktape_turns, complete)
    return TurnEvidence(True, complete=complete)


# ---------------------------------------------------------------------------
# pd-restriction: the stack may only be touched in one sweep per run


@dataclass(frozen=True)
class PdRestriction:
    ok: bool
    sweep: Optional[int] = None      # 1-based sweep index; vacuous runs get 1
    violations: tuple = ()           # (position, sweep) pairs when not ok


def check_pd_restricted(m: MachineSpec, word, run) -> PdRestriction:
    """Check every stack-touching step of the run sits in one sweep.

    The sweep index of a step is turns_used + 1 at the moment it fires.
    Runs that never touch the stack report sweep 1 by convention.
    """
    cfg = _initial(m, tuple(word))
    touched = []
    for pos, i in enumerate(run):
        t = m.transitions[i]
        if t.top is not None or t.flip:
            sweep = (cfg.wt[2] if cfg.wt else 0) + 1
            touched.append((pos, sweep))
        cfg = step(m, cfg, t)
    if not touched:
        return PdRestriction(True, 1)
    sweeps = {s for _, s in touched}
    if len(sweeps) == 1:
        return PdRestriction(True, sweeps.pop())
    return PdRestriction(False, None, tuple(touched))


# ---------------------------------------------------------------------------
# Normal form


def suggest_pad_cap(m: MachineSpec, default: int = 2) -> int:
    """A sufficient per-cell padding cap: the longest simple stay chain.

    Stay-free machines need no padding at all (cap 0).  A cyclic stay graph
    (which would need unbounded padding) keeps the `default` and the caller
    should raise the cap per machine; the validator already warns about the
    lambda-cycle case.
    """
    edges = {}
    nodes = set()
    for t in m.transitions:
        if t.wt_read is not None and t.wt_move == S:
            a, b = (t.src, t.wt_read), (t.dst, t.wt_write)
            edges.setdefault(a, []).append(b)
            nodes.update((a, b))
    if not nodes:
        return 0
    best = 0
    memo = {}

    def longest(n, seen):
        if n in memo:
            return memo[n]
        out = 0
        for nb in edges.get(n, ()):
            if nb in seen:
                return None          # cycle: bail out
            sub = longest(nb, seen | {nb})
            if sub is None:
                return None
            out = max(out, 1 + sub)
        memo[n] = out
        return out

    for n in nodes:
        got = longest(n, {n})
        if got is None:
            return default
        best = max(best, got)
    return max(default, best + 1)


def nf_state(turns: int, d: str, kind: str, payload: str = "-") -> str:
    return f"{turns}{d}|{kind}|{payload}"


def parse_nf_state(name: str):
    """(turns, dir, kind, payload) for a normalized-machine state name."""
    head, kind, payload = name.split("|", 2)
    return int(head[:-1]), head[-1], kind, payload


def sweep_of_state(name: str) -> int:
    turns, _, _, _ = parse_nf_state(name)
    return turns + 1


@dataclass(frozen=True)
class NormalFormMarkers:
    left: str        # left end marker written at cell 0
    right: str       # right end marker
    pad: str         # interleaved padding
    blank: str
    marks: dict      # plain worktape symbol -> marked variant
    state_syms: dict # state name -> end-cell symbol (state normal form only)

    def unmark(self):
        return {v: k for k, v in self.marks.items()}


_MARKER_CACHE: dict = {}


def nf_markers(m: MachineSpec) -> NormalFormMarkers:
    """Marker symbols of an in-process (state-)normal-form machine."""
    return _MARKER_CACHE[m]


def _opp(d):
    return L if d == R else R


def to_normal_form(m: MachineSpec, t: Optional[int] = None,
                   pad_cap: Optional[int] = None, tail_cap: int = 2) -> MachineSpec:
    """Normalize a t-turn worktape machine (appendix construction).

    The caller asserts M is t-turn (check with verify_turn_bound at desk
    scale).  Counter and stack transitions pass through verbatim.  Padding
    per cell write is capped (`pad_cap`, default from suggest_pad_cap); the
    right-end tail of #/blank cells guessed before placing the end marker is
    capped by `tail_cap`.  Language equality holds whenever the caps cover
    the machine's stay chains and rightward extent growth across sweeps.
    """
    p = m.profile
    if not p.has_worktape():
        raise ValueError("machine has no worktape")
    if t is None:
        t = p.max_turns
    if pad_cap is None:
        pad_cap = suggest_pad_cap(m)
    blank = m.blank
    gamma = list(m.worktape_alphabet)
    used = set(gamma) | set(m.input_alphabet) | set(m.stack_alphabet)
    gen = fresh_symbols(used)
    left, right, pad = next(gen), next(gen), next(gen)
    marks = {g: next(gen) for g in gamma}
    gamma_full = gamma + [left, right, pad] + [marks[g] for g in gamma]

    by_src = {}
    for tr in m.transitions:
        by_src.setdefault(tr.src, []).append(tr)

    trans = []
    seen = set()
    todo = []
    BOOT = nf_state(0, R, "boot")

    def want(name):
        if name not in seen:
            seen.add(name)
            todo.append(name)
        return name

    def sim(q, d, k, padj=0):
        payload = f"{q}@{padj}" if (d == R and k == 0) else q
        return nf_state(k, d, "sim", payload)

    def stay(q, cur, fin, d, k, padj=0):
        payload = f"{q}@{cur}@{fin}" + (f"@{padj}" if (d == R and k == 0) else "")
        return nf_state(k, d, "stay", payload)

    def seek(q, d, k, tailj=0):
        payload = f"{q}@{tailj}" if (d == R and k == 0) else q
        return nf_state(k, d, "seek", payload)

    def ret(q, d, k):
        return nf_state(k, d, "ret", q)

    def finf(d, k):
        return nf_state(k, d, "finf")

    def fin(d, k):
        return nf_state(k, d, "fin")

    DONE_STATES = [nf_state(t, d, "done") for d in (R, L)]

    trans.append(Transition(BOOT, want(sim(m.initial, R, 0)),
                            wt_read=blank, wt_write=left, wt_move=R))
    seen.add(BOOT)

    passable = gamma + [pad]

    while todo:
        cur = todo.pop()
        k, d, kind, payload = parse_nf_state(cur)
        if kind == "sim":
            if d == R and k == 0:
                q, padj = payload.rsplit("@", 1)
                padj = int(padj)
            else:
                q, padj = payload, 0
            # padding writer (first sweep only) and padding skip
            if d == R and k == 0 and padj < pad_cap:
                trans.append(Transition(cur, want(sim(q, d, k, padj + 1)),
                                        wt_read=blank, wt_write=pad, wt_move=R))
            trans.append(Transition(cur, cur, wt_read=pad, wt_write=pad, wt_move=d))
            if q in m.finals:
                trans.append(Transition(cur, want(finf(d, k))))
            for tr in by_src.get(q, ()):
                if tr.wt_read is None:
                    # counter/stack/pure transitions pass through verbatim
                    trans.append(replace(tr, src=cur, dst=want(sim(tr.dst, d, k, padj))))
                    continue
                y, z, mv = tr.wt_read, tr.wt_write, tr.wt_move
                base = dict(tape=tr.tape, read=tr.read)
                if mv == d:
                    trans.append(Transition(cur, want(sim(tr.dst, d, k)),
                                            wt_read=y, wt_write=z, wt_move=d, **base))
                elif mv == S:
                    for fsym in gamma_full[:len(gamma)] + [marks[g] for g in gamma]:
                        trans.append(Transition(cur, want(stay(tr.dst, z, fsym, d, k, padj)),
                                                wt_read=y, wt_write=fsym, wt_move=d, **base))
                else:  # a turn away from the current direction
                    if k + 1 > t:
                        continue
                    trans.append(Transition(cur, want(seek(tr.dst, d, k)),
                                            wt_read=y, wt_write=marks[z], wt_move=d, **base))
        elif kind == "stay":
            parts = payload.split("@")
            if d == R and k == 0:
                q, curSym, fsym, padj = parts[0], parts[1], parts[2], int(parts[3])
            else:
                q, curSym, fsym = parts[0], parts[1], parts[2]
                padj = 0
            first_sweep = d == R and k == 0
            if q in m.finals:
                trans.append(Transition(cur, want(finf(d, k))))
            for tr in by_src.get(q, ()):
                if tr.wt_read is None:
                    trans.append(replace(tr, src=cur,
                                         dst=want(stay(tr.dst, curSym, fsym, d, k, padj))))
                    continue
                if tr.wt_read != curSym:
                    continue
                z, mv = tr.wt_write, tr.wt_move
                base = dict(tape=tr.tape, read=tr.read)
                if first_sweep:
                    if padj >= pad_cap:
                        continue
                    wt = dict(wt_read=blank, wt_write=pad, wt_move=R)
                    npad = padj + 1
                else:
                    wt = dict(wt_read=pad, wt_write=pad, wt_move=d)
                    npad = padj
                if mv == S:
                    trans.append(Transition(cur, want(stay(tr.dst, z, fsym, d, k, npad)),
                                            **base, **wt))
                elif mv == d and z == fsym:
                    trans.append(Transition(cur, want(sim(tr.dst, d, k, npad)), **base, **wt))
                elif mv == _opp(d) and marks.get(z) == fsym:
                    if k + 1 > t:
                        continue
                    trans.append(Transition(cur, want(seek(tr.dst, d, k)), **base, **wt))
        elif kind == "seek":
            if d == R and k == 0:
                q, tailj = payload.rsplit("@", 1)
                tailj = int(tailj)
            else:
                q, tailj = payload, 0
            first_sweep = d == R and k == 0
            if not first_sweep:
                # walk over already-written cells; on the first sweep
                # everything ahead is virgin, so only tail writes move us
                for c in passable:
                    trans.append(Transition(cur, cur, wt_read=c, wt_write=c, wt_move=d))
            if d == R:
                if k == 0:
                    if tailj < tail_cap:
                        # padding in the tail only matters when stay chains
                        # need room; blank cells host later rightward growth
                        for c in ((pad, blank) if pad_cap else (blank,)):
                            trans.append(Transition(cur, want(seek(q, d, k, tailj + 1)),
                                                    wt_read=blank, wt_write=c, wt_move=R))
                    trans.append(Transition(cur, want(ret(q, L, 1)),
                                            wt_read=blank, wt_write=right, wt_move=L))
                else:
                    trans.append(Transition(cur, want(ret(q, L, k + 1)),
                                            wt_read=right, wt_write=right, wt_move=L))
            else:
                trans.append(Transition(cur, want(ret(q, R, k + 1)),
                                        wt_read=left, wt_write=left, wt_move=R))
        elif kind == "ret":
            q = payload
            for c in passable:
                trans.append(Transition(cur, cur, wt_read=c, wt_write=c, wt_move=d))
            for g, mg in marks.items():
                trans.append(Transition(cur, want(sim(q, d, k)),
                                        wt_read=mg, wt_write=g, wt_move=d))
        elif kind == "finf":
            # must take one real walk step before turning: keeps runs that
            # stepped onto the left marker from escaping via a filler turn
            for c in passable:
                trans.append(Transition(cur, want(fin(d, k)),
                                        wt_read=c, wt_write=c, wt_move=d))
        elif kind == "fin":
            if not (d == R and k == 0):
                for c in passable:
                    trans.append(Transition(cur, cur, wt_read=c, wt_write=c, wt_move=d))
            if d == R:
                if k < t:
                    if k == 0:
                        trans.append(Transition(cur, want(fin(L, 1)),
                                                wt_read=blank, wt_write=right, wt_move=L))
                    else:
                        trans.append(Transition(cur, want(fin(L, k + 1)),
                                                wt_read=right, wt_write=right, wt_move=L))
                else:
                    end_read = blank if t == 0 else right
                    trans.append(Transition(cur, want(nf_state(t, R, "done")),
                                            wt_read=end_read, wt_write=right, wt_move=R))
            else:
                if k < t:
                    trans.append(Transition(cur, want(fin(R, k + 1)),
                                            wt_read=left, wt_write=left, wt_move=R))
                else:
                    for c in passable:
                        trans.append(Transition(cur, want(nf_state(t, L, "done")),
                                                wt_read=c, wt_write=c, wt_move=L))
        elif kind in ("boot", "done"):
            pass

    states = sorted(seen | {BOOT})
    finals = [s for s in states if parse_nf_state(s)[2] == "done"]
    out = make_machine(
        m.name + "+nf", states, BOOT, finals, m.input_alphabet,
        replace(p, worktape="turns", max_turns=t),
        trans, m.stack_alphabet, gamma_full,
    )
    _MARKER_CACHE[out] = NormalFormMarkers(left, right, pad, blank, dict(marks), {})
    return out


def to_state_normal_form(m: MachineSpec) -> MachineSpec:
    """Rewrite a normalized machine so every end-cell turn writes a symbol
    naming the state it turns into (plus the initial write at cell 0 and the
    final right-end write).  Language unchanged.

    The left-end accept of odd-turn machines stops without a write (a write
    there would force a stay move or an extra direction change); history
    tracks treat that boundary accordingly.
    """
    mk = nf_markers(m)
    left, right = mk.left, mk.right
    # states whose symbol can land on an end cell
    writer_dsts = sorted({tr.dst for tr in m.transitions
                          if tr.wt_write in (left, right)})
    gen = fresh_symbols(set(m.worktape_alphabet) | set(m.input_alphabet)
                        | set(m.stack_alphabet))
    sym = {q: next(gen) for q in writer_dsts}
    left_syms = sorted({sym[tr.dst] for tr in m.transitions if tr.wt_write == left})
    right_syms = sorted({sym[tr.dst] for tr in m.transitions if tr.wt_write == right})

    trans = []
    for tr in m.transitions:
        if tr.wt_read is None:
            trans.append(tr)
            continue
        reads: list
        if tr.wt_read == left:
            reads = [s for s in left_syms]
        elif tr.wt_read == right:
            reads = [s for s in right_syms]
        else:
            reads = [tr.wt_read]
        if tr.wt_write in (left, right):
            write = sym[tr.dst]
        else:
            write = tr.wt_write
        for rd in reads:
            trans.append(replace(tr, wt_read=rd, wt_write=write))

    gamma = list(m.worktape_alphabet) + [sym[q] for q in writer_dsts]
    out = make_machine(
        m.name + "+sf", m.states, m.initial, sorted(m.finals), m.input_alphabet,
        m.profile, trans, m.stack_alphabet, gamma,
    )
    _MARKER_CACHE[out] = NormalFormMarkers(
        left, right, mk.pad, mk.blank, dict(mk.marks),
        {q: s for q, s in sym.items()})
    return out


# ---------------------------------------------------------------------------
# Structural checks


@dataclass(frozen=True)
class NormalFormReport:
    ok: bool
    issues: tuple


def check_normal_form(m: MachineSpec, state_normal: bool = False) -> NormalFormReport:
    """Syntactic normal-form checks: parseable state tags, no stay moves,
    moves match the state direction, turns only on end-marked cells, done
    states at exactly the declared turn count."""
    issues = []
    t = m.profile.max_turns
    try:
        mk = nf_markers(m)
    except KeyError:
        mk = None
    end_left = {mk.left} | set(mk.state_syms.values()) if mk else None
    end_right = ({mk.right, mk.blank} | set(mk.state_syms.values())) if mk else None
    for i, tr in enumerate(m.transitions):
        try:
            ks, ds, kinds, _ = parse_nf_state(tr.src)
            kd, dd, kindd, _ = parse_nf_state(tr.dst)
        except Exception:
            issues.append(f"trans #{i}: unparseable state tag")
            continue
        if tr.wt_read is None:
            continue
        if tr.wt_move == S:
            issues.append(f"trans #{i}: stay move")
            continue
        if tr.wt_move == ds:
            if kd != ks:
                issues.append(f"trans #{i}: same-direction move changes turn count")
        else:
            if not (kd == ks + 1 and dd == tr.wt_move):
                issues.append(f"trans #{i}: turn transition tags wrong")
            if end_left is not None:
                endset = end_right if ds == R else end_left
                if tr.wt_read not in endset:
                    issues.append(f"trans #{i}: turn reads {tr.wt_read!r}, not an end mark")
    for s in m.finals:
        k, d, kind, _ = parse_nf_state(s)
        if kind != "done" or k != t:
            issues.append(f"final state {s} not a done state at {t} turns")
    return NormalFormReport(not issues, tuple(issues))


def worktape_snapshots(m: MachineSpec, word, run):
    """Tape content right after every turn write, plus the final content.

    For a machine in (state) normal form this is the sweep history: entry i
    is the tape after sweep i+1."""
    cfg = _initial(m, tuple(word))
    snaps = []
    turns = cfg.wt[2]
    for i in run:
        nxt = step(m, cfg, m.transitions[i])
        if nxt.wt[2] != turns:
            snaps.append(nxt.wt[0])
            turns = nxt.wt[2]
        cfg = nxt
    snaps.append(cfg.wt[0])
    return snaps
