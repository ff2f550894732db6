"""Unified machine model: multi-tape finite control plus optional stores.

A machine has t one-way input tapes and a declared store profile: counters
(monotonic, reversal-bounded, or partially blind), an optional pushdown or
flip-pushdown, and an optional finite-turn worktape.  Every transition reads
at most one tape symbol and touches at most one store.  Semantics are exact
and budgeted: the brute-force enumeration oracle in this module is the ground
truth that every transformation in the package is tested against.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, NamedTuple, Optional, Sequence

LAMBDA = ""

# Counter modes
NONE = "none"
MONOTONIC = "monotonic"
REVERSAL = "reversal"
BLIND = "blind"

# Stack kinds
PUSHDOWN = "pushdown"
FLIP = "flip"

# Worktape moves
L, R, S = "L", "R", "S"

TAPE_SEP = "⊢"


class NotEnabled(Exception):
    """A transition is not enabled in a configuration; `code` says why."""

    def __init__(self, code: str, detail: str = ""):
        self.code = code
        super().__init__(f"{code}{': ' + detail if detail else ''}")


@dataclass(frozen=True)
class StoreProfile:
    tapes: int = 1
    counter_mode: str = NONE
    counters: int = 0
    reversal_bound: Optional[int] = None
    stack: str = NONE
    max_flips: int = 0
    worktape: str = NONE
    max_turns: int = 0

    def has_stack(self) -> bool:
        return self.stack != NONE

    def has_worktape(self) -> bool:
        return self.worktape != NONE


@dataclass(frozen=True)
class Transition:
    """One step of the finite control.

    Exactly one store effect: counter (index, guard, delta), stack rewrite
    (pop `top`, push the word `push`), stack flip, or a worktape
    read/write/move.  `read == ""` is a lambda move on tape `tape`.
    """

    src: str
    dst: str
    tape: int = 1
    read: str = LAMBDA
    counter: Optional[int] = None
    guard: Optional[int] = None          # None = no status guard
    delta: int = 0
    top: Optional[str] = None
    push: Optional[str] = None
    flip: bool = False
    wt_read: Optional[str] = None
    wt_write: Optional[str] = None
    wt_move: Optional[str] = None

    def effect_kind(self) -> str:
        if self.counter is not None:
            return "counter"
        if self.top is not None:
            return "stack"
        if self.flip:
            return "flip"
        if self.wt_read is not None:
            return "worktape"
        return "none"


class Configuration(NamedTuple):
    """State + per-tape input words + store snapshot.

    `io` holds the remaining input in checking mode and the consumed input in
    generating mode.  The worktape is (content, head, turns_used, last_dir)
    with content always covering the head cell.
    """

    state: str
    io: tuple
    counters: tuple
    cdirs: tuple    # last nonzero move direction per counter; () unless reversal mode
    crevs: tuple    # reversals used per counter; () unless reversal mode
    stack: Optional[str]
    flips: int
    wt: Optional[tuple]


@dataclass(frozen=True)
class Budget:
    max_run_length: int = 400
    max_store_size: int = 64
    max_configurations: int = 2_000_000


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class MachineSpec:
    name: str
    states: tuple
    initial: str
    finals: frozenset
    input_alphabet: tuple
    profile: StoreProfile
    transitions: tuple
    stack_alphabet: tuple = ()      # first symbol is Z0
    worktape_alphabet: tuple = ()   # first symbol is the blank

    @property
    def z0(self) -> str:
        return self.stack_alphabet[0]

    @property
    def blank(self) -> str:
        return self.worktape_alphabet[0]

    def initial_configuration(self, word: Sequence[str]) -> Configuration:
        return _initial(self, tuple(word))

    def with_name(self, name: str) -> "MachineSpec":
        return replace(self, name=name)


def make_machine(name, states, initial, finals, input_alphabet, profile,
                 transitions, stack_alphabet=(), worktape_alphabet=()) -> MachineSpec:
    """Convenience constructor that normalizes container types."""
    return MachineSpec(
        name=name,
        states=tuple(states),
        initial=initial,
        finals=frozenset(finals),
        input_alphabet=tuple(input_alphabet),
        profile=profile,
        transitions=tuple(transitions),
        stack_alphabet=tuple(stack_alphabet),
        worktape_alphabet=tuple(worktape_alphabet),
    )


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Diagnostic:
    severity: str           # "error" | "warning"
    code: str
    message: str
    transition: Optional[int] = None

    def __str__(self):
        where = f" (trans #{self.transition})" if self.transition is not None else ""
        return f"{self.severity}: {self.code}: {self.message}{where}"


class InvalidMachine(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


def validate_machine(m: MachineSpec) -> list:
    """Structural validation; returns diagnostics (errors and warnings)."""
    diags = []
    err = lambda code, msg, tr=None: diags.append(Diagnostic("error", code, msg, tr))
    warn = lambda code, msg, tr=None: diags.append(Diagnostic("warning", code, msg, tr))
    p = m.profile
    states = set(m.states)
    if m.initial not in states:
        err("undeclared-state", f"initial state {m.initial!r} not declared")
    for f in m.finals:
        if f not in states:
            err("undeclared-state", f"final state {f!r} not declared")
    if len(set(m.input_alphabet)) != len(m.input_alphabet):
        err("alphabet", "input alphabet has duplicate symbols")
    for a in m.input_alphabet:
        if len(a) != 1:
            err("alphabet", f"input symbol {a!r} is not a single character")
    if p.tapes < 1:
        err("profile", "tape count must be >= 1")
    if p.counter_mode == MONOTONIC and p.counters % 2 != 0:
        err("profile", "monotonic mode requires an even counter count")
    if p.counter_mode == REVERSAL and (p.reversal_bound is None or p.reversal_bound < 1):
        err("profile", "reversal-bounded mode requires a bound r >= 1")
    if p.counter_mode == NONE and p.counters != 0:
        err("profile", "counter mode none requires zero counters")
    if p.has_stack() and not m.stack_alphabet:
        err("profile", "stack declared but no stack alphabet given")
    if p.has_worktape() and not m.worktape_alphabet:
        err("profile", "worktape declared but no worktape alphabet given")
    inp = set(m.input_alphabet)

    for i, t in enumerate(m.transitions):
        if t.src not in states:
            err("undeclared-state", f"source {t.src!r} not declared", i)
        if t.dst not in states:
            err("undeclared-state", f"target {t.dst!r} not declared", i)
        if not (1 <= t.tape <= p.tapes):
            err("tape-range", f"tape index {t.tape} out of range 1..{p.tapes}", i)
        if t.read != LAMBDA and t.read not in inp:
            err("undeclared-symbol", f"input symbol {t.read!r} not in alphabet", i)
        kinds = [t.counter is not None, t.top is not None, t.flip, t.wt_read is not None]
        if sum(kinds) > 1:
            err("multi-store", "transition touches more than one store", i)
        if t.counter is not None:
            if p.counters == 0:
                err("counter-range", "counter effect on a counterless machine", i)
            elif not (1 <= t.counter <= p.counters):
                err("counter-range", f"counter index {t.counter} out of range 1..{p.counters}", i)
            if t.delta not in (-1, 0, 1):
                err("counter-delta", f"delta {t.delta} not in -1..1", i)
            if p.counter_mode == BLIND and t.guard is not None:
                err("blind-guard", "status guard on a partially blind counter", i)
            if p.counter_mode == MONOTONIC:
                if t.guard is not None:
                    err("monotonic-guard", "status guard on a monotonic counter", i)
                if t.delta == -1:
                    err("monotonic-delta", "monotonic counters cannot decrement", i)
        if t.top is not None:
            if not p.has_stack():
                err("no-stack", "stack effect on a stackless machine", i)
            else:
                gam = set(m.stack_alphabet)
                if t.top not in gam:
                    err("undeclared-symbol", f"stack symbol {t.top!r} not declared", i)
                bad = [c for c in (t.push or "") if c not in gam]
                if bad:
                    err("undeclared-symbol", f"stack symbols {bad} not declared", i)
                z0 = m.stack_alphabet[0]
                if t.top == z0 and not (t.push or "").startswith(z0):
                    err("z0-pop", "transition pops the bottom marker without re-pushing it", i)
                if z0 in (t.push or "")[1 if t.top == z0 else 0:]:
                    err("z0-push", "bottom marker pushed above the bottom", i)
        if t.flip and p.stack != FLIP:
            err("flip-mode", "flip transition on a non-flip stack", i)
        if t.wt_read is not None:
            if not p.has_worktape():
                err("no-worktape", "worktape effect on a machine without worktape", i)
            else:
                g = set(m.worktape_alphabet)
                if t.wt_read not in g or t.wt_write not in g:
                    err("undeclared-symbol",
                        f"worktape symbols {t.wt_read!r}/{t.wt_write!r} not declared", i)
                if t.wt_move not in (L, R, S):
                    err("wt-move", f"bad worktape move {t.wt_move!r}", i)

    # Warn about lambda cycles that strictly grow a store; the enumeration
    # oracle is exact only on machines without them.
    lam_edges = {}
    growing = []
    for i, t in enumerate(m.transitions):
        if t.read != LAMBDA:
            continue
        lam_edges.setdefault(t.src, []).append(t.dst)
        if (t.counter is not None and t.delta > 0) or \
           (t.top is not None and len(t.push or "") > 1) or \
           (t.wt_read is not None and t.wt_move == R):
            growing.append(i)
    for i in growing:
        t = m.transitions[i]
        if _lambda_reaches(lam_edges, t.dst, t.src):
            warn("lambda-pump", "store-growing transition on a lambda cycle; "
                 "budgeted search may be inexact", i)
    return diags


def _lambda_reaches(lam_edges, src, dst) -> bool:
    seen, stack = {src}, [src]
    while stack:
        q = stack.pop()
        if q == dst:
            return True
        for nxt in lam_edges.get(q, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def validate_or_raise(m: MachineSpec) -> MachineSpec:
    errors = [d for d in validate_machine(m) if d.severity == "error"]
    if errors:
        raise InvalidMachine(errors)
    return m


# ---------------------------------------------------------------------------
# Small-step semantics


def _initial(m: MachineSpec, io: tuple) -> Configuration:
    p = m.profile
    k = p.counters
    rev = p.counter_mode == REVERSAL
    return Configuration(
        state=m.initial,
        io=io,
        counters=(0,) * k,
        cdirs=(0,) * k if rev else (),
        crevs=(0,) * k if rev else (),
        stack=m.z0 if p.has_stack() else None,
        flips=0,
        wt=(m.blank, 0, 0, "") if p.has_worktape() else None,
    )


def _apply_effect(m: MachineSpec, cfg: Configuration, tr: Transition):
    """Store effect of `tr`; returns the five store fields or raises."""
    counters, cdirs, crevs = cfg.counters, cfg.cdirs, cfg.crevs
    stack, flips, wt = cfg.stack, cfg.flips, cfg.wt
    p = m.profile

    if tr.counter is not None:
        j = tr.counter - 1
        v = counters[j]
        if tr.guard is not None:
            if tr.guard == 0 and v != 0:
                raise NotEnabled("guard-false", f"counter {tr.counter} is {v}, guard wants 0")
            if tr.guard == 1 and v == 0:
                raise NotEnabled("guard-false", f"counter {tr.counter} is 0, guard wants >0")
        nv = v + tr.delta
        if nv < 0:
            raise NotEnabled("counter-underflow", f"counter {tr.counter}")
        counters = counters[:j] + (nv,) + counters[j + 1:]
        if p.counter_mode == REVERSAL and tr.delta != 0:
            d = 1 if tr.delta > 0 else -1
            if cdirs[j] != 0 and d != cdirs[j]:
                nr = crevs[j] + 1
                if nr > (p.reversal_bound or 0):
                    raise NotEnabled("reversal-budget", f"counter {tr.counter}")
                crevs = crevs[:j] + (nr,) + crevs[j + 1:]
            cdirs = cdirs[:j] + (d,) + cdirs[j + 1:]
    elif tr.top is not None:
        if not stack or stack[-1] != tr.top:
            raise NotEnabled("stack-top", f"top is {(stack or '')[-1:]!r}, wants {tr.top!r}")
        stack = stack[:-1] + (tr.push or "")
    elif tr.flip:
        if flips + 1 > p.max_flips:
            raise NotEnabled("flip-budget")
        stack = stack[0] + stack[:0:-1]
        flips += 1
    elif tr.wt_read is not None:
        content, head, turns, last = wt
        if content[head] != tr.wt_read:
            raise NotEnabled("wt-read",
                             f"cell {head} holds {content[head]!r}, wants {tr.wt_read!r}")
        content = content[:head] + tr.wt_write + content[head + 1:]
        mv = tr.wt_move
        if mv == L:
            if head == 0:
                raise NotEnabled("wt-edge", "cannot move left of the first cell")
            head -= 1
        elif mv == R:
            head += 1
            if head == len(content):
                content += m.blank
        if mv != S:
            if last and mv != last:
                if turns + 1 > p.max_turns:
                    raise NotEnabled("turn-budget")
                turns += 1
            last = mv
        keep = max(head + 1, len(content.rstrip(m.blank)))
        content = content[:keep]
        wt = (content, head, turns, last)

    return counters, cdirs, crevs, stack, flips, wt


def step(m: MachineSpec, cfg: Configuration, tr: Transition) -> Configuration:
    """Apply `tr` to `cfg` (checking mode: io = remaining input).

    Raises NotEnabled with a distinct code when the transition cannot fire.
    """
    if tr.src != cfg.state:
        raise NotEnabled("state-mismatch", f"{tr.src} != {cfg.state}")
    io = cfg.io
    if tr.read:
        w = io[tr.tape - 1]
        if not w.startswith(tr.read):
            raise NotEnabled("input-mismatch",
                             f"tape {tr.tape} has {w[:1]!r}, wants {tr.read!r}")
        io = io[: tr.tape - 1] + (w[len(tr.read):],) + io[tr.tape:]
    counters, cdirs, crevs, stack, flips, wt = _apply_effect(m, cfg, tr)
    return Configuration(tr.dst, io, counters, cdirs, crevs, stack, flips, wt)


def accepting(m: MachineSpec, cfg: Configuration, generating: bool = False) -> bool:
    """Acceptance: final state, input consumed, counter condition per mode."""
    if cfg.state not in m.finals:
        return False
    if not generating and any(cfg.io):
        return False
    mode = m.profile.counter_mode
    if mode == MONOTONIC:
        c = cfg.counters
        return all(c[i] == c[i + 1] for i in range(0, len(c), 2))
    if mode == BLIND:
        return all(v == 0 for v in cfg.counters)
    return True


def replay(m: MachineSpec, word: Sequence[str], run: Sequence[int]) -> Configuration:
    """Fold `step` over transition indices; raises NotEnabled if invalid."""
    cfg = _initial(m, tuple(word))
    for i in run:
        cfg = step(m, cfg, m.transitions[i])
    return cfg


# ---------------------------------------------------------------------------
# Budgeted search: membership, enumeration, runs


ACCEPTED, REJECTED, BUDGET_EXHAUSTED = "accepted", "rejected", "budget"


@dataclass(frozen=True)
class AcceptResult:
    status: str                       # accepted | rejected | budget
    run: Optional[tuple] = None       # transition indices, replayable

    @property
    def accepted(self):
        return self.status == ACCEPTED


def _grouped(m: MachineSpec):
    by_state = {}
    for i, t in enumerate(m.transitions):
        by_state.setdefault(t.src, []).append((i, t))
    return by_state


def _successors(m, cfg, by_state, budget, generating, cap, overflow):
    out = []
    cs = budget.max_store_size
    for i, t in by_state.get(cfg.state, ()):
        if t.read:
            j = t.tape - 1
            w = cfg.io[j]
            if generating:
                if sum(map(len, cfg.io)) >= cap:
                    continue    # outside the enumeration bound, not a budget event
                nio = cfg.io[:j] + (w + t.read,) + cfg.io[j + 1:]
            else:
                if not w.startswith(t.read):
                    continue
                nio = cfg.io[:j] + (w[len(t.read):],) + cfg.io[j + 1:]
        else:
            nio = cfg.io
        try:
            counters, cdirs, crevs, stack, flips, wt = _apply_effect(m, cfg, t)
        except NotEnabled:
            continue
        if stack is not None and len(stack) > cs:
            overflow[0] = True
            continue
        if counters and max(counters) > cs:
            overflow[0] = True
            continue
        if wt is not None and len(wt[0]) > cs:
            overflow[0] = True
            continue
        out.append((i, Configuration(t.dst, nio, counters, cdirs, crevs, stack, flips, wt)))
    return out


def _bfs(m, start, budget, generating, cap, on_accept):
    """Shared breadth-first engine; returns (parents, complete)."""
    by_state = _grouped(m)
    overflow = [False]
    parents = {start: None}
    frontier = deque([start])
    if accepting(m, start, generating=generating):
        on_accept(start, parents)
    depth = 0
    while frontier:
        depth += 1
        if depth > budget.max_run_length:
            overflow[0] = True
            break
        nxt_frontier = deque()
        stop = False
        while frontier:
            cfg = frontier.popleft()
            for i, nxt in _successors(m, cfg, by_state, budget, generating, cap, overflow):
                if nxt in parents:
                    continue
                parents[nxt] = (cfg, i)
                if len(parents) > budget.max_configurations:
                    overflow[0] = True
                    stop = True
                    break
                if accepting(m, nxt, generating=generating):
                    if on_accept(nxt, parents):
                        return parents, not overflow[0]
                nxt_frontier.append(nxt)
            if stop:
                break
        if stop:
            break
        frontier = nxt_frontier
    return parents, not overflow[0]


def _run_of(cfg, parents):
    run = []
    cur = cfg
    while parents[cur] is not None:
        cur, idx = parents[cur]
        run.append(idx)
    return tuple(reversed(run))


def accepts(m: MachineSpec, word: Sequence[str], budget: Budget = DEFAULT_BUDGET) -> AcceptResult:
    """Budgeted breadth-first membership; returns a replayable run."""
    word = tuple(word)
    if len(word) != m.profile.tapes:
        raise ValueError(f"input arity {len(word)} != tape count {m.profile.tapes}")
    hit = []

    def on_accept(cfg, parents):
        hit.append(_run_of(cfg, parents))
        return True

    _, complete = _bfs(m, _initial(m, word), budget, False, 0, on_accept)
    if hit:
        return AcceptResult(ACCEPTED, hit[0])
    return AcceptResult(REJECTED if complete else BUDGET_EXHAUSTED, None)


def tuple_key(word: tuple):
    return (sum(map(len, word)), TAPE_SEP.join(word))


def enumerate_language(m: MachineSpec, max_total_length: int,
                       budget: Budget = DEFAULT_BUDGET):
    """All accepted tuple words of total length <= bound, length-lex sorted.

    Returns (words, complete); complete is False iff a budget cap pruned the
    search, in which case the result is an under-approximation.
    """
    found = set()

    def on_accept(cfg, parents):
        found.add(cfg.io)
        return False

    _, complete = _bfs(m, _initial(m, ("",) * m.profile.tapes), budget, True,
                       max_total_length, on_accept)
    return sorted(found, key=tuple_key), complete


def enumerate_runs(m: MachineSpec, max_total_length: int,
                   budget: Budget = DEFAULT_BUDGET):
    """Accepting (word, run) pairs, one run per accepting configuration."""
    out = []

    def on_accept(cfg, parents):
        out.append((cfg.io, _run_of(cfg, parents)))
        return False

    _, complete = _bfs(m, _initial(m, ("",) * m.profile.tapes), budget, True,
                       max_total_length, on_accept)
    return out, complete


def reachable_run_graph(m: MachineSpec, max_total_length: int,
                        budget: Budget = DEFAULT_BUDGET):
    """Forward configuration graph in generating mode plus the subset of
    nodes that lie on some accepting run (co-acceptable within the graph).

    Returns (nodes, edges, on_accepting_run, complete)."""
    start = _initial(m, ("",) * m.profile.tapes)
    by_state = _grouped(m)
    overflow = [False]
    seen = {start}
    edges = []
    accept_nodes = []
    frontier = deque([start])
    if accepting(m, start, generating=True):
        accept_nodes.append(start)
    depth = 0
    while frontier:
        depth += 1
        if depth > budget.max_run_length:
            overflow[0] = True
            break
        nxt_frontier = deque()
        while frontier:
            cfg = frontier.popleft()
            for i, nxt in _successors(m, cfg, by_state, budget, True,
                                      max_total_length, overflow):
                edges.append((cfg, nxt))
                if nxt in seen:
                    continue
                seen.add(nxt)
                if len(seen) > budget.max_configurations:
                    overflow[0] = True
                    frontier.clear()
                    nxt_frontier.clear()
                    break
                if accepting(m, nxt, generating=True):
                    accept_nodes.append(nxt)
                nxt_frontier.append(nxt)
        frontier = nxt_frontier
    back = {}
    for a, b in edges:
        back.setdefault(b, []).append(a)
    good = set(accept_nodes)
    todo = list(accept_nodes)
    while todo:
        cur = todo.pop()
        for prv in back.get(cur, ()):
            if prv not in good:
                good.add(prv)
                todo.append(prv)
    return seen, edges, good, not overflow[0]


def language_equal(a: MachineSpec, b: MachineSpec, max_len: int,
                   budget: Budget = DEFAULT_BUDGET,
                   flatten_a=None, flatten_b=None):
    """Compare enumerations (optionally flattened); both must be complete."""
    wa, ca = enumerate_language(a, max_len, budget)
    wb, cb = enumerate_language(b, max_len, budget)
    fa = {flatten_a(w) for w in wa} if flatten_a else set(wa)
    fb = {flatten_b(w) for w in wb} if flatten_b else set(wb)
    return fa == fb and ca and cb, fa, fb, ca, cb


# ---------------------------------------------------------------------------
# Counter-mode conversion (monotonic <-> reversal-bounded)


def convert_counter_mode(m: MachineSpec, target: str) -> MachineSpec:
    """Switch between monotonic pairs and reversal-bounded counters.

    monotonic -> reversal(1): keep all counters, append a final drain phase
    that empties each C/D pair in lockstep and checks both hit zero together.
    reversal -> monotonic: normalize to one reversal, then split each counter
    into an increment counter C and a decrement counter D with a guessed zero
    point; the final C = D check validates the guess.
    """
    p = m.profile
    if p.counters == 0:
        return m
    src = p.counter_mode
    if (src, target) == (MONOTONIC, REVERSAL):
        return _mono_to_reversal(m)
    if (src, target) == (REVERSAL, MONOTONIC):
        m1 = m if p.reversal_bound == 1 else _reduce_reversals(m)
        return _reversal1_to_mono(_append_counter_drain(m1))
    raise ValueError(f"unsupported counter mode conversion {src} -> {target}")


def _append_counter_drain(m: MachineSpec) -> MachineSpec:
    """Make every accepting run end with all counters zero (legal for
    1-reversal machines: draining adds at most the first reversal)."""
    k = m.profile.counters
    states = list(m.states) + [f"zero{j}" for j in range(k + 1)]
    trans = list(m.transitions)
    for f in sorted(m.finals):
        trans.append(Transition(f, "zero0"))
    for j in range(k):
        trans.append(Transition(f"zero{j}", f"zero{j}", counter=j + 1, guard=1, delta=-1))
        trans.append(Transition(f"zero{j}", f"zero{j+1}", counter=j + 1, guard=0, delta=0))
    return make_machine(m.name + "+z", states, m.initial, [f"zero{k}"],
                        m.input_alphabet, m.profile, trans,
                        m.stack_alphabet, m.worktape_alphabet)


def _mono_to_reversal(m: MachineSpec) -> MachineSpec:
    p = m.profile
    k = p.counters
    states = list(m.states)
    trans = list(m.transitions)
    for i in range(k // 2 + 1):
        states.append(f"drain{i}")
    for i in range(k // 2):
        states += [f"drain{i}~", f"drain{i}!"]
    for f in sorted(m.finals):
        trans.append(Transition(f, "drain0"))
    for i in range(k // 2):
        c, d = 2 * i + 1, 2 * i + 2
        here, half, chk, nxt = f"drain{i}", f"drain{i}~", f"drain{i}!", f"drain{i+1}"
        trans.append(Transition(here, half, counter=c, guard=1, delta=-1))
        trans.append(Transition(half, here, counter=d, guard=1, delta=-1))
        trans.append(Transition(here, chk, counter=c, guard=0, delta=0))
        trans.append(Transition(chk, nxt, counter=d, guard=0, delta=0))
    return make_machine(
        m.name + "+rb", states, m.initial, [f"drain{k // 2}"], m.input_alphabet,
        replace(p, counter_mode=REVERSAL, reversal_bound=1),
        trans, m.stack_alphabet, m.worktape_alphabet,
    )


def _reduce_reversals(m: MachineSpec) -> MachineSpec:
    """r-reversal counters -> 1-reversal: one counter per up/down phase pair,
    with a lambda copy loop carrying the value across odd->even switches."""
    p = m.profile
    r = p.reversal_bound or 1
    k = p.counters
    banks = (r + 2) // 2                    # phase pair count

    def bank(j, ph):
        return (j - 1) * banks + ph // 2 + 1

    def name(q, phases, copy=None, half=False):
        s = f"{q}|{'.'.join(map(str, phases))}"
        if copy:
            s += f"|cp{copy[0]}.{copy[1]}{'~' if half else ''}"
        return s

    start = (m.initial, (0,) * k)
    seen = {start}
    trans, states = [], set()
    todo = [start]
    while todo:
        q, phases = todo.pop()
        states.add(name(q, phases))
        # spontaneous odd->even phase switch with value transfer
        for j in range(1, k + 1):
            ph = phases[j - 1]
            if ph % 2 == 1 and ph + 1 <= r:
                nph = phases[:j - 1] + (ph + 1,) + phases[j:]
                cp, cph = name(q, phases, (j, ph)), name(q, phases, (j, ph), True)
                states.update([cp, cph])
                trans.append(Transition(name(q, phases), cp))
                trans.append(Transition(cp, cph, counter=bank(j, ph), guard=1, delta=-1))
                trans.append(Transition(cph, cp, counter=bank(j, ph + 1), delta=1))
                trans.append(Transition(cp, name(q, nph), counter=bank(j, ph), guard=0, delta=0))
                if (q, nph) not in seen:
                    seen.add((q, nph))
                    todo.append((q, nph))
        for t in m.transitions:
            if t.src != q:
                continue
            if t.counter is None:
                tgt = (t.dst, phases)
                trans.append(replace(t, src=name(q, phases), dst=name(*tgt)))
            else:
                j = t.counter
                ph = phases[j - 1]
                if t.delta == -1 and ph % 2 == 0:
                    if ph + 1 > r:
                        continue            # reversal budget exhausted
                    nph = phases[:j - 1] + (ph + 1,) + phases[j:]
                elif t.delta == 1 and ph % 2 == 1:
                    continue                # reached via the copy switch above
                else:
                    nph = phases
                tgt = (t.dst, nph)
                trans.append(replace(t, src=name(q, phases), dst=name(*tgt),
                                     counter=bank(j, nph[j - 1])))
            if tgt not in seen:
                seen.add(tgt)
                todo.append(tgt)
    finals = [name(q, ph) for (q, ph) in seen if q in m.finals]
    return make_machine(
        m.name + "+rb1", sorted(states), name(*start), finals, m.input_alphabet,
        replace(p, counters=k * banks, reversal_bound=1),
        trans, m.stack_alphabet, m.worktape_alphabet,
    )


def _reversal1_to_mono(m: MachineSpec) -> MachineSpec:
    """1-reversal counters -> monotonic C/D pairs with a guessed zero point.

    Counter j maps to the pair (2j-1, 2j); a state flag per counter answers
    the status guard: 0 = still zero, 1 = positive, 2 = committed to zero.
    """
    p = m.profile
    k = p.counters

    def name(q, flags):
        return f"{q}|{''.join(map(str, flags))}"

    start = (m.initial, (0,) * k)
    seen = {start}
    trans = []
    todo = [start]
    while todo:
        q, flags = todo.pop()
        for t in m.transitions:
            if t.src != q:
                continue
            if t.counter is None:
                moves = [(replace(t), flags, None, 0)]
            else:
                j = t.counter - 1
                fl = flags[j]
                status = 1 if fl == 1 else 0
                if t.guard is not None and t.guard != status:
                    continue
                if t.delta == 1:
                    if fl == 2:
                        continue
                    moves = [(t, flags[:j] + (1,) + flags[j + 1:], 2 * j + 1, 1)]
                elif t.delta == -1:
                    if fl != 1:
                        continue
                    moves = [(t, flags, 2 * j + 2, 1),
                             (t, flags[:j] + (2,) + flags[j + 1:], 2 * j + 2, 1)]
                else:
                    moves = [(t, flags, None, 0)]
            for base, nf, ctr, delta in moves:
                tgt = (base.dst, nf)
                trans.append(replace(base, src=name(q, flags), dst=name(*tgt),
                                     counter=ctr, guard=None, delta=delta))
                if tgt not in seen:
                    seen.add(tgt)
                    todo.append(tgt)
    finals = [name(q, fl) for (q, fl) in seen if q in m.finals]
    return make_machine(
        m.name + "+mono", sorted(name(*s) for s in seen), name(*start), finals,
        m.input_alphabet,
        replace(p, counter_mode=MONOTONIC, counters=2 * k, reversal_bound=None),
        trans, m.stack_alphabet, m.worktape_alphabet,
    )


# ---------------------------------------------------------------------------
# Fresh single-character symbols (file formats use one character per symbol)

_POOLS = [range(0x61, 0x7b), range(0x41, 0x5b), range(0x30, 0x3a),
          range(0x3b1, 0x3ca), range(0x391, 0x3aa), range(0x430, 0x450),
          range(0x100, 0x250), range(0x4e00, 0x9fff)]
_RESERVED = set("%-_/=,.:⊢|#$<>[]{}() \t\n")


def fresh_symbols(used: Iterable[str]):
    """Yield unused single-character symbols, deterministically."""
    taken = set(used) | _RESERVED
    for pool in _POOLS:
        for cp in pool:
            c = chr(cp)
            if c not in taken:
                taken.add(c)
                yield c
