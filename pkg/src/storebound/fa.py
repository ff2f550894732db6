"""Small finite-automaton toolkit over single-character alphabets.

NFAs with epsilon moves, determinization, boolean operations, reversal,
emptiness, shortest words, and bounded enumeration.  Used to represent
stack-set automata, store languages, and the regular side of the deciders.
"""

from __future__ import annotations

from collections import deque
from itertools import count


class NFA:
    def __init__(self, alphabet=(), initials=(), finals=(), transitions=()):
        self.alphabet = set(alphabet)
        self.initials = set(initials)
        self.finals = set(finals)
        self.trans = {}
        self.states = set(self.initials) | set(self.finals)
        for q, a, r in transitions:
            self.add(q, a, r)

    def add(self, q, a, r):
        if a:
            self.alphabet.add(a)
        self.states.update((q, r))
        self.trans.setdefault((q, a), set()).add(r)

    def add_state(self, q):
        self.states.add(q)

    def moves(self, q, a):
        return self.trans.get((q, a), set())

    def eps_closure(self, qs):
        out = set(qs)
        todo = list(qs)
        while todo:
            q = todo.pop()
            for r in self.moves(q, ""):
                if r not in out:
                    out.add(r)
                    todo.append(r)
        return out

    def step_set(self, qs, a):
        nxt = set()
        for q in qs:
            nxt |= self.moves(q, a)
        return self.eps_closure(nxt)

    def accepts(self, word) -> bool:
        cur = self.eps_closure(self.initials)
        for a in word:
            cur = self.step_set(cur, a)
            if not cur:
                return False
        return bool(cur & self.finals)

    # -- structure ---------------------------------------------------------

    def edges(self):
        for (q, a), rs in self.trans.items():
            for r in rs:
                yield q, a, r

    def trim(self) -> "NFA":
        fwd = {}
        bwd = {}
        for q, a, r in self.edges():
            fwd.setdefault(q, set()).add(r)
            bwd.setdefault(r, set()).add(q)
        reach = _closure(self.initials, fwd)
        co = _closure(self.finals, bwd)
        keep = reach & co
        out = NFA(self.alphabet, self.initials & keep, self.finals & keep)
        out.states |= keep
        for q, a, r in self.edges():
            if q in keep and r in keep:
                out.add(q, a, r)
        return out

    def is_empty(self) -> bool:
        return not (self.trim().finals)

    def reverse(self) -> "NFA":
        out = NFA(self.alphabet, self.finals, self.initials)
        out.states |= self.states
        for q, a, r in self.edges():
            out.add(r, a, q)
        return out

    def relabel(self) -> "NFA":
        names = {}
        c = count()
        fresh = lambda q: names.setdefault(q, f"s{next(c)}")
        for q in sorted(self.states, key=repr):
            fresh(q)
        out = NFA(self.alphabet, {fresh(q) for q in self.initials},
                  {fresh(q) for q in self.finals})
        out.states |= {fresh(q) for q in self.states}
        for q, a, r in self.edges():
            out.add(fresh(q), a, fresh(r))
        return out

    # -- determinization and boolean operations ----------------------------

    def determinize(self, alphabet=None) -> "DFA":
        sigma = sorted(alphabet if alphabet is not None else self.alphabet)
        start = frozenset(self.eps_closure(self.initials))
        table = {}
        finals = set()
        todo = deque([start])
        seen = {start}
        while todo:
            cur = todo.popleft()
            if cur & self.finals:
                finals.add(cur)
            for a in sigma:
                nxt = frozenset(self.step_set(cur, a))
                table[(cur, a)] = nxt
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        return DFA(sigma, start, finals, table, seen)

    def complement(self, alphabet=None) -> "NFA":
        return self.determinize(alphabet).complement().as_nfa()

    def intersect(self, other: "NFA") -> "NFA":
        a = self.determinize(self.alphabet | other.alphabet)
        b = other.determinize(self.alphabet | other.alphabet)
        return _dfa_product(a, b, lambda x, y: x and y).as_nfa()

    def union(self, other: "NFA") -> "NFA":
        out = NFA(self.alphabet | other.alphabet)
        for tag, m in (("A", self), ("B", other)):
            for q, a, r in m.edges():
                out.add((tag, q), a, (tag, r))
            out.states |= {(tag, q) for q in m.states}
            out.initials |= {(tag, q) for q in m.initials}
            out.finals |= {(tag, q) for q in m.finals}
        return out

    def difference(self, other: "NFA") -> "NFA":
        sigma = self.alphabet | other.alphabet
        a = self.determinize(sigma)
        b = other.determinize(sigma)
        return _dfa_product(a, b, lambda x, y: x and not y).as_nfa()

    def is_subset(self, other: "NFA") -> bool:
        return self.difference(other).is_empty()

    def equivalent(self, other: "NFA") -> bool:
        return self.is_subset(other) and other.is_subset(self)

    # -- words -------------------------------------------------------------

    def shortest_word(self):
        """A shortest accepted word, or None."""
        start = frozenset(self.eps_closure(self.initials))
        if start & self.finals:
            return ""
        seen = {start}
        todo = deque([(start, "")])
        sigma = sorted(self.alphabet)
        while todo:
            cur, w = todo.popleft()
            for a in sigma:
                nxt = frozenset(self.step_set(cur, a))
                if not nxt or nxt in seen:
                    continue
                if nxt & self.finals:
                    return w + a
                seen.add(nxt)
                todo.append((nxt, w + a))
        return None

    def enumerate(self, max_len: int):
        """All accepted words of length <= max_len, length-lex sorted."""
        out = []
        sigma = sorted(self.alphabet)
        start = self.eps_closure(self.initials)
        todo = deque([(start, "")])
        while todo:
            cur, w = todo.popleft()
            if cur & self.finals:
                out.append(w)
            if len(w) == max_len:
                continue
            for a in sigma:
                nxt = self.step_set(cur, a)
                if nxt:
                    todo.append((nxt, w + a))
        return sorted(out, key=lambda w: (len(w), w))

    def has_nonempty_cycle(self) -> bool:
        """True iff the trimmed automaton has a cycle reading >= 1 symbol."""
        t = self.trim()
        # SCC via Tarjan on the full edge set; a component is pumping if it
        # contains any edge, at least one of which is non-epsilon, or any
        # non-epsilon self-loop.
        comp = strongly_connected(t.states, list(t.edges()))
        bycomp = {}
        for q, a, r in t.edges():
            if comp.get(q) == comp.get(r):
                bycomp.setdefault(comp[q], []).append(a)
        return any(any(a for a in labels) for labels in bycomp.values())

    def is_infinite(self) -> bool:
        return self.has_nonempty_cycle()


class DFA:
    """Complete DFA produced by determinization (frozenset states)."""

    def __init__(self, sigma, start, finals, table, states):
        self.sigma = list(sigma)
        self.start = start
        self.finals = set(finals)
        self.table = table
        self.states = set(states)

    def complement(self) -> "DFA":
        return DFA(self.sigma, self.start,
                   self.states - self.finals, self.table, self.states)

    def as_nfa(self) -> NFA:
        out = NFA(self.sigma, [self.start], self.finals)
        out.states |= self.states
        for (q, a), r in self.table.items():
            out.add(q, a, r)
        return out


def _dfa_product(a: DFA, b: DFA, want) -> DFA:
    sigma = a.sigma
    start = (a.start, b.start)
    table = {}
    states = {start}
    finals = set()
    todo = deque([start])
    while todo:
        qa, qb = todo.popleft()
        if want(qa in a.finals, qb in b.finals):
            finals.add((qa, qb))
        for s in sigma:
            nxt = (a.table[(qa, s)], b.table.get((qb, s), b.table.get((qb, s))))
            if nxt[1] is None:
                continue
            table[((qa, qb), s)] = nxt
            if nxt not in states:
                states.add(nxt)
                todo.append(nxt)
    return DFA(sigma, start, finals, table, states)


def _closure(seed, adj):
    out = set(seed)
    todo = list(seed)
    while todo:
        q = todo.pop()
        for r in adj.get(q, ()):
            if r not in out:
                out.add(r)
                todo.append(r)
    return out


def strongly_connected(states, edges):
    """Iterative Tarjan; returns state -> component id."""
    adj = {}
    for q, _a, r in edges:
        adj.setdefault(q, []).append(r)
    index = {}
    low = {}
    onstack = {}
    comp = {}
    stack = []
    counter = count()
    cid = count()
    for root in states:
        if root in index:
            continue
        work = [(root, iter(adj.get(root, ())))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        onstack[root] = True
        while work:
            q, it = work[-1]
            advanced = False
            for r in it:
                if r not in index:
                    index[r] = low[r] = next(counter)
                    stack.append(r)
                    onstack[r] = True
                    work.append((r, iter(adj.get(r, ()))))
                    advanced = True
                    break
                elif onstack.get(r):
                    low[q] = min(low[q], index[r])
            if advanced:
                continue
            work.pop()
            if work:
                pq = work[-1][0]
                low[pq] = min(low[pq], low[q])
            if low[q] == index[q]:
                c = next(cid)
                while True:
                    r = stack.pop()
                    onstack[r] = False
                    comp[r] = c
                    if r == q:
                        break
    return comp


def word_star_dfa(word: str, alphabet) -> NFA:
    """DFA (as NFA) for word*, complete over `alphabet`."""
    out = NFA(alphabet, ["c0"], ["c0"])
    n = len(word)
    for i in range(n):
        for a in sorted(set(alphabet)):
            tgt = f"c{(i + 1) % n}" if a == word[i] else "dead"
            out.add(f"c{i}", a, tgt)
    for a in sorted(set(alphabet)):
        out.add("dead", a, "dead")
    return out


def primitive_root(w: str) -> str:
    """Shortest p with w in p+ (the empty word for the empty word)."""
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w == w[:d] * (n // d):
            return w[:d]
    return w


def commute(u: str, v: str) -> bool:
    return u + v == v + u


def from_machine(m) -> NFA:
    """View a 1-tape storeless MachineSpec as an NFA."""
    p = m.profile
    if p.tapes != 1 or p.counters or p.has_stack() or p.has_worktape():
        raise ValueError("machine has stores; not a plain NFA")
    out = NFA(m.input_alphabet, [m.initial], m.finals)
    out.states |= set(m.states)
    for t in m.transitions:
        out.add(t.src, t.read, t.dst)
    return out


def to_machine(nfa: NFA, name: str):
    """Export an NFA as a 1-tape storeless MachineSpec."""
    from .machine import StoreProfile, Transition, make_machine

    n = nfa.relabel()
    # single initial state
    if len(n.initials) != 1:
        init = "s_init"
        for q in sorted(n.initials):
            n.add(init, "", q)
        n.initials = {init}
    init = next(iter(n.initials))
    trans = [Transition(q, r, read=a) for q, a, r in sorted(n.edges())]
    return make_machine(name, sorted(n.states, key=str), init, sorted(n.finals, key=str),
                        sorted(n.alphabet), StoreProfile(tapes=1), trans)
