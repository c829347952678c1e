"""Sum-product decoding on normal graphs.

Exact two-pass decoding on cycle-free realizations (provably the
a-posteriori marginals), iterative decoding with flooding or serial
schedules on cyclic ones.  Cycle-free leaf fragments hanging off the 2-core
are pre-solved once and their boundary messages held constant.  Two
arithmetic modes: exact rationals and floats with per-message
normalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .alphabets import Alphabet, Element, sort_key
from .errors import MissingIncoming, NotCycleFree, TooLargeToEnumerate
from .graphcore import cyclomatic_number, two_core_constraints
from .realization import Realization
from .subgroups import CodeSubgroup, QuotientMap


@dataclass(frozen=True)
class Message:
    """Nonnegative weights indexed by the canonical alphabet enumeration."""

    alphabet: Alphabet
    weights: tuple

    def __post_init__(self):
        if len(self.weights) != self.alphabet.order:
            raise ValueError("weight vector length must equal the alphabet order")
        if any(w < 0 for w in self.weights):
            raise ValueError("message weights must be nonnegative")

    @property
    def total(self):
        return sum(self.weights)

    @property
    def is_zero(self) -> bool:
        return all(w == 0 for w in self.weights)

    def normalized(self) -> "Message":
        t = self.total
        if t == 0:
            return self
        return Message(self.alphabet, tuple(w / t for w in self.weights))

    def weight_of(self, value: Element):
        return self.weights[self.alphabet.index(value)]


def uniform_message(alpha: Alphabet, exact: bool = True) -> Message:
    one = Fraction(1) if exact else 1.0
    return Message(alpha, (one,) * alpha.order)


def indicator_message(alpha: Alphabet, value: Element, exact: bool = True) -> Message:
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    w = [zero] * alpha.order
    w[alpha.index(value)] = one
    return Message(alpha, tuple(w))


PriorSet = dict[str, Message]


def full_priors(r: Realization, priors: Mapping[str, Message] | None,
                exact: bool = True) -> PriorSet:
    """Priors for every symbol; unspecified symbols get uniform weights."""
    out: PriorSet = {}
    for k, alpha in r.symbols.items():
        if priors is not None and k in priors:
            m = priors[k]
            if m.alphabet.order != alpha.order:
                raise ValueError(f"prior for {k!r} has wrong length")
            out[k] = m
        else:
            out[k] = uniform_message(alpha, exact)
    return out


def sp_update(code: CodeSubgroup, incoming: Mapping, target, exact: bool = True,
              cap: int = 2**20) -> Message:
    """Sum-product update: out(v) = sum over codewords matching v of the
    product of incoming weights at the other coordinates."""
    amb = code.ambient
    target_alpha = amb.alphabet(target)
    others = [lab for lab in amb.labels if lab != target]
    for lab in others:
        if lab not in incoming:
            raise MissingIncoming(f"no incoming message for {lab!r}")
    zero = Fraction(0) if exact else 0.0
    out = [zero] * target_alpha.order
    if code.order > cap:
        raise TooLargeToEnumerate("constraint code too large for sum-product")
    for word in code.cached_elements(cap):
        w = Fraction(1) if exact else 1.0
        for lab in others:
            msg = incoming[lab]
            w *= msg.weights[msg.alphabet.index(amb.get(word, lab))]
            if w == 0:
                break
        if w == 0:
            continue
        out[target_alpha.index(amb.get(word, target))] += w
    return Message(target_alpha, tuple(out))


@dataclass
class DecodeResult:
    symbol_marginals: dict[str, Message]
    state_marginals: dict[str, Message]
    contradiction: bool


@dataclass
class ConvergenceReport:
    iterations: int
    deltas: list[float]
    converged: bool
    contradiction: bool


class _Passer:
    """Message-passing engine over one realization."""

    def __init__(self, r: Realization, priors: PriorSet, exact: bool):
        r.require_valid()
        self.r = r
        self.priors = priors
        self.exact = exact
        self.edges = [j for j in r.internal_states() if len(r.slots[j]) == 2]
        for j in self.edges:
            (tc, _), (hc, _) = r.slots[j]
            if tc == hc:
                raise NotCycleFree(
                    f"self-loop edge {j!r}: decode does not support self-loops")
        # (constraint, edge) -> outgoing message in that constraint's own
        # slot coordinates
        self.msgs: dict[tuple[str, str], Message] = {}

    def other_end(self, cl: str, j: str) -> tuple[str, int]:
        ends = self.r.slots[j]
        return ends[1] if ends[0][0] == cl else ends[0]

    def cross_edge(self, msg: Message, j: str, from_tail: bool) -> Message:
        """Transport a message across edge j between its two end coordinates."""
        iso = self.r.states[j].iso
        if iso is None:
            return msg
        phi = iso if from_tail else iso.inverse()
        w = [None] * msg.alphabet.order
        for v in msg.alphabet.elements():
            w[msg.alphabet.index(phi.apply(v))] = msg.weights[msg.alphabet.index(v)]
        return Message(msg.alphabet, tuple(w))

    def incoming_at(self, cl: str, skip_slot: int | None) -> dict:
        """Messages for every slot of cl except skip_slot, keyed by slot label."""
        con = self.r.constraints[cl]
        amb = con.code.ambient
        inc = {}
        for i, v in enumerate(con.vars):
            if i == skip_slot:
                continue
            lab = amb.labels[i]
            if v in self.r.symbols:
                inc[lab] = self.priors[v]
            elif v in set(self.r.boundary):
                # fragments decode with flat evidence on their half-edges
                inc[lab] = uniform_message(self.r.states[v].alphabet, self.exact)
            else:
                oc, _ = self.other_end(cl, v)
                m = self.msgs[(oc, v)]
                produced_at_tail = self._end_is_tail(oc, v)
                consumed_at_tail = self._end_is_tail(cl, v)
                if produced_at_tail and not consumed_at_tail:
                    m = self.cross_edge(m, v, from_tail=True)
                elif not produced_at_tail and consumed_at_tail:
                    m = self.cross_edge(m, v, from_tail=False)
                inc[lab] = m
        return inc

    def _end_is_tail(self, cl: str, j: str) -> bool:
        """Whether constraint cl holds the tail end of edge j."""
        return self.r.slots[j][0][0] == cl

    def compute(self, cl: str, j: str) -> Message:
        """Outgoing message from cl across edge j, from current self.msgs."""
        con = self.r.constraints[cl]
        slot = con.vars.index(j)
        inc = self.incoming_at(cl, slot)
        out = sp_update(con.code, inc, con.code.ambient.labels[slot], self.exact)
        return out if self.exact else out.normalized()

    def tree_message(self, cl: str, j: str) -> Message:
        """Recursive exact message on a tree region (memoized)."""
        key = (cl, j)
        if key in self.msgs:
            return self.msgs[key]
        con = self.r.constraints[cl]
        for v in con.vars:
            if v in self.r.symbols or v == j:
                continue
            oc, _ = self.other_end(cl, v)
            self.tree_message(oc, v)
        m = self.compute(cl, j)
        self.msgs[key] = m
        return m

    def symbol_marginal(self, k: str) -> Message:
        (cl, slot), = self.r.slots[k]
        con = self.r.constraints[cl]
        inc = self.incoming_at(cl, slot)
        m = sp_update(con.code, inc, con.code.ambient.labels[slot], self.exact)
        w = tuple(a * b for a, b in zip(m.weights, self.priors[k].weights))
        return Message(m.alphabet, w).normalized()

    def state_marginal(self, j: str) -> Message:
        (tc, _), (hc, _) = self.r.slots[j]
        m_tail = self.msgs[(tc, j)]                       # tail coordinates
        m_head = self.cross_edge(self.msgs[(hc, j)], j, from_tail=False)
        w = tuple(a * b for a, b in zip(m_tail.weights, m_head.weights))
        return Message(m_tail.alphabet, w).normalized()

    def result(self) -> DecodeResult:
        sym = {k: self.symbol_marginal(k) for k in sorted(self.r.symbols,
                                                          key=sort_key)}
        st = {j: self.state_marginal(j) for j in sorted(self.edges, key=sort_key)}
        contradiction = any(m.is_zero for m in sym.values())
        return DecodeResult(sym, st, contradiction)


def decode_exact(r: Realization, priors: Mapping[str, Message] | None = None,
                 exact: bool = True) -> DecodeResult:
    """Two-pass sum-product on a cycle-free realization: exact marginals."""
    if cyclomatic_number(r) != 0 or not r.is_connected:
        raise NotCycleFree("exact decoding requires a connected cycle-free graph")
    passer = _Passer(r, full_priors(r, priors, exact), exact)
    for j in passer.edges:
        (tc, _), (hc, _) = r.slots[j]
        passer.tree_message(tc, j)
        passer.tree_message(hc, j)
    return passer.result()


def decode_iterative(r: Realization, priors: Mapping[str, Message] | None = None,
                     max_iters: int = 100, schedule: str = "flooding",
                     damping: float = 0.0, tol: float = 1e-8,
                     exact: bool = False) -> tuple[DecodeResult, ConvergenceReport]:
    """Iterative sum-product; leaf fragments are pre-solved exactly once.

    On a cycle-free input this reduces to the exact two-pass schedule.
    Non-convergence is reported, never raised.
    """
    if schedule not in ("flooding", "serial"):
        raise ValueError("schedule must be 'flooding' or 'serial'")
    if not 0 <= damping < 1:
        raise ValueError("damping must lie in [0, 1)")
    if cyclomatic_number(r) == 0 and r.is_connected:
        res = decode_exact(r, priors, exact)
        return res, ConvergenceReport(1, [0.0], True, res.contradiction)

    passer = _Passer(r, full_priors(r, priors, exact), exact)
    core = two_core_constraints(r)
    core_edges = [j for j in passer.edges
                  if all(cl in core for cl, _ in r.slots[j])]
    # messages pointing toward the core through the stripped forest are
    # computed once, exactly
    for j in passer.edges:
        if j in core_edges:
            continue
        (tc, _), (hc, _) = r.slots[j]
        if _points_coreward(r, core, tc, hc):
            outside = hc  # tail side reaches the core; head side is the tree
        else:
            outside = tc
        passer.tree_message(outside, j)
    # iterate on the core
    one = Fraction(1) if exact else 1.0
    for j in core_edges:
        for cl, _ in r.slots[j]:
            passer.msgs[(cl, j)] = Message(
                r.states[j].alphabet, (one,) * r.states[j].alphabet.order)
    deltas: list[float] = []
    converged = False
    directed = sorted(((cl, j) for j in core_edges for cl, _ in r.slots[j]),
                      key=lambda t: (sort_key(t[1]), sort_key(t[0])))
    damp = Fraction(damping) if exact else damping
    iterations = 0
    for _ in range(max_iters):
        iterations += 1
        delta = 0.0
        if schedule == "flooding":
            new = {key: passer.compute(*key) for key in directed}
        for key in directed:
            m = new[key] if schedule == "flooding" else passer.compute(*key)
            old = passer.msgs[key]
            if damping:
                m = Message(m.alphabet, tuple(
                    (1 - damp) * a + damp * b
                    for a, b in zip(m.weights, old.weights)))
            delta = max(delta, _message_delta(old, m))
            passer.msgs[key] = m
        deltas.append(delta)
        if delta < tol:
            converged = True
            break
    # fill outward messages into the stripped forest for final marginals
    for j in passer.edges:
        for cl, _ in r.slots[j]:
            if (cl, j) not in passer.msgs:
                passer.tree_message(cl, j)
    res = passer.result()
    return res, ConvergenceReport(iterations, deltas, converged,
                                  res.contradiction)


def _points_coreward(r: Realization, core: set[str], toward: str, away: str) -> bool:
    """True if `toward` is on the core side of the edge between these two."""
    # walk from `toward` without using `away`: reachable core?
    seen = {away, toward}
    stack = [toward]
    adj = r.neighbors()
    while stack:
        c = stack.pop()
        if c in core:
            return True
        for _, o in adj[c]:
            if o not in seen:
                seen.add(o)
                stack.append(o)
    return False


def _message_delta(a: Message, b: Message) -> float:
    an = a.normalized()
    bn = b.normalized()
    return max(abs(float(x) - float(y)) for x, y in zip(an.weights, bn.weights))


def brute_force_app(r: Realization, priors: Mapping[str, Message] | None = None,
                    exact: bool = True, cap: int = 2**20) -> DecodeResult:
    """Exhaustive a-posteriori marginals over the full behavior (oracle)."""
    pri = full_priors(r, priors, exact)
    zero = Fraction(0) if exact else 0.0
    syms = sorted(r.symbols, key=sort_key)
    edges = sorted((j for j in r.internal_states() if len(r.slots[j]) == 2),
                   key=sort_key)
    acc_sym = {k: [zero] * r.symbols[k].order for k in syms}
    acc_st = {j: [zero] * r.states[j].alphabet.order for j in edges}
    for config in r.enumerate_behavior(cap):
        w = Fraction(1) if exact else 1.0
        for k in syms:
            w *= pri[k].weights[r.symbols[k].index(config[k])]
        if w == 0:
            continue
        for k in syms:
            acc_sym[k][r.symbols[k].index(config[k])] += w
        for j in edges:
            acc_st[j][r.states[j].alphabet.index(config[j])] += w
    sym = {k: Message(r.symbols[k], tuple(acc_sym[k])).normalized() for k in syms}
    st = {j: Message(r.states[j].alphabet, tuple(acc_st[j])).normalized()
          for j in edges}
    contradiction = any(m.is_zero for m in sym.values())
    return DecodeResult(sym, st, contradiction)


# -- message trimming and merging ------------------------------------------------


@dataclass
class ReducedMessage:
    """A message collapsed onto the cosets of a constraint's cross-section."""

    quotient: QuotientMap        # (C|V) / (C:V)
    trimmed: CodeSubgroup        # C|V
    message: Message             # over the quotient alphabet


def message_reduce(code: CodeSubgroup, variable, msg: Message) -> ReducedMessage:
    """Trim weights to C|V and merge them over cosets of C:V."""
    trimmed = code.project([variable])
    nondyn = code.cross_section([variable])
    quot = trimmed.quotient_by(nondyn)
    zero = Fraction(0) if isinstance(msg.weights[0], Fraction) else 0.0
    acc = [zero] * quot.alphabet.order
    for v in trimmed.elements():
        acc[quot.alphabet.index(quot.project(v))] += msg.weight_of(v)
    return ReducedMessage(quot, trimmed, Message(quot.alphabet, tuple(acc)))


def message_expand(reduced: ReducedMessage, alpha: Alphabet,
                   exact: bool = True) -> Message:
    """Spread each coset weight evenly over its members; zero outside C|V."""
    zero = Fraction(0) if exact else 0.0
    w = [zero] * alpha.order
    coset_size = reduced.trimmed.order // reduced.quotient.alphabet.order
    for v in reduced.trimmed.elements():
        q = reduced.quotient.project(v)
        share = reduced.message.weight_of(q) / coset_size
        w[alpha.index(v)] = share
    return Message(alpha, tuple(w))
