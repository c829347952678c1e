"""Normal realizations and fragments: data model, behaviors, cutting, connecting.

A normal realization has symbol variables of degree 1, state variables of
degree 2 (edges, optionally labeled with an isomorphism relating their two
ends), and constraint codes at the vertices.  A fragment is the same thing
plus a boundary of degree-1 external state variables.  One class covers
both; an empty boundary means a complete realization.

Edge orientation: the two ends of a state edge are its tail value s and head
value s', with validity s' = iso(s) (identity if no iso).  The tail is the
slot in the first-listed incident constraint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .alphabets import Alphabet, Element, ProductSpace, sort_key
from .errors import (
    AlphabetMismatch,
    TooLargeToEnumerate,
    UnknownEdge,
    UnknownLabel,
    ValidationFailed,
)
from .homs import Homomorphism, identity_map
from .subgroups import CodeSubgroup, full_subgroup

Configuration = dict[str, Element]


@dataclass(frozen=True)
class StateVar:
    """State edge: one alphabet for both ends, head = iso(tail) when labeled."""

    alphabet: Alphabet
    iso: Homomorphism | None = None

    def __post_init__(self):
        if self.iso is not None:
            if (self.iso.source != self.alphabet
                    or self.iso.target != self.alphabet):
                raise AlphabetMismatch("edge isomorphism must act on the edge alphabet")
            if not self.iso.is_isomorphism:
                raise AlphabetMismatch("edge label must be an isomorphism")

    def head_of(self, tail: Sequence[int]) -> Element:
        return self.iso.apply(tail) if self.iso else tuple(tail)


@dataclass(frozen=True)
class Constraint:
    """Constraint code over its incident variables, slots indexed 0..d-1."""

    vars: tuple[str, ...]
    code: CodeSubgroup

    def __post_init__(self):
        if len(self.code.ambient.factors) != len(self.vars):
            raise ValidationFailed("constraint code width differs from slot count")


@dataclass
class ValidationReport:
    degree_errors: list[str]
    alphabet_errors: list[str]
    disconnected: bool

    @property
    def is_valid(self) -> bool:
        return not self.degree_errors and not self.alphabet_errors

    def lines(self) -> list[str]:
        out = [f"degree: {msg}" for msg in self.degree_errors]
        out += [f"alphabet: {msg}" for msg in self.alphabet_errors]
        if self.disconnected:
            out.append("note: graph is disconnected")
        return out


class BehaviorBundle:
    """Configuration universe, validity space, behaviors, and realized code."""

    def __init__(self, universe, validity, extended, behavior, external, code):
        self.universe: CodeSubgroup = universe
        self.validity: CodeSubgroup = validity
        self.extended: CodeSubgroup = extended
        self.behavior: CodeSubgroup = behavior
        self.external: CodeSubgroup = external
        self.code: CodeSubgroup = code


class Realization:
    """A normal realization, or a fragment when boundary is nonempty."""

    def __init__(
        self,
        symbols: Mapping[str, Alphabet],
        states: Mapping[str, StateVar],
        constraints: Mapping[str, Constraint],
        boundary: Sequence[str] = (),
    ):
        self.symbols: dict[str, Alphabet] = dict(symbols)
        self.states: dict[str, StateVar] = dict(states)
        self.constraints: dict[str, Constraint] = dict(constraints)
        self.boundary: tuple[str, ...] = tuple(sorted(boundary, key=sort_key))
        clash = set(self.symbols) & set(self.states)
        if clash:
            raise ValidationFailed(f"labels used as both symbol and state: {clash}")
        # occurrence slots per variable, in constraint listing order
        self.slots: dict[str, list[tuple[str, int]]] = {
            v: [] for v in itertools.chain(self.symbols, self.states)
        }
        for cl, con in self.constraints.items():
            for i, v in enumerate(con.vars):
                if v not in self.slots:
                    raise UnknownLabel(f"constraint {cl!r} uses unknown variable {v!r}")
                self.slots[v].append((cl, i))
        self._bundle: BehaviorBundle | None = None

    # -- structural helpers ---------------------------------------------------

    @property
    def is_fragment(self) -> bool:
        return bool(self.boundary)

    def internal_states(self) -> list[str]:
        b = set(self.boundary)
        return [s for s in self.states if s not in b]

    def edge_ends(self, j: str) -> list[tuple[str, int]]:
        if j not in self.states:
            raise UnknownEdge(f"no state variable {j!r}")
        return self.slots[j]

    def alphabet_of(self, v: str) -> Alphabet:
        if v in self.symbols:
            return self.symbols[v]
        if v in self.states:
            return self.states[v].alphabet
        raise UnknownLabel(f"no variable {v!r}")

    def slot_alphabet(self, cl: str, i: int) -> Alphabet:
        """Alphabet seen by slot i of constraint cl (head slots see iso target)."""
        v = self.constraints[cl].vars[i]
        return self.alphabet_of(v)

    def neighbors(self) -> dict[str, list[tuple[str, str]]]:
        """Adjacency over internal state edges: constraint -> [(edge, other)]."""
        adj: dict[str, list[tuple[str, str]]] = {c: [] for c in self.constraints}
        for j in self.internal_states():
            ends = self.slots[j]
            if len(ends) != 2:
                continue
            (c1, _), (c2, _) = ends
            adj[c1].append((j, c2))
            adj[c2].append((j, c1))
        return adj

    def components(self, removed_edges: set[str] | None = None) -> list[set[str]]:
        """Connected components of the constraint graph, optionally cutting edges."""
        removed = removed_edges or set()
        adj = self.neighbors()
        seen: set[str] = set()
        comps = []
        for start in self.constraints:
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            seen.add(start)
            while stack:
                c = stack.pop()
                for j, other in adj[c]:
                    if j in removed or other in seen:
                        continue
                    seen.add(other)
                    comp.add(other)
                    stack.append(other)
            comps.append(comp)
        return comps

    @property
    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def validate(self) -> ValidationReport:
        degree_errors: list[str] = []
        alphabet_errors: list[str] = []
        for a in self.symbols:
            d = len(self.slots[a])
            if d != 1:
                degree_errors.append(f"symbol {a!r} has degree {d}, expected 1")
        bset = set(self.boundary)
        for s in self.states:
            d = len(self.slots[s])
            want = 1 if s in bset else 2
            kind = "boundary state" if s in bset else "state"
            if d != want:
                degree_errors.append(f"{kind} {s!r} has degree {d}, expected {want}")
        for b in self.boundary:
            if b not in self.states:
                degree_errors.append(f"boundary variable {b!r} is not a state")
        for cl, con in self.constraints.items():
            for i, v in enumerate(con.vars):
                expected = self.alphabet_of(v)
                got = con.code.ambient.factors[i][1]
                if got.moduli != expected.moduli:
                    alphabet_errors.append(
                        f"constraint {cl!r} slot {i} has {got!r}, "
                        f"variable {v!r} has {expected!r}")
        return ValidationReport(degree_errors, alphabet_errors,
                                not self.is_connected)

    def require_valid(self) -> None:
        report = self.validate()
        if not report.is_valid:
            raise ValidationFailed("; ".join(report.lines()))

    # -- behavior -------------------------------------------------------------

    def _blocks(self):
        syms = sorted(self.symbols, key=sort_key)
        bound = list(self.boundary)
        internal = sorted(self.internal_states(), key=sort_key)
        return syms, bound, internal

    def universe_space(self) -> ProductSpace:
        syms, bound, internal = self._blocks()
        factors: list[tuple[Any, Alphabet]] = []
        factors += [(("a", k), self.symbols[k]) for k in syms]
        factors += [(("x", j), self.states[j].alphabet) for j in bound]
        factors += [(("s", j), self.states[j].alphabet) for j in internal]
        factors += [(("h", j), self.states[j].alphabet) for j in internal]
        return ProductSpace(factors)

    def _slot_coordinate(self, cl: str, i: int) -> tuple[str, str]:
        """Global factor label of slot i of constraint cl in the universe space."""
        v = self.constraints[cl].vars[i]
        if v in self.symbols:
            return ("a", v)
        if v in set(self.boundary):
            return ("x", v)
        ends = self.slots[v]
        return ("s", v) if ends[0] == (cl, i) else ("h", v)

    def behavior_bundle(self) -> BehaviorBundle:
        """Exact U, extended behavior, behavior, external behavior and code."""
        if self._bundle is not None:
            return self._bundle
        self.require_valid()
        space = self.universe_space()
        syms, bound, internal = self._blocks()
        rows: list[list[int]] = []
        for cl, con in self.constraints.items():
            slot_spans = []
            for i in range(len(con.vars)):
                lab = self._slot_coordinate(cl, i)
                slot_spans.append(space.span(lab))
            local = con.code.ambient
            for r in con.code.rows:
                row = [0] * space.width
                for i in range(len(con.vars)):
                    a, b = local.span(local.labels[i])
                    ga, gb = slot_spans[i]
                    row[ga:gb] = list(r[a:b])
                rows.append(row)
        universe = CodeSubgroup(space, rows)

        vrows: list[list[int]] = []
        for k in syms:
            a, b = space.span(("a", k))
            for c in range(a, b):
                row = [0] * space.width
                row[c] = 1
                vrows.append(row)
        for j in bound:
            a, b = space.span(("x", j))
            for c in range(a, b):
                row = [0] * space.width
                row[c] = 1
                vrows.append(row)
        for j in internal:
            sv = self.states[j]
            sa, sb = space.span(("s", j))
            ha, _ = space.span(("h", j))
            for i in range(sv.alphabet.width):
                unit = [0] * sv.alphabet.width
                unit[i] = 1
                head = sv.head_of(unit)
                row = [0] * space.width
                row[sa + i] = 1
                for t, hv in enumerate(head):
                    row[ha + t] = hv
                vrows.append(row)
        validity = CodeSubgroup(space, vrows)

        extended = universe.intersect(validity)
        beh_labels = ([("a", k) for k in syms] + [("x", j) for j in bound]
                      + [("s", j) for j in internal])
        behavior = extended.project(beh_labels)
        ext_labels = [("a", k) for k in syms] + [("x", j) for j in bound]
        external = extended.project(ext_labels).renamed(
            {("a", k): k for k in syms} | {("x", j): j for j in bound})
        code = extended.project([("a", k) for k in syms]).renamed(
            {("a", k): k for k in syms})
        self._bundle = BehaviorBundle(universe, validity, extended, behavior,
                                      external, code)
        return self._bundle

    def code(self) -> CodeSubgroup:
        """The code realized: projection of the behavior on the symbols."""
        return self.behavior_bundle().code

    def external_behavior(self) -> CodeSubgroup:
        """C^F over symbols then boundary states (plain variable labels)."""
        return self.behavior_bundle().external

    # -- structure editing (persistent: returns new realizations) -------------

    def replaced(self, symbols=None, states=None, constraints=None,
                 boundary=None) -> "Realization":
        return Realization(
            symbols if symbols is not None else self.symbols,
            states if states is not None else self.states,
            constraints if constraints is not None else self.constraints,
            boundary if boundary is not None else self.boundary,
        )

    def fold_edge_iso(self, j: str) -> "Realization":
        """Equivalent realization where edge j carries the identity.

        The isomorphism is absorbed into the head constraint by composing
        its slot with the map; behavior is unchanged.
        """
        sv = self.states.get(j)
        if sv is None:
            raise UnknownEdge(f"no state variable {j!r}")
        if sv.iso is None:
            return self
        ends = self.slots[j]
        if len(ends) != 2:
            raise UnknownEdge(f"state {j!r} is not an internal edge")
        head_cl, head_slot = ends[1]
        con = self.constraints[head_cl]
        new_code = _map_slot(con.code, head_slot, sv.iso.inverse())
        constraints = dict(self.constraints)
        constraints[head_cl] = Constraint(con.vars, new_code)
        states = dict(self.states)
        states[j] = StateVar(sv.alphabet, None)
        return self.replaced(states=states, constraints=constraints)

    def cut(self, edges: Iterable[str]) -> list["Realization"]:
        """Cut state edges into boundary half-edges; returns the fragments.

        The tail half keeps the edge label; the head half gets a primed
        label.  Edge isomorphism labels are dropped by cutting (reconnect
        with the same map to restore the realization).
        """
        cut_set = set(edges)
        for j in cut_set:
            if j not in self.states or j in set(self.boundary):
                raise UnknownEdge(f"no internal state edge {j!r}")
        heads = self.head_labels(cut_set)
        comps = self.components(cut_set)
        frags = []
        for comp in sorted(comps, key=lambda c: min(map(sort_key, c))):
            frags.append(self._fragment_for(comp, cut_set, heads))
        return frags

    def head_labels(self, edges: Iterable[str]) -> dict[str, str]:
        """Primed labels the head halves receive when the edges are cut."""
        taken = set(self.symbols) | set(self.states)
        out: dict[str, str] = {}
        for j in sorted(edges, key=sort_key):
            lab = j + "'"
            while lab in taken:
                lab += "'"
            taken.add(lab)
            out[j] = lab
        return out

    def _fragment_for(self, comp: set[str], cut_set: set[str],
                      heads: dict[str, str]) -> "Realization":
        constraints: dict[str, Constraint] = {}
        symbols: dict[str, Alphabet] = {}
        states: dict[str, StateVar] = {}
        boundary: list[str] = []
        renames: dict[tuple[str, int], str] = {}
        for j in cut_set:
            ends = self.slots[j]
            if len(ends) != 2:
                continue
            (tc, ti), (hc, hi) = ends
            if tc in comp:
                renames[(tc, ti)] = j
            if hc in comp:
                renames[(hc, hi)] = heads[j]
        for cl, con in self.constraints.items():
            if cl not in comp:
                continue
            new_vars = []
            for i, v in enumerate(con.vars):
                if (cl, i) in renames:
                    new_vars.append(renames[(cl, i)])
                else:
                    new_vars.append(v)
            constraints[cl] = Constraint(tuple(new_vars), con.code)
            for i, v in enumerate(con.vars):
                if v in self.symbols:
                    symbols[v] = self.symbols[v]
        bset = set(self.boundary)
        for j, sv in self.states.items():
            ends = self.slots[j]
            inside = [e for e in ends if e[0] in comp]
            if not inside:
                continue
            if j in cut_set:
                for cl, i in inside:
                    lab = renames[(cl, i)]
                    states[lab] = StateVar(sv.alphabet, None)
                    boundary.append(lab)
            elif j in bset:
                states[j] = sv
                boundary.append(j)
            else:
                states[j] = sv
        return Realization(symbols, states, constraints, boundary)

    def connect(self, other: "Realization | None", tail: str, head: str,
                iso: Homomorphism | None = None) -> "Realization":
        """Join boundary variables into one edge; other=None joins within self.

        tail must be a boundary variable of self, head one of other (or of
        self when other is None).  The new edge keeps the tail label and
        validity head_value = iso(tail_value).
        """
        if other is None:
            merged_symbols = dict(self.symbols)
            merged_states = dict(self.states)
            merged_constraints = dict(self.constraints)
            merged_boundary = [b for b in self.boundary if b not in (tail, head)]
            if tail not in set(self.boundary) or head not in set(self.boundary):
                raise UnknownEdge("connect needs boundary variables")
        else:
            if tail not in set(self.boundary):
                raise UnknownEdge(f"{tail!r} is not a boundary variable")
            if head not in set(other.boundary):
                raise UnknownEdge(f"{head!r} is not a boundary variable")
            overlap = ((set(self.symbols) | set(self.states))
                       & (set(other.symbols) | set(other.states)))
            if overlap - {tail, head}:
                raise ValidationFailed(
                    f"variable labels overlap between fragments: {overlap}")
            if set(self.constraints) & set(other.constraints):
                raise ValidationFailed("constraint labels overlap between fragments")
            merged_symbols = dict(self.symbols) | dict(other.symbols)
            merged_states = dict(self.states) | dict(other.states)
            merged_constraints = dict(self.constraints) | dict(other.constraints)
            merged_boundary = [b for b in self.boundary if b != tail]
            merged_boundary += [b for b in other.boundary if b != head]
        ta = merged_states[tail].alphabet
        ha = merged_states[head].alphabet
        if iso is None:
            if ta.moduli != ha.moduli:
                raise AlphabetMismatch(
                    f"cannot identify {ta!r} with {ha!r} without an isomorphism")
        else:
            if iso.source != ta or iso.target != ha or not iso.is_isomorphism:
                raise AlphabetMismatch("pairing isomorphism has wrong alphabets")
        # rename the head slot to the tail label
        src = self if other is None else other
        hc, hi = src.slots[head][0]
        con = merged_constraints[hc]
        new_vars = list(con.vars)
        new_vars[hi] = tail
        merged_constraints[hc] = Constraint(tuple(new_vars), con.code)
        del merged_states[head]
        merged = Realization(merged_symbols, merged_states, merged_constraints,
                             merged_boundary)
        # orientation: the stated map sends the tail-label end to the head end;
        # if the head slot is listed first, store the inverse instead
        ends = merged.slots[tail]
        the_iso = iso
        if the_iso is not None:
            tc, ti = self.slots[tail][0]
            if ends[0] != (tc, ti):
                the_iso = the_iso.inverse()
        if the_iso is not None and not _is_identity(the_iso):
            st = dict(merged.states)
            st[tail] = StateVar(ta, the_iso)
            merged = merged.replaced(states=st)
        return merged

    # -- equality & enumeration ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Realization):
            return False
        # constraint listing order is semantic (it fixes edge orientation);
        # symbol/state dict order is not
        return (
            self.symbols == other.symbols
            and self.states == other.states
            and list(self.constraints.items()) == list(other.constraints.items())
            and self.boundary == other.boundary
        )

    def __repr__(self) -> str:
        return (f"Realization(symbols={len(self.symbols)}, "
                f"states={len(self.states)}, constraints={len(self.constraints)}, "
                f"boundary={len(self.boundary)})")

    def configuration_space_order(self) -> int:
        n = 1
        for a in self.symbols.values():
            n *= a.order
        for j in self.internal_states():
            n *= self.states[j].alphabet.order
        for b in self.boundary:
            n *= self.states[b].alphabet.order
        return n

    def enumerate_behavior(self, cap: int = 2**20) -> Iterator[Configuration]:
        """Exhaustive valid configurations (oracle path, no linear algebra)."""
        if self.configuration_space_order() > cap:
            raise TooLargeToEnumerate("configuration space too large")
        syms, bound, internal = self._blocks()
        all_vars = syms + bound + internal
        alphas = [self.alphabet_of(v) for v in all_vars]
        codeword_sets = {
            cl: set(con.code.elements()) for cl, con in self.constraints.items()
        }
        for combo in itertools.product(*(list(a.elements()) for a in alphas)):
            config = dict(zip(all_vars, combo))
            if self._config_valid(config, codeword_sets):
                yield config

    def _config_valid(self, config: Configuration, codeword_sets) -> bool:
        bset = set(self.boundary)
        for cl, con in self.constraints.items():
            word: list[int] = []
            for i, v in enumerate(con.vars):
                val = config[v]
                if v in self.states and v not in bset:
                    if self.slots[v][1] == (cl, i):
                        val = self.states[v].head_of(val)
                word.extend(val)
            if tuple(word) not in codeword_sets[cl]:
                return False
        return True


def _is_identity(phi: Homomorphism) -> bool:
    return phi.matrix == identity_map(phi.source).matrix and phi.source == phi.target


def _map_slot(code: CodeSubgroup, slot: int, phi: Homomorphism) -> CodeSubgroup:
    """Image of a code under phi applied to one ambient factor."""
    amb = code.ambient
    lab = amb.labels[slot]
    a, b = amb.span(lab)
    rows = []
    for r in code.rows:
        mid = phi.apply(r[a:b])
        rows.append(r[:a] + mid + r[b:])
    factors = list(amb.factors)
    factors[slot] = (lab, phi.target)
    return CodeSubgroup(ProductSpace(factors), rows)


# -- normalization of general (non-normal) systems ----------------------------


@dataclass
class GeneralSystem:
    """A behavioral system with variables of arbitrary degree."""

    variables: dict[str, tuple[Alphabet, str]]  # label -> (alphabet, "symbol"|"state")
    constraints: dict[str, tuple[tuple[str, ...], CodeSubgroup]]


def normalize(system: GeneralSystem) -> Realization:
    """Convert a general system into a normal realization of the same code.

    Variables of degree above the normal limit become equality constraints
    over replica state edges; degree-1 state variables are deleted by
    projecting their constraint.
    """
    occurrences: dict[str, list[tuple[str, int]]] = {v: [] for v in system.variables}
    for cl, (vars_, _) in system.constraints.items():
        for i, v in enumerate(vars_):
            if v not in occurrences:
                raise UnknownLabel(f"constraint {cl!r} uses unknown variable {v!r}")
            occurrences[v].append((cl, i))

    symbols: dict[str, Alphabet] = {}
    states: dict[str, StateVar] = {}
    renames: dict[tuple[str, int], str] = {}
    extra: dict[str, Constraint] = {}
    drop_slots: set[tuple[str, int]] = set()
    taken = set(system.variables)

    def fresh(base: str) -> str:
        lab = base
        while lab in taken:
            lab += "+"
        taken.add(lab)
        return lab

    for v, (alpha, kind) in system.variables.items():
        occ = occurrences[v]
        d = len(occ)
        if kind == "symbol":
            symbols[v] = alpha
            if d == 0:
                free = fresh(f"free:{v}")
                extra[free] = Constraint(
                    (v,), full_subgroup(ProductSpace([(0, alpha)])))
            elif d >= 2:
                replicas = []
                for t, slot in enumerate(occ):
                    lab = fresh(f"{v}:r{t}")
                    replicas.append(lab)
                    states[lab] = StateVar(alpha)
                    renames[slot] = lab
                eq = fresh(f"eq:{v}")
                extra[eq] = Constraint(
                    (v, *replicas), _equality_code(alpha, d + 1))
        else:
            if d == 0:
                continue
            if d == 1:
                drop_slots.add(occ[0])
            elif d == 2:
                states[v] = StateVar(alpha)
            else:
                replicas = []
                for t, slot in enumerate(occ):
                    lab = fresh(f"{v}:r{t}")
                    replicas.append(lab)
                    states[lab] = StateVar(alpha)
                    renames[slot] = lab
                eq = fresh(f"eq:{v}")
                extra[eq] = Constraint(tuple(replicas), _equality_code(alpha, d))

    constraints: dict[str, Constraint] = {}
    for cl, (vars_, code) in system.constraints.items():
        keep = [i for i in range(len(vars_)) if (cl, i) not in drop_slots]
        if len(keep) < len(vars_):
            code = code.project([code.ambient.labels[i] for i in keep]).renamed(
                {code.ambient.labels[i]: t for t, i in enumerate(keep)})
        new_vars = tuple(
            renames.get((cl, i), vars_[i]) for i in keep
        )
        constraints[cl] = Constraint(new_vars, code)
    for lab in sorted(extra, key=sort_key):
        constraints[lab] = extra[lab]
    return Realization(symbols, states, constraints)


def _equality_code(alpha: Alphabet, n: int) -> CodeSubgroup:
    amb = ProductSpace([(i, alpha) for i in range(n)])
    rows = []
    for i in range(alpha.width):
        unit = [0] * alpha.width
        unit[i] = 1
        rows.append(tuple(unit) * n)
    return CodeSubgroup(amb, rows)
