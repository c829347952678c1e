"""Systems-theoretic analysis of realizations and fragments.

Covers trimness/properness of external behaviors, local reduction of state
alphabets, the canonical decomposition into trim-and-proper cores plus
interface nodes, the observability/controllability suite, behavioral
controllability/observability of two-fragment splits, and state-trimness
classification at non-cut edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .alphabets import Alphabet, ProductSpace, sort_key
from .errors import (
    EdgeIsCutSet,
    FragmentsOverlap,
    NotAStateEdge,
    UnknownVariable,
)
from .graphcore import is_cut_edge
from .realization import Constraint, Realization, StateVar
from .subgroups import (
    CodeSubgroup,
    QuotientMap,
    cylinder,
    product_subgroup,
)


# -- trimness and properness ---------------------------------------------------


@dataclass
class TrimProperStatus:
    variable: str
    trim: bool
    proper: bool
    trimmed: CodeSubgroup       # projection of C^F on the variable
    nondynamical: CodeSubgroup  # cross-section of C^F at the variable

    @property
    def effective_order(self) -> int:
        return self.trimmed.order // self.nondynamical.order


def trim_proper(f: Realization, variable: str) -> TrimProperStatus:
    """Trim/proper of the external behavior at one symbol or boundary variable."""
    ext = f.external_behavior()
    if variable not in set(ext.ambient.labels):
        raise UnknownVariable(
            f"{variable!r} is not a symbol or boundary variable of the fragment")
    trimmed = ext.project([variable])
    nondyn = ext.cross_section([variable])
    alpha = f.alphabet_of(variable)
    return TrimProperStatus(
        variable,
        trim=trimmed.order == alpha.order,
        proper=nondyn.is_trivial,
        trimmed=trimmed,
        nondynamical=nondyn,
    )


# -- local reduction -------------------------------------------------------------


def far_side_fragment(r: Realization, constraint: str, edge: str
                      ) -> tuple[Realization, Realization, str]:
    """Fragment on the far side of `edge` from `constraint`, after folding isos.

    Returns (folded realization, fragment, fragment's boundary label for the
    edge).  The fragment is the connected piece of the realization minus the
    named constraint that contains the far end of the edge; all edges between
    it and the constraint become its boundary.
    """
    if edge not in r.states or edge in set(r.boundary):
        raise NotAStateEdge(f"{edge!r} is not an internal state edge")
    ends = r.slots[edge]
    end_constraints = [cl for cl, _ in ends]
    if constraint not in end_constraints:
        raise NotAStateEdge(f"edge {edge!r} is not incident on {constraint!r}")
    others = [cl for cl in end_constraints if cl != constraint]
    if not others:
        raise NotAStateEdge(f"edge {edge!r} is a self-loop at {constraint!r}")
    far_constraint = others[0]
    incident = sorted({
        j for j in r.internal_states()
        if constraint in [cl for cl, _ in r.slots[j]]
    }, key=sort_key)
    folded = r
    for j in incident:
        folded = folded.fold_edge_iso(j)
    comps = folded.components(set(incident))
    comp = next(c for c in comps if far_constraint in c)
    cut_here = [j for j in incident
                if any(cl in comp for cl, _ in folded.slots[j])]
    heads = folded.head_labels(cut_here)
    frag = folded._fragment_for(comp, set(cut_here), heads)
    (tc, _), _ = folded.slots[edge]
    blabel = edge if tc in comp else heads[edge]
    return folded, frag, blabel


def local_reduce(r: Realization, constraint: str, edge: str) -> Realization:
    """Reduce a state alphabet using the far-side fragment's external behavior.

    Replaces the edge alphabet by the trimmed-modulo-nondynamical quotient
    and restricts/merges the two incident constraint codes accordingly.
    Returns the input unchanged when the far side is already trim and proper
    at the edge.  The realized code is preserved exactly.
    """
    folded, frag, blabel = far_side_fragment(r, constraint, edge)
    ext = frag.external_behavior()
    trimmed = ext.project([blabel])
    nondyn = ext.cross_section([blabel])
    alpha = r.states[edge].alphabet
    if trimmed.order == alpha.order and nondyn.is_trivial:
        return r
    quot = trimmed.quotient_by(nondyn)
    new_states = dict(folded.states)
    new_states[edge] = StateVar(quot.alphabet, None)
    new_constraints = dict(folded.constraints)
    for cl, slot in folded.slots[edge]:
        con = new_constraints[cl]
        new_constraints[cl] = Constraint(
            con.vars, _restrict_merge(con.code, slot, trimmed, quot))
    return folded.replaced(states=new_states, constraints=new_constraints)


def _restrict_merge(code: CodeSubgroup, slot: int, allowed: CodeSubgroup,
                    quot: QuotientMap) -> CodeSubgroup:
    """Restrict one slot to `allowed` and merge its values into quotient classes."""
    amb = code.ambient
    lab = amb.labels[slot]
    allowed_here = CodeSubgroup(
        ProductSpace([(lab, amb.alphabet(lab))]), allowed.rows)
    restricted = code.intersect(cylinder(amb, {lab: allowed_here}))
    a, b = amb.span(lab)
    factors = list(amb.factors)
    factors[slot] = (lab, quot.alphabet)
    new_amb = ProductSpace(factors)
    rows = [row[:a] + quot.project(row[a:b]) + row[b:]
            for row in restricted.rows]
    return CodeSubgroup(new_amb, rows)


def reduce_to_fixpoint(r: Realization) -> Realization:
    """Apply local reductions in deterministic order until none applies."""
    current = r
    while True:
        changed = False
        for edge in sorted(current.internal_states(), key=sort_key):
            if len(current.slots[edge]) != 2:
                continue
            ends = {c for c, _ in current.slots[edge]}
            if len(ends) < 2:
                continue  # self-loop: no far side
            for cl in sorted(ends):
                reduced = local_reduce(current, cl, edge)
                if reduced is not current:
                    current = reduced
                    changed = True
        if not changed:
            return current


# -- canonical decomposition -----------------------------------------------------


@dataclass
class InterfaceNode:
    """Inclusion/natural-map constraint between a symbol and its effective alphabet."""

    symbol: str
    code: CodeSubgroup          # over (symbol alphabet, effective alphabet)
    quotient: QuotientMap
    trimmed: CodeSubgroup
    nondynamical: CodeSubgroup


@dataclass
class CanonicalDecomposition:
    core: Realization
    interfaces: dict[str, InterfaceNode]  # only symbols needing a nontrivial node

    def compose(self) -> Realization:
        """Reassemble interface nodes with the core; realizes the original code."""
        symbols = dict(self.core.symbols)
        states = dict(self.core.states)
        constraints = dict(self.core.constraints)
        for k, node in self.interfaces.items():
            eff_label = f"{k}~"
            while eff_label in symbols or eff_label in states:
                eff_label += "~"
            # core currently exposes the effective alphabet as symbol k
            symbols.pop(k)
            states[eff_label] = StateVar(node.quotient.alphabet, None)
            renamed: dict[str, Constraint] = {}
            for cl, con in constraints.items():
                if k in con.vars:
                    new_vars = tuple(eff_label if v == k else v for v in con.vars)
                    renamed[cl] = Constraint(new_vars, con.code)
                else:
                    renamed[cl] = con
            constraints = renamed
            symbols[k] = self.interfaces[k].code.ambient.factors[0][1]
            iface_label = f"iface:{k}"
            while iface_label in constraints:
                iface_label += "+"
            constraints[iface_label] = Constraint(
                (k, eff_label),
                node.code.renamed({node.code.ambient.labels[0]: 0,
                                   node.code.ambient.labels[1]: 1}))
        return Realization(symbols, states, constraints)


def canonical_decomposition(r: Realization) -> CanonicalDecomposition:
    """Local reductions to a fixpoint, then per-symbol interface extraction.

    The core realization has every constraint trim and proper at all its
    variables; symbols whose trimmed/nondynamical alphabets are nontrivial
    get interface nodes onto effective alphabets.
    """
    r.require_valid()
    reduced = reduce_to_fixpoint(r)
    code = reduced.code()
    interfaces: dict[str, InterfaceNode] = {}
    symbols = dict(reduced.symbols)
    constraints = dict(reduced.constraints)
    for k in sorted(reduced.symbols, key=sort_key):
        alpha = reduced.symbols[k]
        trimmed = code.project([k])
        nondyn = code.cross_section([k])
        if trimmed.order == alpha.order and nondyn.is_trivial:
            continue
        quot = trimmed.quotient_by(nondyn)
        iface_amb = ProductSpace([(("sym", k), alpha), (("eff", k), quot.alphabet)])
        iface_rows = [tuple(row) + quot.project(row) for row in trimmed.rows]
        iface_code = CodeSubgroup(iface_amb, iface_rows)
        (cl, slot), = reduced.slots[k]
        con = constraints[cl]
        constraints[cl] = Constraint(
            con.vars, _restrict_merge(con.code, slot, trimmed, quot))
        symbols[k] = quot.alphabet
        interfaces[k] = InterfaceNode(k, iface_code, quot, trimmed, nondyn)
    core = reduced.replaced(symbols=symbols, constraints=constraints)
    # restricting symbol slots to globally reachable values can shrink the
    # constraints' state-slot projections, so the state alphabets may admit
    # further reductions; a second sweep cannot break the symbol slots,
    # whose trim/properness now follows from the effective code itself
    core = reduce_to_fixpoint(core)
    return CanonicalDecomposition(core, interfaces)


# -- observability and controllability -------------------------------------------


@dataclass
class ObsCtrlReport:
    ext_unobservable: CodeSubgroup   # (C^F) : S_ext
    int_unobservable: CodeSubgroup   # (B^F) : S_int
    tot_unobservable: CodeSubgroup   # (B^F) : (S_ext x S_int)
    int_controllable: CodeSubgroup   # image of the syndrome map on U^F
    order_universe: int
    order_extended: int
    order_int_states: int
    ext_observable: bool
    int_observable: bool
    tot_observable: bool
    ext_controllable: bool
    int_controllable_flag: bool
    independence_route_agrees: bool

    @property
    def tot_controllable(self) -> bool:
        return self.ext_controllable and self.int_controllable_flag


def obs_ctrl(f: Realization) -> ObsCtrlReport:
    """Full internal/external/total observability and controllability report."""
    bundle = f.behavior_bundle()
    syms = sorted(f.symbols, key=sort_key)
    bound = list(f.boundary)
    internal = sorted(f.internal_states(), key=sort_key)

    ext_unobs = bundle.external.cross_section(bound)
    int_unobs = bundle.behavior.cross_section([("s", j) for j in internal]).renamed(
        {("s", j): j for j in internal})
    tot_unobs = bundle.behavior.cross_section(
        [("x", j) for j in bound] + [("s", j) for j in internal])

    state_space = ProductSpace([(j, f.states[j].alphabet) for j in internal])
    syn_rows = []
    uspace = bundle.universe.ambient
    for row in bundle.universe.rows:
        out = []
        for j in internal:
            sv = f.states[j]
            tail = uspace.get(row, ("s", j))
            head = uspace.get(row, ("h", j))
            mapped = sv.head_of(tail)
            out.extend((h - m) % mm for h, m, mm in
                       zip(head, mapped, sv.alphabet.moduli))
        syn_rows.append(tuple(out))
    controllable_sub = CodeSubgroup(state_space, syn_rows)

    order_int_states = state_space.order
    assert bundle.universe.order % bundle.extended.order == 0
    assert bundle.universe.order // bundle.extended.order == controllable_sub.order

    independent = bundle.universe.orthogonal().intersect(
        bundle.validity.orthogonal()).is_trivial
    int_ctrl_flag = controllable_sub.order == order_int_states

    return ObsCtrlReport(
        ext_unobservable=ext_unobs,
        int_unobservable=int_unobs,
        tot_unobservable=tot_unobs,
        int_controllable=controllable_sub,
        order_universe=bundle.universe.order,
        order_extended=bundle.extended.order,
        order_int_states=order_int_states,
        ext_observable=ext_unobs.is_trivial,
        int_observable=int_unobs.is_trivial,
        tot_observable=tot_unobs.is_trivial,
        ext_controllable=bundle.external.project(bound).order
        == ProductSpace([(j, f.states[j].alphabet) for j in bound]).order,
        int_controllable_flag=int_ctrl_flag,
        independence_route_agrees=independent == int_ctrl_flag,
    )


@dataclass
class ControllabilityTest:
    order_universe: int
    order_extended: int
    order_states: int
    order_controllable: int
    controllable: bool

    def dims(self, p: int) -> tuple[int, int, int, int]:
        def logp(n: int) -> int:
            d = 0
            while n > 1:
                if n % p:
                    raise ValueError(f"{n} is not a power of {p}")
                n //= p
                d += 1
            return d
        return (logp(self.order_universe), logp(self.order_extended),
                logp(self.order_states), logp(self.order_controllable))


def controllability_test(f: Realization) -> ControllabilityTest:
    """|U| / |extended behavior| = |controllable subspace| <= |states|."""
    rep = obs_ctrl(f)
    return ControllabilityTest(
        order_universe=rep.order_universe,
        order_extended=rep.order_extended,
        order_states=rep.order_int_states,
        order_controllable=rep.int_controllable.order,
        controllable=rep.int_controllable_flag,
    )


def unobservable_states(r: Realization) -> CodeSubgroup:
    """State configurations consistent with the all-zero symbol configuration."""
    return obs_ctrl(r).int_unobservable


# -- behavioral controllability / observability ----------------------------------


@dataclass
class BehavioralReport:
    controllable: bool
    observable: bool
    direct_controllable: bool
    direct_observable: bool

    @property
    def controllable_routes_agree(self) -> bool:
        return self.controllable == self.direct_controllable

    @property
    def observable_routes_agree(self) -> bool:
        return self.observable == self.direct_observable


def behavioral_ctrl_obs(r: Realization, part_f: Sequence[str],
                        part_f2: Sequence[str]) -> BehavioralReport:
    """Willems-style behavioral controllability/observability for a split.

    part_f and part_f2 are disjoint constraint sets with no direct edges
    between them; the remainder fragment sits in the middle.  The primary
    flags evaluate the product conditions on the middle fragment's boundary;
    the direct flags evaluate the defining projection/cross-section product
    identities on the code itself.
    """
    set_f, set_f2 = set(part_f), set(part_f2)
    if set_f & set_f2:
        raise FragmentsOverlap("fragments share constraints")
    rest = set(r.constraints) - set_f - set_f2
    if not set_f or not set_f2 or not rest:
        raise FragmentsOverlap("split must leave two fragments and a remainder")
    for j in r.internal_states():
        ends = {cl for cl, _ in r.slots[j]}
        if ends & set_f and ends & set_f2:
            raise FragmentsOverlap(
                f"edge {j!r} connects the two fragments directly")

    crossing = [j for j in r.internal_states()
                if len({cl for cl, _ in r.slots[j]}
                       & (set_f | set_f2)) == 1
                and len({cl for cl, _ in r.slots[j]} & rest) >= 1]
    folded = r
    for j in sorted(crossing, key=sort_key):
        folded = folded.fold_edge_iso(j)
    heads = folded.head_labels(crossing)

    def fragment_of(subset: set[str]) -> tuple[Realization, dict[str, str]]:
        cut_here = [j for j in crossing
                    if any(cl in subset for cl, _ in folded.slots[j])]
        frag = folded._fragment_for(subset, set(cut_here), heads)
        label_of_edge = {}
        for j in cut_here:
            (tc, _), _ = folded.slots[j]
            label_of_edge[j] = j if tc in subset else heads[j]
        return frag, label_of_edge

    frag_f, lab_f = fragment_of(set_f)
    frag_f2, lab_f2 = fragment_of(set_f2)
    frag_mid, lab_mid = fragment_of(rest)

    def boundary_block(frag: Realization, label_of_edge: dict[str, str],
                       edges: list[str]) -> tuple[CodeSubgroup, CodeSubgroup]:
        ext = frag.external_behavior()
        labels = [label_of_edge[j] for j in edges]
        rename = {label_of_edge[j]: ("e", j) for j in edges}
        order = [("e", j) for j in edges]
        proj = ext.project(labels).renamed(rename).permuted(order)
        cross = ext.cross_section(labels).renamed(rename).permuted(order)
        return proj, cross

    edges_f = sorted([j for j in crossing if lab_f.get(j)], key=sort_key)
    edges_f2 = sorted([j for j in crossing if lab_f2.get(j)], key=sort_key)
    sbar_f, slow_f = boundary_block(frag_f, lab_f, edges_f)
    sbar_f2, slow_f2 = boundary_block(frag_f2, lab_f2, edges_f2)
    mid_proj, mid_cross = boundary_block(frag_mid, lab_mid, edges_f + edges_f2)

    order = [("e", j) for j in edges_f + edges_f2]
    prod_bar = product_subgroup(sbar_f, sbar_f2).permuted(order)
    prod_low = product_subgroup(slow_f, slow_f2).permuted(order)
    controllable = mid_proj.contains_subgroup(prod_bar)
    observable = prod_low.contains_subgroup(mid_cross)

    code = r.code()
    syms_f = sorted((a for a in r.symbols
                     if r.slots[a][0][0] in set_f), key=sort_key)
    syms_f2 = sorted((a for a in r.symbols
                      if r.slots[a][0][0] in set_f2), key=sort_key)
    both = syms_f + syms_f2
    direct_ctrl = (code.project(both).permuted(both)
                   == product_subgroup(code.project(syms_f),
                                       code.project(syms_f2)).permuted(both))
    direct_obs = (code.cross_section(both).permuted(both)
                  == product_subgroup(code.cross_section(syms_f),
                                      code.cross_section(syms_f2)).permuted(both))
    return BehavioralReport(controllable, observable, direct_ctrl, direct_obs)


# -- state-trimness at a non-cut edge ---------------------------------------------


@dataclass
class StateTrimReport:
    """Classification at one non-cut edge, in the collapsed one-constraint view.

    The realization is regarded as the single constraint C^(\\j) (the cut
    fragment's external behavior) closed by an equality edge on S_j, so
    `observable` and `controllable` refer to that view.
    """

    edge: str
    state_trim: bool
    dual_state_trim: bool
    unobservable_transitions: CodeSubgroup  # U^(\j) over (S_j, S_j)
    fragment_ext_observable: bool
    fragment_ext_controllable: bool
    observable: bool
    controllable: bool

    @property
    def theorem_obs_holds(self) -> bool:
        return self.fragment_ext_observable == (
            self.dual_state_trim and self.observable)

    @property
    def theorem_ctrl_holds(self) -> bool:
        return self.fragment_ext_controllable == (
            self.state_trim and self.controllable)


def state_trim_status(r: Realization, edge: str) -> StateTrimReport:
    """Classify the unobservable transition space of the fragment cut at `edge`.

    The edge must not be a cut set.  Also verifies both parts of the
    state-trimness theorem on this instance.
    """
    if edge not in r.states or edge in set(r.boundary):
        raise NotAStateEdge(f"{edge!r} is not an internal state edge")
    if is_cut_edge(r, edge):
        raise EdgeIsCutSet(f"cutting {edge!r} would disconnect the realization")
    folded = r.fold_edge_iso(edge)
    frag = folded.cut([edge])[0]
    heads = folded.head_labels([edge])
    tail_lab, head_lab = edge, heads[edge]
    ext = frag.external_behavior()
    utrans = ext.cross_section([tail_lab, head_lab])

    alpha = folded.states[edge].alphabet
    pair_space = utrans.ambient
    diag = CodeSubgroup(pair_space, [
        row + row for row in _alphabet_basis(alpha)])
    dual_state_trim = diag.contains_subgroup(utrans)
    observable = utrans.intersect(diag).is_trivial

    behavior = folded.behavior_bundle().behavior
    state_trim = behavior.project([("s", edge)]).order == alpha.order

    # controllable subspace of the collapsed view: the difference image of
    # the fragment's boundary pairs
    pair_proj = ext.project([tail_lab, head_lab])
    diff_rows = []
    for row in pair_proj.rows:
        s, sp = row[:alpha.width], row[alpha.width:]
        diff_rows.append(tuple((a - b) % m
                               for a, b, m in zip(s, sp, alpha.moduli)))
    diff_space = ProductSpace([(edge, alpha)])
    controllable = CodeSubgroup(diff_space, diff_rows).order == alpha.order

    frag_rep = obs_ctrl(frag)
    return StateTrimReport(
        edge=edge,
        state_trim=state_trim,
        dual_state_trim=dual_state_trim,
        unobservable_transitions=utrans,
        fragment_ext_observable=frag_rep.ext_observable,
        fragment_ext_controllable=frag_rep.ext_controllable,
        observable=observable,
        controllable=controllable,
    )


def _alphabet_basis(alpha: Alphabet) -> list[tuple[int, ...]]:
    rows = []
    for i in range(alpha.width):
        e = [0] * alpha.width
        e[i] = 1
        rows.append(tuple(e))
    return rows
