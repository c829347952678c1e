"""Minimization of cycle-free realizations and internal state recovery.

Iterated local reduction provably minimizes a cycle-free realization: at the
fixpoint every constraint is trim and proper, and every state space order
equals the quotient order computed from the code itself on both sides of
its cut.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alphabets import sort_key
from .analysis import reduce_to_fixpoint
from .errors import (
    Disconnected,
    NotCycleFree,
    NotInExternalBehavior,
    NotInternallyProper,
)
from .graphcore import cyclomatic_number
from .realization import Configuration, Realization
from .subgroups import CodeSubgroup


def minimize_cycle_free(r: Realization) -> Realization:
    """Fixpoint of local reductions; minimal by the trim+proper theorem."""
    r.require_valid()
    if not r.is_connected:
        raise Disconnected("minimization requires a connected realization")
    if cyclomatic_number(r) != 0:
        raise NotCycleFree(
            "realization has cycles; use two_core / iterative decoding instead")
    return reduce_to_fixpoint(r)


def state_orders(r: Realization) -> dict[str, int]:
    return {j: r.states[j].alphabet.order
            for j in sorted(r.internal_states(), key=sort_key)}


@dataclass
class StateSpaceTheoremReport:
    edge: str
    state_order: int
    side_orders: tuple[int, int]       # |C_restricted to each side| quotients
    iso_pairs: CodeSubgroup | None     # graph of the induced side-to-side iso

    @property
    def passed(self) -> bool:
        ok = all(o == self.state_order for o in self.side_orders)
        if self.iso_pairs is not None:
            ok = ok and self.iso_pairs.order == self.state_order
        return ok


def verify_state_space_theorem(r_min: Realization, edge: str) -> StateSpaceTheoremReport:
    """Check |S_j| against the code-level quotients on both sides of the cut.

    Both side quotients are computed directly from the realized code (its
    projection and cross-section on each side's symbol block), independent
    of the state machinery; the subdirect reconstruction of the code through
    the quotient isomorphism is checked as well.
    """
    if cyclomatic_number(r_min) != 0 or not r_min.is_connected:
        raise NotCycleFree("state space theorem applies to cycle-free realizations")
    folded = r_min.fold_edge_iso(edge)
    sides = folded.cut([edge])
    if len(sides) != 2:
        raise NotCycleFree(f"edge {edge!r} does not split the realization")
    code = r_min.code()
    quots = []
    blocks = []
    for frag in sides:
        syms = sorted(frag.symbols, key=sort_key)
        blocks.append(syms)
        proj = code.project(syms)
        cross = code.cross_section(syms)
        quots.append(proj.quotient_by(cross))
    side_orders = tuple(q.order for q in quots)
    # pairs of quotient classes traced out by the code
    from .alphabets import ProductSpace
    pair_amb = ProductSpace([(("q", 0), quots[0].alphabet),
                             (("q", 1), quots[1].alphabet)])
    rows = []
    for row in code.rows:
        parts = []
        for syms, q in zip(blocks, quots):
            cols = code.ambient.columns(syms)
            parts.append(q.project(tuple(row[c] for c in cols)))
        rows.append(parts[0] + parts[1])
    pairs = CodeSubgroup(pair_amb, rows)
    # the pair subgroup is the graph of an isomorphism iff trim+proper both sides
    graph_ok = True
    for lab, alpha in pair_amb.factors:
        if pairs.project([lab]).order != alpha.order:
            graph_ok = False
        if not pairs.cross_section([lab]).is_trivial:
            graph_ok = False
    return StateSpaceTheoremReport(
        edge=edge,
        state_order=r_min.states[edge].alphabet.order,
        side_orders=side_orders,
        iso_pairs=pairs if graph_ok else None,
    )


def recover_internal_states(f: Realization, assignment: Configuration) -> Configuration:
    """Unique internal state values of an internally proper cycle-free fragment.

    assignment maps every symbol and boundary variable to its value; the
    returned configuration adds every internal state (tail coordinates).
    Peels leaf constraints: properness determines each external state of a
    leaf from its other values.
    """
    f.require_valid()
    if cyclomatic_number(f) != 0 or not f.is_connected:
        raise NotCycleFree("state recovery requires a connected cycle-free fragment")
    internal = set(f.internal_states())
    for cl, con in f.constraints.items():
        # properness is needed exactly at the slots being solved for
        for i, v in enumerate(con.vars):
            if v not in internal:
                continue
            lab = con.code.ambient.labels[i]
            if not con.code.cross_section([lab]).is_trivial:
                raise NotInternallyProper(
                    f"constraint {cl!r} is not proper at its state slot {lab!r}")
    ext = f.external_behavior()
    word = []
    for lab in ext.ambient.labels:
        if lab not in assignment:
            raise NotInExternalBehavior(f"missing value for {lab!r}")
        word.extend(assignment[lab])
    if not ext.contains(word):
        raise NotInExternalBehavior("assignment is not a valid external configuration")

    folded = f
    for j in f.internal_states():
        folded = folded.fold_edge_iso(j)
    known: Configuration = {v: tuple(assignment[v]) for v in assignment}
    remaining = dict(folded.constraints)
    while remaining:
        progressed = False
        for cl in sorted(remaining, key=sort_key):
            con = remaining[cl]
            unknown = [v for v in dict.fromkeys(con.vars) if v not in known]
            if len(unknown) > 1:
                continue
            if not unknown:
                w = tuple(x for v in con.vars for x in known[v])
                assert con.code.contains(w), "peeled values violate a constraint"
                del remaining[cl]
                progressed = True
                break
            v = unknown[0]
            amb = con.code.ambient
            fixed_labels = [amb.labels[i] for i, vv in enumerate(con.vars) if vv != v]
            fixed_vals = [x for i, vv in enumerate(con.vars) if vv != v
                          for x in known[vv]]
            sol = con.code.lift_prefix(fixed_labels, fixed_vals)
            assert sol is not None, "peeling failed on a valid configuration"
            i = con.vars.index(v)
            a, b = amb.span(amb.labels[i])
            known[v] = tuple(sol[a:b])
            del remaining[cl]
            progressed = True
            break
        if not progressed:
            raise NotCycleFree("peeling stalled; fragment is not a tree")
    return known
