"""JSON file format for realizations, priors, and marginal output.

Top-level keys: `alphabets` (named), `symbols`, `states` (with optional
`iso` matrix for generalized edges), `constraints` (generator rows are
concatenated coordinate tuples in `vars` order), and optional `boundary`.
Generator entries must be canonical residues; out-of-range values are
rejected rather than silently reduced.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .alphabets import Alphabet, ProductSpace, sort_key
from .decode import Message
from .errors import NormgraphError, UnknownLabel
from .homs import Homomorphism
from .realization import Constraint, Realization, StateVar
from .subgroups import CodeSubgroup


class ParseError(NormgraphError):
    """Malformed realization or priors document."""


def _alphabet_to_json(alpha: Alphabet) -> dict:
    if alpha.kind == "field":
        return {"field": alpha.moduli[0] if alpha.moduli else 2,
                "dim": alpha.width}
    return {"cyclic": list(alpha.moduli)}


def _alphabet_from_json(obj: Any) -> Alphabet:
    if not isinstance(obj, dict):
        raise ParseError(f"alphabet entry must be an object, got {obj!r}")
    if "field" in obj:
        return Alphabet("field", (obj["field"],) * obj.get("dim", 1))
    if "cyclic" in obj:
        return Alphabet("group", tuple(obj["cyclic"]))
    raise ParseError(f"alphabet needs 'field' or 'cyclic': {obj!r}")


def realization_to_json(r: Realization) -> dict:
    """JSON-ready document; constraint order is preserved (it is semantic)."""
    names: dict[Alphabet, str] = {}

    def name_of(alpha: Alphabet) -> str:
        if alpha not in names:
            names[alpha] = f"A{len(names)}"
        return names[alpha]

    symbols = [{"id": k, "alphabet": name_of(r.symbols[k])}
               for k in sorted(r.symbols, key=sort_key)]
    states = []
    for j in sorted(r.states, key=sort_key):
        sv = r.states[j]
        entry: dict[str, Any] = {"id": j, "alphabet": name_of(sv.alphabet)}
        if sv.iso is not None:
            entry["iso"] = [list(row) for row in sv.iso.matrix]
        states.append(entry)
    constraints = []
    for cl, con in r.constraints.items():
        constraints.append({
            "id": cl,
            "vars": list(con.vars),
            "generators": [list(row) for row in con.code.rows],
        })
    doc = {
        "alphabets": {name: _alphabet_to_json(alpha)
                      for alpha, name in names.items()},
        "symbols": symbols,
        "states": states,
        "constraints": constraints,
    }
    if r.boundary:
        doc["boundary"] = list(r.boundary)
    return doc


def realization_from_json(doc: Any) -> Realization:
    if not isinstance(doc, dict):
        raise ParseError("document root must be an object")
    try:
        alphabets = {name: _alphabet_from_json(entry)
                     for name, entry in doc.get("alphabets", {}).items()}
        symbols: dict[str, Alphabet] = {}
        for entry in doc.get("symbols", []):
            symbols[entry["id"]] = alphabets[entry["alphabet"]]
        states: dict[str, StateVar] = {}
        for entry in doc.get("states", []):
            alpha = alphabets[entry["alphabet"]]
            iso = None
            if "iso" in entry:
                iso = Homomorphism(alpha, alpha,
                                   tuple(tuple(row) for row in entry["iso"]))
            states[entry["id"]] = StateVar(alpha, iso)
        constraints: dict[str, Constraint] = {}
        for entry in doc.get("constraints", []):
            vars_ = tuple(entry["vars"])
            factors = []
            for i, v in enumerate(vars_):
                if v in symbols:
                    factors.append((i, symbols[v]))
                elif v in states:
                    factors.append((i, states[v].alphabet))
                else:
                    raise UnknownLabel(f"constraint {entry['id']!r} references "
                                       f"unknown variable {v!r}")
            amb = ProductSpace(factors)
            code = CodeSubgroup(amb, [tuple(row) for row in entry["generators"]])
            constraints[entry["id"]] = Constraint(vars_, code)
        boundary = doc.get("boundary", [])
        return Realization(symbols, states, constraints, boundary)
    except (KeyError, TypeError, ValueError, NormgraphError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed realization document: {exc}") from exc


def dump_realization(r: Realization, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(realization_to_json(r), fh, indent=1)
        fh.write("\n")


def load_realization(path: str) -> Realization:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    return realization_from_json(doc)


def _weight(value: Any, exact: bool):
    if isinstance(value, str):
        w = Fraction(value)
    elif isinstance(value, Fraction):
        w = value
    elif isinstance(value, int):
        w = Fraction(value)
    else:
        w = Fraction(str(value))
    return w if exact else float(w)


def load_priors(path: str, r: Realization, exact: bool) -> dict[str, Message]:
    """Priors keyed by symbol id; weights follow the canonical enumeration.

    Decimal literals are read exactly (0.9 means 9/10) so that exact-mode
    decoding stays exact.
    """
    with open(path) as fh:
        try:
            doc = json.load(fh, parse_float=str)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("priors document must map symbol ids to weight lists")
    out: dict[str, Message] = {}
    for key, weights in doc.items():
        if key not in r.symbols:
            raise ParseError(f"priors reference unknown symbol {key!r}")
        alpha = r.symbols[key]
        if len(weights) != alpha.order:
            raise ParseError(
                f"prior for {key!r} has {len(weights)} weights, "
                f"alphabet order is {alpha.order}")
        out[key] = Message(alpha, tuple(_weight(w, exact) for w in weights))
    return out


def marginals_to_json(marginals: dict[str, Message], exact: bool) -> dict:
    out = {}
    for key in sorted(marginals, key=sort_key):
        msg = marginals[key]
        if exact:
            out[key] = [str(w) for w in msg.weights]
        else:
            out[key] = [float(w) for w in msg.weights]
    return out


def graph_to_dot(r: Realization, name: str = "realization") -> str:
    """DOT description: constraint vertices, state edges, half-edge markers."""
    lines = [f'graph "{name}" {{']
    for cl in r.constraints:
        lines.append(f'  "{cl}" [shape=box];')
    for j in sorted(r.internal_states(), key=sort_key):
        ends = r.slots[j]
        if len(ends) != 2:
            continue
        (tc, _), (hc, _) = ends
        style = ""
        if r.states[j].iso is not None:
            style = ", style=bold"
        lines.append(f'  "{tc}" -- "{hc}" [label="{j}"{style}];')
    for k in sorted(r.symbols, key=sort_key):
        (cl, _), = r.slots[k]
        lines.append(f'  "sym:{k}" [shape=point, xlabel="{k}"];')
        lines.append(f'  "{cl}" -- "sym:{k}" [style=dashed];')
    for b in r.boundary:
        (cl, _), = r.slots[b]
        lines.append(f'  "ext:{b}" [shape=point, xlabel="{b}"];')
        lines.append(f'  "{cl}" -- "ext:{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
