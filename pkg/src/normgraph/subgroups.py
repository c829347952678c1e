"""Subgroups of finite abelian products in canonical generator-matrix form.

A CodeSubgroup lives in a ProductSpace whose coordinates carry mixed moduli
m_i.  Internally every coordinate is lifted into Z_M (M = lcm of the moduli)
by scaling with M/m_i; the Howell normal form of the lifted generator matrix
is the canonical representation, so two equal subgroups are bit-identical.
All set operations (orthogonal, projection, cross-section, sum,
intersection, quotients) are exact.
"""

from __future__ import annotations

from typing import Any, Iterator, Sequence

from . import zmod
from .alphabets import (
    ENUMERATION_CAP,
    Alphabet,
    Element,
    ProductSpace,
    TRIVIAL,
)
from .errors import (
    AmbientMismatch,
    BadPartition,
    NotASubgroup,
    TooLargeToEnumerate,
)
from .intmat import hermite_form, mat_mul, smith_form, solve_upper_triangular


class CodeSubgroup:
    """A subgroup of a ProductSpace, held as a canonical generator matrix."""

    __slots__ = ("ambient", "rows", "_lifted", "_order", "_elem_cache")

    def __init__(self, ambient: ProductSpace, rows: Sequence[Sequence[int]]):
        """Canonicalize the subgroup generated by the given ambient rows."""
        self.ambient = ambient
        checked = [ambient.check_row(r) for r in rows]
        M = ambient.lcm_modulus
        lifted = [self._lift(r) for r in checked]
        hf = zmod.howell_form(lifted, M, ambient.width)
        self._lifted = tuple(tuple(r) for r in hf)
        self.rows: tuple[Element, ...] = tuple(self._unlift(r) for r in hf)
        self._order = zmod.span_order(self._lifted, M) if M > 1 else 1
        self._elem_cache: tuple[Element, ...] | None = None

    # -- lifting between ambient residues and Z_M coordinates ----------------

    def _lift(self, x: Sequence[int]) -> list[int]:
        M = self.ambient.lcm_modulus
        return [v * (M // m) for v, m in zip(x, self.ambient.moduli)]

    def _unlift(self, y: Sequence[int]) -> Element:
        M = self.ambient.lcm_modulus
        return tuple(v // (M // m) for v, m in zip(y, self.ambient.moduli))

    # -- basic queries --------------------------------------------------------

    @property
    def order(self) -> int:
        return self._order

    @property
    def is_trivial(self) -> bool:
        return self._order == 1

    @property
    def is_full(self) -> bool:
        return self._order == self.ambient.order

    def log_order(self, p: int) -> int:
        """Dimension over GF(p) when the order is a power of p."""
        n = 0
        o = self._order
        while o > 1:
            if o % p:
                raise ValueError(f"order {self._order} is not a power of {p}")
            o //= p
            n += 1
        return n

    def contains(self, x: Sequence[int]) -> bool:
        if len(x) != self.ambient.width:
            return False
        return zmod.member(self._lift(self.ambient.reduce(x)), self._lifted,
                           self.ambient.lcm_modulus)

    def contains_subgroup(self, other: "CodeSubgroup") -> bool:
        self._check_same_ambient(other)
        return all(self.contains(r) for r in other.rows)

    def elements(self, cap: int = ENUMERATION_CAP) -> Iterator[Element]:
        """Yield each element exactly once (chain coset decomposition)."""
        if self._order > cap:
            raise TooLargeToEnumerate(
                f"subgroup of order {self._order} exceeds cap {cap}")
        M = self.ambient.lcm_modulus
        for y in zmod.span_elements(self._lifted, M, self.ambient.width):
            yield self._unlift(y)

    def cached_elements(self, cap: int = ENUMERATION_CAP) -> tuple[Element, ...]:
        """Tuple of all elements, memoized (sum-product inner loop)."""
        if self._elem_cache is None:
            self._elem_cache = tuple(self.elements(cap))
        return self._elem_cache

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, CodeSubgroup)
                and self.ambient == other.ambient
                and self.rows == other.rows)

    def __hash__(self) -> int:
        return hash((self.ambient, self.rows))

    def __repr__(self) -> str:
        return (f"CodeSubgroup(order={self._order}, "
                f"ambient_order={self.ambient.order}, rows={len(self.rows)})")

    def _check_same_ambient(self, other: "CodeSubgroup") -> None:
        if self.ambient != other.ambient:
            raise AmbientMismatch("subgroups live in different ambients")

    # -- set operations -------------------------------------------------------

    def sum(self, other: "CodeSubgroup") -> "CodeSubgroup":
        self._check_same_ambient(other)
        return CodeSubgroup(self.ambient, list(self.rows) + list(other.rows))

    def intersect(self, other: "CodeSubgroup") -> "CodeSubgroup":
        """Exact intersection via the relation module of the two generator sets."""
        self._check_same_ambient(other)
        M = self.ambient.lcm_modulus
        if M == 1:
            return CodeSubgroup(self.ambient, [])
        g1 = [list(r) for r in self._lifted]
        g2 = [list(r) for r in other._lifted]
        k1, k2 = len(g1), len(g2)
        n = self.ambient.width
        # kernel of (z1, z2) -> z1*G1 - z2*G2; the z1 part yields a member
        stacked = g1 + [[-v % M for v in r] for r in g2]
        ker = zmod.kernel(lambda i: stacked[i], n, k1 + k2, M)
        rows = []
        for z in ker:
            vec = [0] * n
            for c, g in zip(z[:k1], g1):
                if c:
                    vec = [(x + c * y) % M for x, y in zip(vec, g)]
            rows.append(self._unlift(vec))
        return CodeSubgroup(self.ambient, rows)

    def orthogonal(self) -> "CodeSubgroup":
        """Orthogonal subgroup under <x,y> = sum x_i y_i / m_i, in the same ambient."""
        M = self.ambient.lcm_modulus
        n = self.ambient.width
        if M == 1 or n == 0:
            return CodeSubgroup(self.ambient, [])
        lifted = self._lifted

        def column(i: int) -> list[int]:
            return [row[i] for row in lifted]

        ker = zmod.kernel(column, len(lifted), n, M)
        rows = [self.ambient.reduce(z) for z in ker]
        return CodeSubgroup(self.ambient, rows)

    def project(self, labels: Sequence[Any]) -> "CodeSubgroup":
        """Projection onto the given factors (result ambient keeps their order)."""
        cols = self.ambient.columns(labels)
        sub = self.ambient.subspace(labels)
        rows = [tuple(r[c] for c in cols) for r in self.rows]
        return CodeSubgroup(sub, rows)

    def cross_section(self, labels: Sequence[Any]) -> "CodeSubgroup":
        """Elements with zeros outside the given factors, restricted to them."""
        part_cols = self.ambient.columns(labels)
        other_cols = [c for c in range(self.ambient.width) if c not in set(part_cols)]
        sub = self.ambient.subspace(labels)
        M = self.ambient.lcm_modulus
        if M == 1:
            return CodeSubgroup(sub, [])
        permuted = [
            [r[c] for c in other_cols] + [r[c] for c in part_cols]
            for r in self._lifted
        ]
        hf = zmod.howell_form(permuted, M, self.ambient.width)
        cut = len(other_cols)
        rows = []
        for r in hf:
            if any(r[:cut]):
                continue
            scaled = [
                v // (M // m)
                for v, m in zip(r[cut:], (self.ambient.moduli[c] for c in part_cols))
            ]
            rows.append(scaled)
        return CodeSubgroup(sub, rows)

    def lift_prefix(self, labels: Sequence[Any], values: Sequence[int]) -> Element | None:
        """Some element of the subgroup matching the given factor values, or None."""
        part_cols = self.ambient.columns(labels)
        other_cols = [c for c in range(self.ambient.width) if c not in set(part_cols)]
        M = self.ambient.lcm_modulus
        if M == 1:
            return self.ambient.zero
        # values are concatenated coordinates of the labeled factors, ambient order
        sub = self.ambient.subspace(labels)
        target = sub.check_row(values)
        permuted = [
            [r[c] for c in part_cols] + [r[c] for c in other_cols]
            for r in self._lifted
        ]
        hf = zmod.howell_form(permuted, M, self.ambient.width)
        cut = len(part_cols)
        v = [t * (M // m) for t, m in zip(target, sub.moduli)] + [0] * len(other_cols)
        for row in hf:
            j = zmod._lead(row)
            if j >= cut:
                break
            d = row[j]
            if v[j] == 0:
                continue
            if v[j] % d:
                return None
            q = v[j] // d
            v = [(x - q * y) % M for x, y in zip(v, row)]
        if any(v[:cut]):
            return None
        full = [0] * self.ambient.width
        for i, c in enumerate(part_cols):
            full[c] = target[i]
        for i, c in enumerate(other_cols):
            m = self.ambient.moduli[c]
            full[c] = ((-v[cut + i]) % M) // (M // m)
        assert self.contains(full)
        return tuple(full)

    def permuted(self, new_labels: Sequence[Any]) -> "CodeSubgroup":
        """Same subgroup with ambient factors reordered as given."""
        if set(new_labels) != set(self.ambient.labels) or len(new_labels) != len(
                self.ambient.labels):
            raise BadPartition("permutation must list every factor label once")
        cols: list[int] = []
        factors = []
        for lab in new_labels:
            a, b = self.ambient.span(lab)
            cols.extend(range(a, b))
            factors.append((lab, self.ambient.alphabet(lab)))
        amb = ProductSpace(factors)
        return CodeSubgroup(amb, [tuple(r[c] for c in cols) for r in self.rows])

    def renamed(self, mapping: dict[Any, Any]) -> "CodeSubgroup":
        """Same subgroup with factor labels renamed through the mapping."""
        factors = [(mapping.get(lab, lab), alpha)
                   for lab, alpha in self.ambient.factors]
        return CodeSubgroup(ProductSpace(factors), self.rows)

    # -- quotients -------------------------------------------------------------

    def quotient_by(self, sub: "CodeSubgroup") -> "QuotientMap":
        """Structure of self/sub as an invariant-factor group with maps."""
        self._check_same_ambient(sub)
        if not self.contains_subgroup(sub):
            raise NotASubgroup("quotient requires sub to be contained in self")
        return QuotientMap(self, sub)

    def quotient_transversal(self, sub: "CodeSubgroup") -> list[Element]:
        """Lexicographically smallest representative of each coset of sub in self.

        The list is ordered by the canonical enumeration of the quotient
        group, so the zero coset (representative 0) comes first.
        """
        q = self.quotient_by(sub)
        best: dict[Element, Element] = {}
        for x in self.elements():
            key = q.project(x)
            if key not in best or x < best[key]:
                best[key] = x
        return [best[key] for key in q.alphabet.elements()]


class QuotientMap:
    """Invariant-factor structure of C/D with natural map and a section.

    The quotient alphabet keeps only the nontrivial invariant factors
    f_i > 1 in divisibility order, which makes the alphabet of a quotient a
    canonical first-class Alphabet.
    """

    def __init__(self, group: CodeSubgroup, sub: CodeSubgroup):
        self.group = group
        self.sub = sub
        amb = group.ambient
        n = amb.width
        if n == 0:
            self.alphabet = TRIVIAL
            self._kept: list[tuple[int, int]] = []
            self._basis_c: list[list[int]] = []
            self._v: list[list[int]] = []
            self._bprime: list[list[int]] = []
            return
        mod_rows = [[amb.moduli[i] if j == i else 0 for j in range(n)]
                    for i in range(n)]
        basis_c = hermite_form([list(r) for r in group.rows] + mod_rows, n)
        basis_d = hermite_form([list(r) for r in sub.rows] + mod_rows, n)
        q = [solve_upper_triangular(row, basis_c) for row in basis_d]
        s, _, v, vinv = smith_form(q)
        self._basis_c = basis_c
        self._v = v
        self._bprime = mat_mul(vinv, basis_c)
        factors = [s[i][i] for i in range(n)]
        self._kept = [(i, f) for i, f in enumerate(factors) if f > 1]
        self.alphabet = Alphabet("group", tuple(f for _, f in self._kept))

    @property
    def order(self) -> int:
        return self.alphabet.order

    def project(self, x: Sequence[int]) -> Element:
        """Natural map C -> C/D in quotient coordinates."""
        if not self._kept:
            return ()
        w = solve_upper_triangular(list(x), self._basis_c)
        wp = [sum(w[i] * self._v[i][j] for i in range(len(w)))
              for j in range(len(w))]
        return tuple(wp[i] % f for i, f in self._kept)

    def lift(self, q: Sequence[int]) -> Element:
        """A coset representative for quotient coordinates q (a section)."""
        amb = self.group.ambient
        x = [0] * amb.width
        for (i, _), c in zip(self._kept, q):
            if c:
                row = self._bprime[i]
                x = [a + c * b for a, b in zip(x, row)]
        return amb.reduce(x)


# -- module-level constructors and helpers ------------------------------------


def _ambient_basis(ambient: ProductSpace) -> list[Element]:
    rows = []
    for i in range(ambient.width):
        r = [0] * ambient.width
        r[i] = 1
        rows.append(tuple(r))
    return rows


def zero_subgroup(ambient: ProductSpace) -> CodeSubgroup:
    return CodeSubgroup(ambient, [])


def full_subgroup(ambient: ProductSpace) -> CodeSubgroup:
    return CodeSubgroup(ambient, _ambient_basis(ambient))


def canonicalize(rows: Sequence[Sequence[int]], ambient: ProductSpace) -> CodeSubgroup:
    """The subgroup generated by rows, in canonical form."""
    return CodeSubgroup(ambient, rows)


def from_elements(ambient: ProductSpace, elements: Sequence[Sequence[int]]) -> CodeSubgroup:
    """Canonical subgroup generated by explicit elements (oracle helper)."""
    return CodeSubgroup(ambient, elements)


def product_subgroup(a: CodeSubgroup, b: CodeSubgroup) -> CodeSubgroup:
    """External direct product in the concatenated ambient."""
    shared = set(a.ambient.labels) & set(b.ambient.labels)
    if shared:
        raise AmbientMismatch(f"product factors share labels {shared}")
    amb = ProductSpace(list(a.ambient.factors) + list(b.ambient.factors))
    wa, wb = a.ambient.width, b.ambient.width
    rows = [tuple(r) + (0,) * wb for r in a.rows]
    rows += [(0,) * wa + tuple(r) for r in b.rows]
    return CodeSubgroup(amb, rows)


def cylinder(ambient: ProductSpace, parts: dict[Any, CodeSubgroup]) -> CodeSubgroup:
    """Product of given per-factor subgroups with full groups elsewhere.

    Each value in parts must be a subgroup whose ambient is the single
    corresponding factor of the big ambient.
    """
    rows: list[Element] = []
    n = ambient.width
    for lab, alpha in ambient.factors:
        a, b = ambient.span(lab)
        if lab in parts:
            sub = parts[lab]
            if sub.ambient.moduli != alpha.moduli:
                raise AmbientMismatch(f"cylinder part at {lab!r} has wrong alphabet")
            for r in sub.rows:
                row = [0] * n
                row[a:b] = list(r)
                rows.append(tuple(row))
        else:
            for i in range(a, b):
                row = [0] * n
                row[i] = 1
                rows.append(tuple(row))
    return CodeSubgroup(ambient, rows)


class FtspDecomposition:
    """Two interface nodes and the quotient isomorphism of a subdirect product."""

    def __init__(self, node_a: CodeSubgroup, iso_pairs: CodeSubgroup,
                 node_b: CodeSubgroup, quot_a: QuotientMap, quot_b: QuotientMap):
        self.node_a = node_a
        self.iso_pairs = iso_pairs
        self.node_b = node_b
        self.quot_a = quot_a
        self.quot_b = quot_b


def ftsp_decompose(code: CodeSubgroup, part_a: Sequence[Any],
                   part_b: Sequence[Any]) -> FtspDecomposition:
    """Interface-node decomposition of C <= A x B.

    node_a is {(a, a + C:A)} over A x (C|A / C:A), node_b likewise for B,
    and iso_pairs is the graph of the quotient isomorphism
    C|A/C:A <-> C|B/C:B on quotient coordinates.
    """
    labels = list(code.ambient.labels)
    if sorted(map(repr, list(part_a) + list(part_b))) != sorted(map(repr, labels)):
        raise BadPartition("part_a and part_b must partition the ambient factors")
    proj_a = code.project(part_a)
    cross_a = code.cross_section(part_a)
    proj_b = code.project(part_b)
    cross_b = code.cross_section(part_b)
    quot_a = proj_a.quotient_by(cross_a)
    quot_b = proj_b.quotient_by(cross_b)

    def interface(proj: CodeSubgroup, quot: QuotientMap, tag: Any) -> CodeSubgroup:
        amb = ProductSpace(list(proj.ambient.factors) + [(tag, quot.alphabet)])
        rows = [tuple(r) + quot.project(r) for r in proj.rows]
        return CodeSubgroup(amb, rows)

    node_a = interface(proj_a, quot_a, ("quot", "a"))
    node_b = interface(proj_b, quot_b, ("quot", "b"))
    pair_amb = ProductSpace([(("quot", "a"), quot_a.alphabet),
                             (("quot", "b"), quot_b.alphabet)])
    pair_rows = []
    cols_a = code.ambient.columns(part_a)
    cols_b = code.ambient.columns(part_b)
    for r in code.rows:
        ra = tuple(r[c] for c in cols_a)
        rb = tuple(r[c] for c in cols_b)
        pair_rows.append(quot_a.project(ra) + quot_b.project(rb))
    iso_pairs = CodeSubgroup(pair_amb, pair_rows)
    return FtspDecomposition(node_a, iso_pairs, node_b, quot_a, quot_b)
