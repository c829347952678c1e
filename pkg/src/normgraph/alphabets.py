"""Finite abelian value domains: vector spaces GF(p)^k and products of cyclic groups.

Every alphabet is described by its tuple of coordinate moduli; a GF(p)^k
alphabet is the special case where all k moduli equal the prime p.  Elements
are plain tuples of canonical residues.  A ProductSpace is an ordered, labeled
concatenation of alphabets and is the ambient for every subgroup in the
library.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Any, Iterator, Sequence

from .errors import BadPartition, RowOutOfAmbient, TooLargeToEnumerate, UnknownLabel

ENUMERATION_CAP = 2**20

Element = tuple[int, ...]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Alphabet:
    """A finite abelian alphabet, either GF(p)^k or Z_{m1} x ... x Z_{mr}.

    kind is "field" or "group"; moduli is the per-coordinate modulus tuple
    ([p]*k for the field kind).  Equality is by (kind, moduli), so GF(2)^1
    and Z_2 are distinct alphabets of the same underlying group.
    """

    kind: str
    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("field", "group"):
            raise ValueError(f"unknown alphabet kind {self.kind!r}")
        if self.kind == "field":
            if len(set(self.moduli)) > 1:
                raise ValueError("field alphabet must have a single prime modulus")
            if self.moduli and not _is_prime(self.moduli[0]):
                raise ValueError(f"{self.moduli[0]} is not prime")
        else:
            for m in self.moduli:
                if m < 2:
                    raise ValueError(f"cyclic modulus {m} < 2")

    @property
    def width(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def zero(self) -> Element:
        return (0,) * self.width

    def contains(self, x: Sequence[int]) -> bool:
        return len(x) == self.width and all(
            0 <= v < m for v, m in zip(x, self.moduli)
        )

    def reduce(self, x: Sequence[int]) -> Element:
        """Reduce an integer tuple to canonical residues."""
        if len(x) != self.width:
            raise ValueError(f"expected {self.width} coordinates, got {len(x)}")
        return tuple(v % m for v, m in zip(x, self.moduli))

    def add(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def neg(self, x: Sequence[int]) -> Element:
        return tuple((-a) % m for a, m in zip(x, self.moduli))

    def elements(self) -> Iterator[Element]:
        """All elements in lexicographic coordinate order."""
        if self.order > ENUMERATION_CAP:
            raise TooLargeToEnumerate(f"alphabet of order {self.order}")
        return itertools.product(*(range(m) for m in self.moduli))

    def index(self, x: Sequence[int]) -> int:
        """Rank of x in the lexicographic enumeration (mixed-radix value)."""
        idx = 0
        for v, m in zip(x, self.moduli):
            idx = idx * m + v
        return idx

    def element_at(self, idx: int) -> Element:
        coords = []
        for m in reversed(self.moduli):
            coords.append(idx % m)
            idx //= m
        return tuple(reversed(coords))

    def __repr__(self) -> str:
        if self.kind == "field":
            p = self.moduli[0] if self.moduli else 0
            return f"GF({p})^{self.width}"
        return "Z" + "x".join(f"_{m}" for m in self.moduli) if self.moduli else "Z(trivial)"


def vector_space(p: int, k: int) -> Alphabet:
    return Alphabet("field", (p,) * k)


def cyclic_group(*moduli: int) -> Alphabet:
    return Alphabet("group", tuple(moduli))


TRIVIAL = Alphabet("group", ())


class ProductSpace:
    """Ordered labeled direct product of alphabets; the ambient of a subgroup.

    Labels are arbitrary hashable values (strings at the API surface, small
    tuples internally); they must be unique.  Coordinates of the product are
    the concatenated coordinates of the factors, in order.
    """

    def __init__(self, factors: Sequence[tuple[Any, Alphabet]]):
        labels = [lab for lab, _ in factors]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate factor labels in product space")
        self.factors: tuple[tuple[Any, Alphabet], ...] = tuple(factors)
        self.moduli: tuple[int, ...] = tuple(
            m for _, alpha in factors for m in alpha.moduli
        )
        self._ranges: dict[Any, tuple[int, int]] = {}
        pos = 0
        for lab, alpha in factors:
            self._ranges[lab] = (pos, pos + alpha.width)
            pos += alpha.width

    @property
    def labels(self) -> tuple[Any, ...]:
        return tuple(lab for lab, _ in self.factors)

    @property
    def width(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def lcm_modulus(self) -> int:
        return reduce(math.lcm, self.moduli, 1)

    @property
    def zero(self) -> Element:
        return (0,) * self.width

    def alphabet(self, label: Any) -> Alphabet:
        for lab, alpha in self.factors:
            if lab == label:
                return alpha
        raise UnknownLabel(f"no factor labeled {label!r}")

    def span(self, label: Any) -> tuple[int, int]:
        """Coordinate range [start, stop) of one factor."""
        try:
            return self._ranges[label]
        except KeyError:
            raise UnknownLabel(f"no factor labeled {label!r}") from None

    def columns(self, labels: Sequence[Any]) -> list[int]:
        """Flat coordinate indices of the given factors, in ambient order."""
        wanted = set(labels)
        for lab in labels:
            if lab not in self._ranges:
                raise UnknownLabel(f"no factor labeled {lab!r}")
        cols: list[int] = []
        for lab, _ in self.factors:
            if lab in wanted:
                a, b = self._ranges[lab]
                cols.extend(range(a, b))
        return cols

    def subspace(self, labels: Sequence[Any]) -> "ProductSpace":
        """Sub-product of the given factors, keeping ambient order."""
        wanted = set(labels)
        for lab in labels:
            if lab not in self._ranges:
                raise UnknownLabel(f"no factor labeled {lab!r}")
        return ProductSpace([(l, a) for l, a in self.factors if l in wanted])

    def split(self, part: Sequence[Any]) -> tuple["ProductSpace", "ProductSpace"]:
        """Bipartition into (part, complement); errors if part is not a subset."""
        wanted = set(part)
        if len(wanted) != len(list(part)):
            raise BadPartition("repeated labels in partition")
        inside = self.subspace(part)
        outside = ProductSpace(
            [(l, a) for l, a in self.factors if l not in wanted]
        )
        return inside, outside

    def contains(self, x: Sequence[int]) -> bool:
        return len(x) == self.width and all(
            0 <= v < m for v, m in zip(x, self.moduli)
        )

    def check_row(self, x: Sequence[int]) -> Element:
        if len(x) != self.width:
            raise RowOutOfAmbient(
                f"row has {len(x)} coordinates, ambient has {self.width}"
            )
        for v, m in zip(x, self.moduli):
            if not 0 <= v < m:
                raise RowOutOfAmbient(f"coordinate {v} out of range [0, {m})")
        return tuple(x)

    def reduce(self, x: Sequence[int]) -> Element:
        return tuple(v % m for v, m in zip(x, self.moduli))

    def add(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def neg(self, x: Sequence[int]) -> Element:
        return tuple((-a) % m for a, m in zip(x, self.moduli))

    def get(self, x: Sequence[int], label: Any) -> Element:
        a, b = self.span(label)
        return tuple(x[a:b])

    def elements(self) -> Iterator[Element]:
        if self.order > ENUMERATION_CAP:
            raise TooLargeToEnumerate(f"ambient of order {self.order}")
        return itertools.product(*(range(m) for m in self.moduli))

    def pair(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        """Duality pairing <x, y> = sum x_i y_i / m_i as a residue in R/Z."""
        M = self.lcm_modulus
        num = sum(
            xi * yi * (M // m) for xi, yi, m in zip(x, y, self.moduli)
        )
        return Fraction(num % M, M) if M > 1 else Fraction(0, 1)

    def pair_nums(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Numerator of the pairing over the common denominator lcm(moduli)."""
        M = self.lcm_modulus
        return (
            sum(xi * yi * (M // m) for xi, yi, m in zip(x, y, self.moduli)) % M
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ProductSpace) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        inner = ", ".join(f"{lab!r}: {alpha!r}" for lab, alpha in self.factors)
        return f"ProductSpace({inner})"


def sort_key(label: Any):
    """Deterministic ordering key for mixed-type factor labels."""
    if isinstance(label, str):
        return (0, label)
    if isinstance(label, bool) or isinstance(label, int):
        return (1, int(label))
    if isinstance(label, tuple):
        return (2, tuple(sort_key(x) for x in label))
    return (3, repr(label))
