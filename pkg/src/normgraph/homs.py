"""Homomorphisms between finite abelian alphabets, with adjoints.

A map acts on row tuples: phi(x) = x @ matrix, reduced modulo the target
moduli.  The adjoint is the unique map with <adj(y), x> = <y, phi(x)> under
the coordinate-wise self-dual pairing; for vector-space alphabets over one
prime it is the transpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .alphabets import Alphabet, Element, ProductSpace
from .errors import AlphabetMismatch
from .subgroups import CodeSubgroup, full_subgroup
from . import zmod


@dataclass(frozen=True)
class Homomorphism:
    source: Alphabet
    target: Alphabet
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.matrix) != self.source.width:
            raise ValueError("matrix must have one row per source coordinate")
        reduced = tuple(
            tuple(v % m for v, m in zip(row, self.target.moduli))
            for row in self.matrix
        )
        object.__setattr__(self, "matrix", reduced)
        for i, c in enumerate(self.source.moduli):
            for j, d in enumerate(self.target.moduli):
                if (c * self.matrix[i][j]) % d:
                    raise ValueError(
                        f"matrix entry ({i},{j}) does not define a homomorphism")

    def apply(self, x: Sequence[int]) -> Element:
        if len(x) != self.source.width:
            raise AlphabetMismatch("argument has wrong width")
        return tuple(
            sum(xi * row[j] for xi, row in zip(x, self.matrix)) % m
            for j, m in enumerate(self.target.moduli)
        )

    def __call__(self, x: Sequence[int]) -> Element:
        return self.apply(x)

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        """self after inner."""
        if inner.target != self.source:
            raise AlphabetMismatch("composition alphabets do not chain")
        rows = [self.apply(row) for row in inner.matrix]
        return Homomorphism(inner.source, self.target, tuple(rows))

    def negated(self) -> "Homomorphism":
        rows = tuple(
            tuple(-v % m for v, m in zip(row, self.target.moduli))
            for row in self.matrix
        )
        return Homomorphism(self.source, self.target, rows)

    def adjoint(self) -> "Homomorphism":
        """Adjoint map target -> source under the self-dual identification."""
        rows = []
        for j, d in enumerate(self.target.moduli):
            row = []
            for i, c in enumerate(self.source.moduli):
                row.append(((self.matrix[i][j] * c) // d) % c if c else 0)
            rows.append(tuple(row))
        return Homomorphism(self.target, self.source, tuple(rows))

    def graph(self) -> CodeSubgroup:
        """The subgroup {(x, phi(x))} over source x target."""
        amb = ProductSpace([(("h", "src"), self.source), (("h", "tgt"), self.target)])
        rows = []
        for i in range(self.source.width):
            e = [0] * self.source.width
            e[i] = 1
            rows.append(tuple(e) + self.apply(e))
        return CodeSubgroup(amb, rows)

    def kernel(self) -> CodeSubgroup:
        amb = ProductSpace([(("h", "src"), self.source)])
        M = amb.lcm_modulus
        for d in self.target.moduli:
            M = math.lcm(M, d)
        n = self.source.width
        if M == 1 or n == 0:
            return full_subgroup(amb)
        scaled = [
            [(self.matrix[i][j] * (M // d)) % M
             for j, d in enumerate(self.target.moduli)]
            for i in range(n)
        ]
        ker = zmod.kernel(lambda i: scaled[i], self.target.width, n, M)
        rows = [tuple(v % m for v, m in zip(z, self.source.moduli)) for z in ker]
        return CodeSubgroup(amb, rows)

    def image(self) -> CodeSubgroup:
        amb = ProductSpace([(("h", "tgt"), self.target)])
        return CodeSubgroup(amb, [self.apply(row_unit(self.source, i))
                                  for i in range(self.source.width)])

    @property
    def is_isomorphism(self) -> bool:
        return (self.source.order == self.target.order
                and self.kernel().is_trivial)

    def inverse(self) -> "Homomorphism":
        if not self.is_isomorphism:
            raise ValueError("only isomorphisms can be inverted")
        g = self.graph()
        rows = []
        for j in range(self.target.width):
            e = [0] * self.target.width
            e[j] = 1
            full = g.lift_prefix([("h", "tgt")], tuple(e))
            assert full is not None
            rows.append(full[: self.source.width])
        return Homomorphism(self.target, self.source, tuple(rows))


def row_unit(alpha: Alphabet, i: int) -> Element:
    e = [0] * alpha.width
    e[i] = 1
    return tuple(e)


def identity_map(alpha: Alphabet) -> Homomorphism:
    rows = tuple(row_unit(alpha, i) for i in range(alpha.width))
    return Homomorphism(alpha, alpha, rows)


def negation_map(alpha: Alphabet) -> Homomorphism:
    return identity_map(alpha).negated()


def adjoint(phi: Homomorphism) -> Homomorphism:
    return phi.adjoint()
