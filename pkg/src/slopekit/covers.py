"""Finite abelian covers via Reidemeister-Schreier rewriting.

An epimorphism alpha from a group G onto a finite abelian group S (factoring
through the maximal free abelian quotient of G) determines a finite cover
whose fundamental group is ker(alpha).  Because alpha is abelian, the coset
action of G on S is by translations, so no general coset enumeration is
needed: the Schreier transversal is found by breadth-first search over S and
each relator is rewritten once per coset.  The resulting presentation, after
discarding the spanning-tree generators, gives the cover's first Betti number
through plain abelianization - an independent route against which the
jumping-locus computation can be cross-checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm, prod
from typing import Mapping, Sequence

from .errors import SlopekitError
from .group_core import (
    GroupPresentation,
    IntegerMatrix,
    Word,
    abelianization,
    free_abelianization,
    smith_normal_form,
)


class NotAnEpimorphismError(SlopekitError):
    """The supplied data does not define a surjection onto the target."""


@dataclass(frozen=True)
class AbelianEpimorphism:
    """A surjection Z^source_rank -> Z_{n_1} + ... + Z_{n_k}.

    ``matrix`` holds one row per cyclic factor; row j applied to a vector and
    reduced mod ``factors[j]`` gives that coordinate of the image.
    Surjectivity is enforced at construction (Smith form of the matrix
    augmented by the factor moduli must have all invariant factors 1).
    """

    source_rank: int
    factors: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.source_rank < 0:
            raise NotAnEpimorphismError("source rank must be nonnegative")
        factors = tuple(int(n) for n in self.factors)
        if any(n < 1 for n in factors):
            raise NotAnEpimorphismError("factor moduli must be positive")
        rows = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(rows) != len(factors) or any(len(row) != self.source_rank for row in rows):
            raise NotAnEpimorphismError(
                f"matrix must be {len(factors)} x {self.source_rank} for the given factors"
            )
        rows = tuple(
            tuple(x % n for x in row) for row, n in zip(rows, factors)
        )
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "matrix", rows)
        if not self._is_surjective():
            raise NotAnEpimorphismError(
                f"matrix {rows} does not map Z^{self.source_rank} onto "
                f"the group with invariant factors {factors}"
            )

    def _is_surjective(self) -> bool:
        k, b = len(self.factors), self.source_rank
        if k == 0:
            return True
        lifted = [
            list(self.matrix[j]) + [self.factors[j] if i == j else 0 for i in range(k)]
            for j in range(k)
        ]
        d, _, _ = smith_normal_form(IntegerMatrix(lifted, rows=k, cols=b + k))
        diag = d.diagonal()
        return len(diag) >= k and all(x == 1 for x in diag[:k])

    @classmethod
    def cyclic(cls, order: int, weights: Sequence[int]) -> "AbelianEpimorphism":
        """Shorthand for a cyclic quotient Z^b -> Z_order with given weights."""
        weights = tuple(int(w) for w in weights)
        return cls(len(weights), (order,), (weights,))

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        """Least common multiple of the factor orders (exponent of S)."""
        return lcm(*self.factors) if self.factors else 1

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.source_rank:
            raise NotAnEpimorphismError("vector length does not match source rank")
        return tuple(
            sum(a * x for a, x in zip(row, vector)) % n
            for row, n in zip(self.matrix, self.factors)
        )

    def elements(self) -> list[tuple[int, ...]]:
        """All elements of the target, in lexicographic order (identity first)."""
        return list(itertools.product(*(range(n) for n in self.factors)))

    def element_index(self, element: Sequence[int]) -> int:
        idx = 0
        for c, n in zip(element, self.factors):
            idx = idx * n + (c % n)
        return idx

    def translate(self, element: Sequence[int], shift: Sequence[int]) -> tuple[int, ...]:
        return tuple((c + s) % n for c, s, n in zip(element, shift, self.factors))

    def kernel_lattice_basis(self) -> tuple[tuple[int, ...], ...]:
        """Generators of the full-rank sublattice ker(alpha) of Z^source_rank.

        Solves A x = -N y over Z for N = diag(factors): the kernel of the
        block matrix [A | N] projected to the x coordinates.
        """
        k, b = len(self.factors), self.source_rank
        if k == 0:
            return tuple(
                tuple(1 if i == j else 0 for j in range(b)) for i in range(b)
            )
        block = [
            list(self.matrix[j]) + [self.factors[j] if i == j else 0 for i in range(k)]
            for j in range(k)
        ]
        d, _, v = smith_normal_form(IntegerMatrix(block, rows=k, cols=b + k))
        diag = d.diagonal()
        rank = sum(1 for x in diag if x)
        return tuple(
            tuple(v.entries[i][j] for i in range(b)) for j in range(rank, b + k)
        )

    def to_json_dict(self) -> dict:
        return {"factors": list(self.factors), "matrix": [list(r) for r in self.matrix]}

    @classmethod
    def from_json_dict(cls, data: Mapping, source_rank: int | None = None) -> "AbelianEpimorphism":
        factors = tuple(data["factors"])
        matrix = tuple(tuple(row) for row in data["matrix"])
        if source_rank is None:
            if not matrix:
                raise NotAnEpimorphismError("source rank cannot be inferred from an empty matrix")
            source_rank = len(matrix[0])
        return cls(source_rank, factors, matrix)


def _generator_shifts(
    presentation: GroupPresentation, alpha: AbelianEpimorphism
) -> list[tuple[int, ...]]:
    """Image in S of each generator, via the free abelianization."""
    fa = free_abelianization(presentation)
    if fa.rank < alpha.source_rank:
        raise NotAnEpimorphismError(
            f"epimorphism needs free rank >= {alpha.source_rank}, group has {fa.rank}"
        )
    return [
        alpha.apply(fa.generator_images[i][: alpha.source_rank])
        for i in range(presentation.generator_count)
    ]


def coset_action(
    presentation: GroupPresentation, alpha: AbelianEpimorphism
) -> list[list[int]]:
    """Permutation of the cosets (= elements of S) induced by each generator.

    Cosets are indexed by the lexicographic rank of their tuples, identity
    coset first; generator i acts by translation by alpha(image of x_i).
    """
    shifts = _generator_shifts(presentation, alpha)
    elements = alpha.elements()
    return [
        [alpha.element_index(alpha.translate(e, shift)) for e in elements]
        for shift in shifts
    ]


@dataclass(frozen=True)
class SubgroupPresentation:
    """Presentation of ker(alpha) with its Schreier bookkeeping.

    The Euler characteristic relation 1 - g' + r' = index * (1 - g + r)
    against the ambient presentation is checked at construction.
    """

    presentation: GroupPresentation
    ambient: GroupPresentation
    index: int
    transversal: tuple[Word, ...]

    def __post_init__(self) -> None:
        g, r = self.ambient.generator_count, self.ambient.relator_count
        gp, rp = self.presentation.generator_count, self.presentation.relator_count
        if 1 - gp + rp != self.index * (1 - g + r):
            raise SlopekitError(
                f"Euler characteristic violated: 1-{gp}+{rp} != {self.index}*(1-{g}+{r})"
            )
        if len(self.transversal) != self.index:
            raise SlopekitError("transversal size must equal the index")


def reidemeister_schreier(
    presentation: GroupPresentation, alpha: AbelianEpimorphism
) -> SubgroupPresentation:
    """Presentation of ker(alpha) by Schreier rewriting.

    The transversal comes from breadth-first search over the cosets starting
    at the identity, trying generators in declaration order; spanning-tree
    generators are eliminated eagerly, leaving d*g - (d-1) generators and
    d*r relators (one rewrite of each relator per coset).
    """
    perms = coset_action(presentation, alpha)
    g = presentation.generator_count
    d = alpha.order
    inverse_perms = [[0] * d for _ in range(g)]
    for i, perm in enumerate(perms):
        for src, dst in enumerate(perm):
            inverse_perms[i][dst] = src

    # BFS spanning tree; transversal[c] is a positive word reaching coset c.
    transversal: dict[int, tuple[int, ...]] = {0: ()}
    tree: set[tuple[int, int]] = set()
    queue = [0]
    while queue:
        c = queue.pop(0)
        for i in range(1, g + 1):
            nxt = perms[i - 1][c]
            if nxt not in transversal:
                transversal[nxt] = transversal[c] + (i,)
                tree.add((c, i))
                queue.append(nxt)
    if len(transversal) != d:
        raise NotAnEpimorphismError(
            f"coset action is not transitive: reached {len(transversal)} of {d} cosets"
        )

    # Non-tree edges become the subgroup generators, indexed by (coset, gen).
    new_index: dict[tuple[int, int], int] = {}
    for c in range(d):
        for i in range(1, g + 1):
            if (c, i) not in tree:
                new_index[(c, i)] = len(new_index) + 1

    sub_relators: list[Word] = []
    for c in range(d):
        for rel in presentation.relators:
            letters: list[int] = []
            cur = c
            for letter in rel:
                i = abs(letter)
                if letter > 0:
                    edge = (cur, i)
                    cur = perms[i - 1][cur]
                    if edge not in tree:
                        letters.append(new_index[edge])
                else:
                    cur = inverse_perms[i - 1][cur]
                    edge = (cur, i)
                    if edge not in tree:
                        letters.append(-new_index[edge])
            if cur != c:
                raise SlopekitError("relator does not stabilize its coset; action is inconsistent")
            sub_relators.append(Word(tuple(letters)))

    sub = GroupPresentation(len(new_index), tuple(sub_relators))
    return SubgroupPresentation(
        presentation=sub,
        ambient=presentation,
        index=d,
        transversal=tuple(Word(transversal[c]) for c in range(d)),
    )


def subgroup_b1(presentation: GroupPresentation, alpha: AbelianEpimorphism) -> int:
    """First Betti number of ker(alpha): free rank of the rewritten group's H1."""
    sub = reidemeister_schreier(presentation, alpha)
    return abelianization(sub.presentation).free_rank
