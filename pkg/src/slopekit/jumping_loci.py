"""Cohomology jumping loci of finitely presented groups, exactly.

A torsion character xi of the maximal free abelian quotient Z^b sends the
j-th basis element to a fixed power of a primitive m-th root of unity.  The
twisted first cohomology h^1(G; C_xi) is computed from the presentation
2-complex: for nontrivial xi it equals g - 1 - rank A(xi), where A(xi) is the
Alexander matrix of Fox derivatives evaluated at xi.  All evaluation happens
in the m-th cyclotomic field represented exactly as Q[z]/(Phi_m(z)), and
ranks come from fraction-free Gaussian elimination, so there is no floating
point and no tolerance anywhere.

Scanning all characters of order up to a bound N yields the finite sets

    W_i = { xi | h^1(G; C_xi) >= i },

recorded as (character, depth) pairs, together with the exponent (lcm of the
orders occurring in W_1).  Two consumers are built on top:

* Hironaka's formula for the first Betti number of the finite abelian cover
  attached to an epimorphism alpha: G -> S, where each jumping character
  factoring through alpha contributes its depth:
  b_1(ker alpha) = b_1(G) + sum of depths of factoring characters.
* the coprime cover selector: when gcd(d, exponent) = 1, no nontrivial
  jumping character can factor through a cyclic quotient of order d, so the
  cover keeps b_1(G) - certified without rescanning.

Completeness of a scan is the caller's responsibility: a report only covers
characters up to its scan bound, and using it against a deck group of larger
exponent attaches an explicit warning to the result.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .covers import AbelianEpimorphism
from .errors import SlopekitError
from .group_core import (
    GroupPresentation,
    LaurentPolynomial,
    Word,
    free_abelianization,
)


class CharacterDomainError(SlopekitError):
    """Character exponent vector does not match the free abelianization."""


# ---------------------------------------------------------------------------
# Cyclotomic arithmetic


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (ascending degree) of the m-th cyclotomic polynomial.

    Computed by exact division of x^m - 1 by the cyclotomic polynomials of
    the proper divisors of m; monic with integer coefficients.
    """
    if m < 1:
        raise ValueError("modulus must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _exact_poly_div(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _exact_poly_div(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Divide integer polynomials, den monic; the division must be exact."""
    num = list(num)
    deg_d = len(den) - 1
    quot = [0] * (len(num) - deg_d)
    for i in range(len(num) - 1, deg_d - 1, -1):
        c = num[i]
        if c:
            quot[i - deg_d] = c
            for k, dk in enumerate(den):
                num[i - deg_d + k] -= c * dk
    if any(num):
        raise ValueError("polynomial division was not exact")
    return quot


class CyclotomicNumber:
    """Element of the m-th cyclotomic field Q(zeta_m) = Q[z]/(Phi_m).

    Stored as the canonical residue: a rational coefficient vector of length
    phi(m) = deg Phi_m.  All arithmetic is exact; zero testing is decidable
    by inspection.
    """

    __slots__ = ("modulus", "coeffs")

    def __init__(self, modulus: int, coeffs: Iterable[Fraction | int]):
        phi = len(cyclotomic_polynomial(modulus)) - 1
        vec = [Fraction(c) for c in coeffs]
        if len(vec) > phi:
            vec = _reduce_mod_cyclotomic(modulus, vec)
        vec += [Fraction(0)] * (phi - len(vec))
        self.modulus = modulus
        self.coeffs = tuple(vec)

    # -- constructors

    @classmethod
    def zero(cls, modulus: int) -> "CyclotomicNumber":
        return cls(modulus, ())

    @classmethod
    def from_rational(cls, modulus: int, value: Fraction | int) -> "CyclotomicNumber":
        return cls(modulus, (Fraction(value),))

    @classmethod
    def root_power(cls, modulus: int, power: int) -> "CyclotomicNumber":
        """zeta_m ** power, reduced to the canonical residue."""
        return _root_power(modulus, power % modulus)

    @classmethod
    def from_root_powers(cls, modulus: int, powers: Mapping[int, int]) -> "CyclotomicNumber":
        """Integer combination sum(coeff * zeta_m**power)."""
        vec = [Fraction(0)] * modulus
        for power, coeff in powers.items():
            vec[power % modulus] += coeff
        return cls(modulus, vec)

    # -- predicates

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    # -- arithmetic

    def _check(self, other: "CyclotomicNumber | Fraction | int") -> "CyclotomicNumber":
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(self.modulus, other)
        if other.modulus != self.modulus:
            raise ValueError("cyclotomic moduli differ")
        return other

    def __add__(self, other: "CyclotomicNumber | int") -> "CyclotomicNumber":
        other = self._check(other)
        return CyclotomicNumber(self.modulus, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.modulus, (-a for a in self.coeffs))

    def __sub__(self, other: "CyclotomicNumber | int") -> "CyclotomicNumber":
        return self + (-self._check(other))

    def __rsub__(self, other: int) -> "CyclotomicNumber":
        return self._check(other) - self

    def __mul__(self, other: "CyclotomicNumber | int") -> "CyclotomicNumber":
        other = self._check(other)
        a, b = self.coeffs, other.coeffs
        conv = [Fraction(0)] * (len(a) + len(b) - 1 or 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        return CyclotomicNumber(self.modulus, conv)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(self.modulus, other)
        return (
            isinstance(other, CyclotomicNumber)
            and self.modulus == other.modulus
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.coeffs))

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.modulus}, {list(self.coeffs)!r})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for e, c in enumerate(self.coeffs):
            if c == 0:
                continue
            body = "1" if e == 0 else ("z" if e == 1 else f"z^{e}")
            mag = abs(c)
            term = body if e and mag == 1 else (str(mag) if e == 0 else f"{mag}*{body}")
            pieces.append(("- " if c < 0 else "+ ") + term)
        out = " ".join(pieces)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "coefficients": [str(c) for c in self.coeffs]}


def _reduce_mod_cyclotomic(modulus: int, vec: list[Fraction]) -> list[Fraction]:
    phi_poly = cyclotomic_polynomial(modulus)
    deg = len(phi_poly) - 1
    for i in range(len(vec) - 1, deg - 1, -1):
        c = vec[i]
        if c:
            vec[i] = Fraction(0)
            for k in range(deg):
                vec[i - deg + k] -= c * phi_poly[k]
    return vec[:deg]


@lru_cache(maxsize=None)
def _root_power(modulus: int, power: int) -> CyclotomicNumber:
    vec = [Fraction(0)] * (power + 1)
    vec[power] = Fraction(1)
    return CyclotomicNumber(modulus, vec)


# ---------------------------------------------------------------------------
# Torsion characters


@dataclass(frozen=True)
class TorsionCharacter:
    """A finite-order character of Z^b, in canonical (exact-order) form.

    The j-th basis vector is sent to zeta_modulus ** exponents[j].  The
    canonical form divides out the common factor of the modulus and all
    exponents, so modulus always equals the exact order of the character;
    the trivial character of rank b is (1, (0,...,0)).
    """

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        m = int(self.modulus)
        if m < 1:
            raise CharacterDomainError("character modulus must be positive")
        exps = tuple(int(e) % m for e in self.exponents)
        g = gcd(m, *exps) if exps else m
        m //= g
        exps = tuple((e // g) % m for e in exps)
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def trivial(cls, rank: int) -> "TorsionCharacter":
        return cls(1, tuple([0] * rank))

    @property
    def order(self) -> int:
        return self.modulus

    @property
    def rank(self) -> int:
        return len(self.exponents)

    def is_trivial(self) -> bool:
        return self.modulus == 1

    def conjugate(self) -> "TorsionCharacter":
        return TorsionCharacter(self.modulus, tuple(-e % self.modulus for e in self.exponents))

    def pairing(self, vector: Sequence[int]) -> int:
        """Exponent (mod modulus) of the character value on a lattice vector."""
        if len(vector) != len(self.exponents):
            raise CharacterDomainError("vector length does not match character rank")
        return sum(e * v for e, v in zip(self.exponents, vector)) % self.modulus

    def value_on(self, vector: Sequence[int]) -> CyclotomicNumber:
        return CyclotomicNumber.root_power(self.modulus, self.pairing(vector))

    def to_json_dict(self) -> dict:
        return {"modulus": self.modulus, "exponents": list(self.exponents)}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "TorsionCharacter":
        return cls(int(data["modulus"]), tuple(data["exponents"]))


# ---------------------------------------------------------------------------
# Evaluation of the Alexander matrix at a character


def _character_shift_table(
    presentation: GroupPresentation, character: TorsionCharacter
) -> list[int]:
    fa = free_abelianization(presentation)
    if character.rank != fa.rank:
        raise CharacterDomainError(
            f"character has rank {character.rank}, free abelianization has rank {fa.rank}"
        )
    return [character.pairing(img) for img in fa.generator_images]


def _fox_row_at_character(
    relator: Word,
    shifts: Sequence[int],
    generator_count: int,
    modulus: int,
) -> list[CyclotomicNumber]:
    """Evaluate all Fox derivatives of one relator at a character.

    Letters are processed left to right while tracking the character value
    of the prefix, so this works even when H1 has torsion (the character
    only sees the free quotient).
    """
    powers: list[dict[int, int]] = [{} for _ in range(generator_count)]
    s = 0
    for letter in relator:
        gen = abs(letter)
        delta = shifts[gen - 1]
        if letter > 0:
            bucket = powers[gen - 1]
            bucket[s] = bucket.get(s, 0) + 1
            s = (s + delta) % modulus
        else:
            s = (s - delta) % modulus
            bucket = powers[gen - 1]
            bucket[s] = bucket.get(s, 0) - 1
    return [CyclotomicNumber.from_root_powers(modulus, bucket) for bucket in powers]


def evaluate_alexander_matrix(
    presentation: GroupPresentation, character: TorsionCharacter
) -> list[list[CyclotomicNumber]]:
    """Alexander matrix with t_j specialized to the character's root of unity.

    Computed letter-by-letter from the relators (never through the symbolic
    Laurent matrix), one row per relator, one column per generator; entries
    live in the cyclotomic field of the character's order.  At the trivial
    character this returns the integer exponent matrix, relators as rows.
    """
    shifts = _character_shift_table(presentation, character)
    return [
        _fox_row_at_character(rel, shifts, presentation.generator_count, character.modulus)
        for rel in presentation.relators
    ]


def evaluate_laurent(poly: LaurentPolynomial, character: TorsionCharacter) -> CyclotomicNumber:
    """Specialize a Laurent polynomial at the character's root of unity."""
    if poly.variables != character.rank:
        raise CharacterDomainError("polynomial variables do not match character rank")
    powers: dict[int, int] = {}
    for exps, coeff in poly.terms.items():
        p = character.pairing(exps)
        powers[p] = powers.get(p, 0) + coeff
    return CyclotomicNumber.from_root_powers(character.modulus, powers)


def cyclotomic_rank(rows: Sequence[Sequence[CyclotomicNumber]]) -> int:
    """Rank over the cyclotomic field by fraction-free Gaussian elimination."""
    work = [list(row) for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(work)) if not work[i][col].is_zero()), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        p = work[rank][col]
        for i in range(rank + 1, len(work)):
            q = work[i][col]
            if not q.is_zero():
                work[i] = [p * a - q * b for a, b in zip(work[i], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def twisted_h1(presentation: GroupPresentation, character: TorsionCharacter) -> int:
    """Dimension of the first twisted cohomology h^1(G; C_xi).

    For the trivial character this is b_1(G).  For a nontrivial character
    the presentation 2-complex gives h^0 = 0 and

        h^1 = g - 1 - rank A(xi),

    with the rank taken exactly over the cyclotomic field.
    """
    fa = free_abelianization(presentation)
    if character.rank != fa.rank:
        raise CharacterDomainError(
            f"character has rank {character.rank}, free abelianization has rank {fa.rank}"
        )
    if character.is_trivial():
        return fa.rank
    rows = evaluate_alexander_matrix(presentation, character)
    return presentation.generator_count - 1 - cyclotomic_rank(rows)


# ---------------------------------------------------------------------------
# Jumping locus reports


@dataclass(frozen=True)
class JumpEntry:
    """A nontrivial character together with its depth (h^1 value >= 1)."""

    character: TorsionCharacter
    depth: int

    def to_json_dict(self) -> dict:
        d = self.character.to_json_dict()
        d["depth"] = self.depth
        return d

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "JumpEntry":
        return cls(
            TorsionCharacter(int(data["modulus"]), tuple(data["exponents"])),
            int(data["depth"]),
        )


def exponent_of(entries: Iterable[JumpEntry]) -> int:
    """lcm of the orders of the nontrivial jumping characters (1 if none)."""
    result = 1
    for entry in entries:
        if entry.depth >= 1 and not entry.character.is_trivial():
            result = lcm(result, entry.character.order)
    return result


@dataclass(frozen=True)
class JumpingLocusReport:
    """Finite description of the W_i: nontrivial entries plus b_1.

    The trivial character is not listed among the entries; it sits in W_i
    exactly for i <= b1.  ``scan_bound`` records the order bound of the scan
    that produced the report; None marks a report asserted complete on other
    grounds (fixtures), which is never produced by a scan.
    """

    scan_bound: int | None
    b1: int
    entries: tuple[JumpEntry, ...]
    exponent: int

    def __post_init__(self) -> None:
        entries = tuple(
            sorted(self.entries, key=lambda e: (e.character.modulus, e.character.exponents))
        )
        for entry in entries:
            if entry.character.is_trivial():
                raise SlopekitError("the trivial character is tracked by b1, not by entries")
            if entry.depth < 1:
                raise SlopekitError("entries must have depth >= 1")
        object.__setattr__(self, "entries", entries)
        if self.exponent != exponent_of(entries):
            raise SlopekitError(
                f"stated exponent {self.exponent} != lcm of entry orders {exponent_of(entries)}"
            )

    @classmethod
    def build(
        cls, scan_bound: int | None, b1: int, entries: Iterable[JumpEntry]
    ) -> "JumpingLocusReport":
        entries = tuple(entries)
        return cls(scan_bound, b1, entries, exponent_of(entries))

    def characters_with_depth_at_least(self, depth: int) -> tuple[TorsionCharacter, ...]:
        """W_depth as a character tuple; the free rank equals b1, so the
        trivial character has rank b1."""
        found = [e.character for e in self.entries if e.depth >= depth]
        if self.b1 >= depth:
            found.append(TorsionCharacter.trivial(self.b1))
        return tuple(found)

    def to_json_dict(self) -> dict:
        return {
            "scan_bound": self.scan_bound,
            "b1": self.b1,
            "entries": [e.to_json_dict() for e in self.entries],
            "exponent": self.exponent,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "JumpingLocusReport":
        return cls(
            data["scan_bound"],
            int(data["b1"]),
            tuple(JumpEntry.from_json_dict(e) for e in data["entries"]),
            int(data["exponent"]),
        )


def cartwright_steger_report() -> JumpingLocusReport:
    """Jumping loci of the Cartwright-Steger surface group: all trivial.

    The Green-Lazarsfeld sets of the Cartwright-Steger surface consist of
    the trivial character alone (Stover), so every nontrivial entry set is
    empty, the exponent is 1, and b_1 = 2.  The report carries scan_bound
    None because it is complete knowledge, not the outcome of a bounded scan.
    """
    return JumpingLocusReport(scan_bound=None, b1=2, entries=(), exponent=1)


def _enumerate_characters(rank: int, max_order: int) -> list[TorsionCharacter]:
    chars: list[TorsionCharacter] = []
    for m in range(2, max_order + 1):
        for exps in itertools.product(range(m), repeat=rank):
            if exps and gcd(m, *exps) == 1:
                chars.append(TorsionCharacter(m, exps))
    return chars


def scan_jumping_loci(
    presentation: GroupPresentation, max_order: int, max_workers: int | None = None
) -> JumpingLocusReport:
    """Enumerate all torsion characters of order <= max_order and record jumps.

    Characters are visited in canonical form (each exact order once), in
    ascending (order, exponents) order.  The bound is mandatory: nothing in
    the report speaks about characters of larger order.  ``max_workers``
    lets evaluations run on a thread pool; results are merged in enumeration
    order, so the report does not depend on scheduling.
    """
    if max_order < 1:
        raise ValueError("scan bound must be >= 1")
    fa = free_abelianization(presentation)
    chars = _enumerate_characters(fa.rank, max_order)

    def depth_of(xi: TorsionCharacter) -> int:
        return twisted_h1(presentation, xi)

    if max_workers is not None and max_workers > 1 and len(chars) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            depths = list(pool.map(depth_of, chars))
    else:
        depths = [depth_of(xi) for xi in chars]

    entries = tuple(
        JumpEntry(xi, depth) for xi, depth in zip(chars, depths) if depth >= 1
    )
    return JumpingLocusReport.build(max_order, fa.rank, entries)


# ---------------------------------------------------------------------------
# Cover Betti numbers


@dataclass(frozen=True)
class CoverB1Result:
    """Outcome of Hironaka's formula for one epimorphism.

    ``warning`` is set when the report's scan bound cannot certify
    completeness against the deck group's exponent; the number is then a
    lower bound rather than a certified value.
    """

    b1: int
    base_b1: int
    contributions: tuple[JumpEntry, ...]
    warning: str | None = None


def hironaka_b1(
    b1_g: int, report: JumpingLocusReport, alpha: AbelianEpimorphism
) -> CoverB1Result:
    """First Betti number of the cover ker(alpha) from the jumping loci.

    Each nontrivial entry whose character kills ker(alpha) - equivalently,
    factors through alpha - contributes its depth:

        b_1(ker alpha) = b_1(G) + sum of factoring depths.

    Factorization is tested exactly: the character must vanish on every
    basis vector of the kernel lattice of alpha.
    """
    warning = None
    if report.scan_bound is not None and report.scan_bound < alpha.exponent:
        warning = (
            f"scan bound {report.scan_bound} is smaller than the deck group exponent "
            f"{alpha.exponent}; jumping characters of order up to {alpha.exponent} "
            "may be missing and the result may undercount"
        )
    kernel = alpha.kernel_lattice_basis()
    contributions = []
    for entry in report.entries:
        xi = entry.character
        if xi.rank != alpha.source_rank:
            raise CharacterDomainError(
                f"entry character rank {xi.rank} does not match epimorphism source rank "
                f"{alpha.source_rank}"
            )
        if all(xi.pairing(v) == 0 for v in kernel):
            contributions.append(entry)
    total = b1_g + sum(e.depth for e in contributions)
    return CoverB1Result(total, b1_g, tuple(contributions), warning)


@dataclass(frozen=True)
class CoprimeCertificate:
    """Witness that no jumping character factors through a Z_d quotient.

    Records, for each nontrivial entry, its order and gcd with d (all 1);
    since factoring characters would have order dividing both the report
    exponent and d, coprimality forces the intersection with the dual of
    the deck group to be trivial.  ``factorization_verified`` confirms the
    kernel-vanishing test was also run directly on every entry.
    """

    cover_order: int
    exponent: int
    entry_orders: tuple[int, ...]
    factorization_verified: bool

    def summary(self) -> str:
        return (
            f"gcd(d={self.cover_order}, e={self.exponent}) = 1; "
            f"entry orders {list(self.entry_orders)} all coprime to d; "
            f"factorization re-checked: {self.factorization_verified}"
        )


@dataclass(frozen=True)
class CoprimeCoverResult:
    """b_1 of a cyclic cover, with either a coprimality certificate or the
    Hironaka fallback computation."""

    b1: int
    certificate: CoprimeCertificate | None
    fallback: CoverB1Result | None


def coprime_cover_b1(
    b1_g: int,
    report: JumpingLocusReport,
    order: int,
    weights: Sequence[int],
) -> CoprimeCoverResult:
    """b_1 of the cyclic cover of the given order defined by the weights.

    When gcd(order, exponent of the report) = 1 the answer is b_1(G) for
    *every* cyclic cover of that order, and a certificate is produced (the
    per-entry coprimality checks plus a direct factorization re-check).
    Otherwise the computation falls back to Hironaka's formula for the
    specific epimorphism.
    """
    if order < 1:
        raise ValueError("cover order must be >= 1")
    alpha = AbelianEpimorphism.cyclic(order, weights)
    if gcd(order, report.exponent) == 1:
        orders = tuple(e.character.order for e in report.entries)
        if any(gcd(o, order) != 1 for o in orders):
            raise SlopekitError("entry order shares a factor with d despite coprime exponent")
        direct = hironaka_b1(b1_g, report, alpha)
        if direct.contributions:
            raise SlopekitError("factorization found despite coprimality; report is inconsistent")
        certificate = CoprimeCertificate(
            cover_order=order,
            exponent=report.exponent,
            entry_orders=orders,
            factorization_verified=True,
        )
        return CoprimeCoverResult(b1_g, certificate, None)
    fallback = hironaka_b1(b1_g, report, alpha)
    return CoprimeCoverResult(fallback.b1, None, fallback)
