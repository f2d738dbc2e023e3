"""Slope-dense families: sequences, convergence, and epsilon-net certificates.

For a reduced target fraction p/q in (0,1) the parameter sequences

    d_n = n * e * (q - p) * (g_F - 1) + 1,      k_n = 2 * n * e * p

produce branched double covers whose slopes converge to 9 - p/q from above;
d_n = 1 mod e by construction, so the cyclic covers keep irregularity 1 and
the family stays of Albanese dimension one.  The achieved slope is

    9 - k (g_F - 1) / (2 d + k (g_F - 1)),

and the convergence gap collapses to p / (q * (n e q (g_F - 1) + 1)), which
is O(1/n).  A density certificate instantiates one convergent family per
Farey target of bounded denominator and checks, in exact rational
arithmetic, that the achieved slopes leave no point of [8, 9] farther than
epsilon away.  No floating point enters any comparison.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import IO, Iterator, Sequence

from .errors import SlopekitError
from .surface_invariants import FamilyParams


class InvalidTargetError(SlopekitError):
    """The target fraction is not a reduced p/q with 0 < p < q."""


class NetInfeasibleError(SlopekitError):
    """The Farey targets of the requested order cannot form the needed net."""


@dataclass(frozen=True)
class TargetSlope:
    """A rational target 9 - p/q in (8, 9); stored reduced."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1 or not 0 < self.p < self.q:
            raise InvalidTargetError(f"need 0 < p < q, got p={self.p}, q={self.q}")
        g = gcd(self.p, self.q)
        object.__setattr__(self, "p", self.p // g)
        object.__setattr__(self, "q", self.q // g)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def value(self) -> Fraction:
        return 9 - self.fraction


def farey_fractions(max_denominator: int) -> Iterator[Fraction]:
    """Reduced fractions in (0, 1) with denominator <= max_denominator,
    ascending (the interior of the Farey sequence of that order).

    >>> [str(f) for f in farey_fractions(4)]
    ['1/4', '1/3', '1/2', '2/3', '3/4']
    """
    if max_denominator < 1:
        raise ValueError("max denominator must be >= 1")
    a, b, c, d = 0, 1, 1, max_denominator
    while (c, d) != (1, 1):
        yield Fraction(c, d)
        k = (max_denominator + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b


def sequence_params(
    target: TargetSlope, exponent: int, fiber_genus: int, n: int
) -> FamilyParams:
    """Parameters (d_n, k_n) of the n-th surface aiming at 9 - p/q.

    >>> sequence_params(TargetSlope(1, 2), 1, 19, 1)
    FamilyParams(d=19, k=2, cover_exponent=1)
    """
    if exponent < 1:
        raise SlopekitError("exponent must be >= 1")
    if fiber_genus < 2:
        raise SlopekitError("fiber genus must be >= 2")
    if n < 1:
        raise SlopekitError("sequence index must be >= 1")
    d = n * exponent * (target.q - target.p) * (fiber_genus - 1) + 1
    k = 2 * n * exponent * target.p
    return FamilyParams(d=d, k=k, cover_exponent=exponent)


def family_slope(params: FamilyParams, fiber_genus: int) -> Fraction:
    """Slope of the branched double cover family, closed form.

    Equals slope(branched double cover of the degree-d cyclic cover with 2k
    branch fibers); the two routes agree exactly and are cross-checked in
    the test suite.
    """
    if fiber_genus < 2:
        raise SlopekitError("fiber genus must be >= 2")
    weight = params.k * (fiber_genus - 1)
    return 9 - Fraction(weight, 2 * params.d + weight)


@dataclass(frozen=True)
class ConvergenceReport:
    """First family member within epsilon of its target, with the exact gap."""

    target: TargetSlope
    n: int
    params: FamilyParams
    achieved: Fraction
    gap: Fraction


def convergence_report(
    target: TargetSlope, exponent: int, fiber_genus: int, epsilon: Fraction | int | str
) -> ConvergenceReport:
    """Walk the sequence until the slope is within epsilon of 9 - p/q.

    Comparison is exact rational; the O(1/n) gap guarantees termination, and
    strict monotone decrease of the gap is verified along the way.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise SlopekitError("epsilon must be positive")
    previous_gap: Fraction | None = None
    n = 1
    while True:
        params = sequence_params(target, exponent, fiber_genus, n)
        achieved = family_slope(params, fiber_genus)
        gap = abs(achieved - target.value)
        if previous_gap is not None and gap >= previous_gap:
            raise SlopekitError(
                f"gap failed to decrease at n={n}: {gap} after {previous_gap}"
            )
        if gap <= epsilon:
            return ConvergenceReport(target, n, params, achieved, gap)
        previous_gap = gap
        n += 1


@dataclass(frozen=True)
class DensityCertificate:
    """Achieved slopes forming an epsilon-net of [8, 9], exactly.

    Entries are sorted by target value.  Construction re-verifies that every
    entry gap is at most epsilon and that the covering radius of the
    achieved slopes over [8, 9] is at most epsilon.
    """

    epsilon: Fraction
    entries: tuple[ConvergenceReport, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        entries = tuple(sorted(self.entries, key=lambda e: e.target.value))
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise NetInfeasibleError("a certificate needs at least one entry")
        for entry in entries:
            if entry.gap > self.epsilon:
                raise SlopekitError(f"entry gap {entry.gap} exceeds epsilon {self.epsilon}")
        radius = covering_radius(self)
        if radius > self.epsilon:
            raise SlopekitError(
                f"achieved slopes cover [8, 9] only to radius {radius} > epsilon"
            )


def covering_radius(certificate: DensityCertificate) -> Fraction:
    """Exact sup over [8, 9] of the distance to the achieved slopes."""
    achieved = sorted(entry.achieved for entry in certificate.entries)
    radius = max(achieved[0] - 8, 9 - achieved[-1])
    for left, right in zip(achieved, achieved[1:]):
        radius = max(radius, (right - left) / 2)
    return radius


def density_certificate(
    epsilon: Fraction | int | str,
    exponent: int,
    fiber_genus: int,
    max_denominator: int,
) -> DensityCertificate:
    """Certify the epsilon-density of the achieved slopes in [8, 9].

    Targets are the points 9 - p/q over the Farey fractions p/q of order at
    most max_denominator.  They must form an epsilon/2-net of (8, 9) - this
    is checked first, and failure raises NetInfeasibleError naming the
    largest uncovered gap.  Each target then receives a family member with
    gap at most epsilon/2, so every point of [8, 9] ends up within epsilon
    of an achieved slope.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise SlopekitError("epsilon must be positive")
    if max_denominator < 1:
        raise SlopekitError("max denominator must be >= 1")
    half = epsilon / 2
    targets = [TargetSlope(f.numerator, f.denominator) for f in farey_fractions(max_denominator)]
    targets.sort(key=lambda t: t.value)
    if not targets:
        raise NetInfeasibleError(
            f"no reduced p/q with 0 < p < q <= {max_denominator}; "
            "largest uncovered gap is all of (8, 9), radius 1/2"
        )
    values = [t.value for t in targets]
    worst_radius = values[0] - 8
    worst_gap = (Fraction(8), values[0])
    if 9 - values[-1] > worst_radius:
        worst_radius = 9 - values[-1]
        worst_gap = (values[-1], Fraction(9))
    for left, right in zip(values, values[1:]):
        if (right - left) / 2 > worst_radius:
            worst_radius = (right - left) / 2
            worst_gap = (left, right)
    if worst_radius > half:
        raise NetInfeasibleError(
            f"targets with q <= {max_denominator} are not an epsilon/2-net: "
            f"largest uncovered gap is ({worst_gap[0]}, {worst_gap[1]}) "
            f"with covering radius {worst_radius} > {half}"
        )
    entries = tuple(
        convergence_report(t, exponent, fiber_genus, half) for t in targets
    )
    return DensityCertificate(epsilon, entries)


# ---------------------------------------------------------------------------
# Emission

CSV_HEADER = [
    "p", "q", "target_num", "target_den", "e", "n", "d", "k",
    "slope_num", "slope_den", "gap_num", "gap_den",
]


def certificate_rows(entries: Sequence[ConvergenceReport]) -> list[list[int]]:
    rows = []
    for entry in entries:
        target_value = entry.target.value
        rows.append([
            entry.target.p,
            entry.target.q,
            target_value.numerator,
            target_value.denominator,
            entry.params.cover_exponent or 1,
            entry.n,
            entry.params.d,
            entry.params.k,
            entry.achieved.numerator,
            entry.achieved.denominator,
            entry.gap.numerator,
            entry.gap.denominator,
        ])
    return rows


def write_certificate_csv(
    entries: "DensityCertificate | Sequence[ConvergenceReport]", stream: IO[str]
) -> None:
    if isinstance(entries, DensityCertificate):
        entries = entries.entries
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(certificate_rows(entries))


def write_slope_svg(entries: Sequence[ConvergenceReport], stream: IO[str]) -> None:
    """Scatter plot (n, achieved slope) as a self-contained SVG.

    Hand-rolled so identical inputs yield byte-identical files.
    """
    width, height, margin = 640, 400, 50
    max_n = max(entry.n for entry in entries)

    def x_pos(n: int) -> float:
        span = max(max_n, 1)
        return margin + (width - 2 * margin) * (n / (span + 1))

    def y_pos(slope_value: Fraction) -> float:
        frac = float(slope_value - 8)  # slopes live in (8, 9)
        return height - margin - (height - 2 * margin) * frac

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
        f'<text x="{width // 2}" y="{height - 12}" font-size="12" '
        f'text-anchor="middle">n</text>',
        f'<text x="14" y="{height // 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {height // 2})">slope</text>',
        f'<text x="{margin - 6}" y="{height - margin + 4}" font-size="10" '
        f'text-anchor="end">8</text>',
        f'<text x="{margin - 6}" y="{margin + 4}" font-size="10" text-anchor="end">9</text>',
    ]
    for entry in entries:
        cx = f"{x_pos(entry.n):.2f}"
        cy = f"{y_pos(entry.achieved):.2f}"
        lines.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="steelblue"/>')
    lines.append("</svg>")
    stream.write("\n".join(lines) + "\n")
