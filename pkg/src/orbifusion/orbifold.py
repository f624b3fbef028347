"""Ring-level mechanics of the cyclic orbifold step.

Everything here works on a validated fusion ring carrying the left
fusion action of an invertible label ``alpha`` of exact order ``n``.
Three named preconditions gate the construction:

* (A1): ``alpha`` is invertible and generates a cyclic group of order
  ``n >= 2`` under fusion.
* (A2): an analytic condition on the underlying symmetry that the ring
  cannot see. It enters as a caller attestation and is only echoed.
* (A3): a designated label ``rho`` that is self-dual, fixed by the
  action, and appears in its own square.

The obstruction attached to the symmetry is a root of unity, kept exact
as a pair (j, n) meaning exp(2*pi*i*j/n). The gcd test on
m = N_{rho,rho}^{rho} can certify j = 0; it never certifies anything
else, so nontrivial values enter only by explicit input.

Sector output: free orbits merge into one class each, fixed labels
split into p = n/l pieces (l the multiplicative order of the
obstruction), of dimension l*d/n. The dual symmetry fixes merged
classes and cycles the pieces of each family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import (
    AssumptionError,
    InputError,
    UnsupportedStructureError,
)
from .rings import DimensionTable, FusionRing, fp_dimensions

__all__ = [
    "Verdict",
    "SymmetryAction",
    "cyclic_action",
    "OrbifoldInput",
    "AssumptionItem",
    "AssumptionReport",
    "check_assumptions",
    "ObstructionValue",
    "ObstructionVerdict",
    "obstruction_bound",
    "MergedClass",
    "SplitFamily",
    "ConjugacyOutcome",
    "ConjugacyReport",
    "OrbifoldSectors",
    "orbifold_sectors",
    "conjugacy_assignment",
    "GlobalDimCheck",
    "global_dim_check",
]


class Verdict(Enum):
    TRIVIAL = "Trivial"
    INCONCLUSIVE = "Inconclusive"


# ---------------------------------------------------------------------------
# the symmetry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetryAction:
    """Left fusion by an invertible label, as a label permutation.

    ``perm[i]`` is the unique k with N_{alpha,i}^k = 1. The stored order
    is exact: perm**order is the identity and no smaller positive power
    is. Construction goes through :func:`cyclic_action`, which also
    verifies first-slot equivariance
    N_{perm(i),j}^{perm(k)} = N_{ij}^k; that identity (a direct
    consequence of associativity and invertibility) is the one the
    merging and splitting rules rely on.
    """

    ring: FusionRing = field(repr=False)
    alpha: int
    order: int
    perm: tuple[int, ...]

    @property
    def alpha_label(self) -> str:
        return self.ring.labels[self.alpha]

    def orbits(self) -> list[tuple[int, ...]]:
        """Cycles of the permutation, in order of least member index."""
        seen = [False] * len(self.perm)
        out = []
        for i in range(len(self.perm)):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.perm[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.perm[j]
            out.append(tuple(cyc))
        return out


def _perm_order(perm: tuple[int, ...]) -> int:
    order = 1
    for orbit_len in {_cycle_len(perm, i) for i in range(len(perm))}:
        order = math.lcm(order, orbit_len)
    return order


def _cycle_len(perm: tuple[int, ...], i: int) -> int:
    n = 1
    j = perm[i]
    while j != i:
        j = perm[j]
        n += 1
    return n


def cyclic_action(ring: FusionRing, alpha: str) -> SymmetryAction:
    """Wrap left fusion by ``alpha`` as a validated SymmetryAction.

    Raises an (A1) assumption error when alpha is not invertible. The
    order is the exact multiplicative order of alpha, read off as the
    cycle length of the unit.
    """
    a = ring.index(alpha)
    mat = ring.fusion_matrix(a)
    invertible = (
        ring.n(a, ring.dual[a], ring.unit) == 1
        and bool(np.all(mat.sum(axis=0) == 1))
        and bool(np.all(mat.sum(axis=1) == 1))
    )
    if not invertible:
        raise AssumptionError(
            "A1", f"label {alpha!r} is not invertible, so it generates no cyclic symmetry"
        )
    perm = tuple(int(np.argmax(mat[i])) for i in range(ring.size))
    order = _cycle_len(perm, ring.unit)
    if _perm_order(perm) != order:
        # cannot happen for left fusion by an invertible label; guards
        # against a corrupted ring slipping past validation
        raise AssumptionError("A1", f"fusion by {alpha!r} is not a cyclic action")

    ii, jj, kk, vv = ring.entry_arrays()
    L = ring.size
    p = np.asarray(perm, dtype=np.int64)
    key = (ii * L + jj) * L + kk
    pkey = (p[ii] * L + jj) * L + p[kk]
    o1, o2 = np.argsort(key), np.argsort(pkey)
    if not (np.array_equal(key[o1], pkey[o2]) and np.array_equal(vv[o1], vv[o2])):
        raise AssumptionError(
            "A1", f"fusion by {alpha!r} fails first-slot equivariance"
        )
    return SymmetryAction(ring=ring, alpha=a, order=order, perm=perm)


# ---------------------------------------------------------------------------
# input record and assumption report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbifoldInput:
    """What the construction consumes.

    ``rho`` is a label index, or None to ask the checker to scan for a
    candidate (the scan failing is exactly how the known bad cases are
    reported). The attestation flag records (A2); nothing here can
    verify it.
    """

    action: SymmetryAction
    rho: int | None
    loi_trivial_attested: bool

    @classmethod
    def make(
        cls, action: SymmetryAction, rho: str | None, loi_trivial_attested: bool
    ) -> "OrbifoldInput":
        idx = None if rho is None else action.ring.index(rho)
        return cls(action=action, rho=idx, loi_trivial_attested=loi_trivial_attested)

    @property
    def rho_label(self) -> str | None:
        return None if self.rho is None else self.action.ring.labels[self.rho]


@dataclass(frozen=True)
class AssumptionItem:
    item: str
    passed: bool
    detail: str

    def __str__(self) -> str:
        status = "pass" if self.passed else "fail"
        return f"({self.item}) {status}: {self.detail}"


@dataclass(frozen=True)
class AssumptionReport:
    items: tuple[AssumptionItem, ...]
    rho: str | None
    m: int | None

    @property
    def passed(self) -> bool:
        return all(it.passed for it in self.items)

    def item(self, name: str) -> AssumptionItem:
        for it in self.items:
            if it.item == name:
                return it
        raise KeyError(name)

    def __str__(self) -> str:
        return "\n".join(str(it) for it in self.items)


def _rho_candidates(action: SymmetryAction) -> list[int]:
    ring = action.ring
    return [
        i
        for i in range(ring.size)
        if ring.dual[i] == i and action.perm[i] == i and ring.n(i, i, i) >= 1
    ]


def check_assumptions(inp: OrbifoldInput) -> AssumptionReport:
    """Report pass/fail for (A1), (A2), (A3).

    (A2) only echoes the attestation. For (A3) with an explicit rho the
    three defining conditions are checked one by one; with rho = None
    the ring is scanned and the least-index candidate, if any, is
    adopted.
    """
    action = inp.action
    ring = action.ring
    items: list[AssumptionItem] = []

    n = action.order
    items.append(
        AssumptionItem(
            "A1",
            n >= 2,
            f"{action.alpha_label!r} has exact fusion order {n}"
            + ("" if n >= 2 else ", which generates no symmetry to quotient by"),
        )
    )
    items.append(
        AssumptionItem(
            "A2",
            inp.loi_trivial_attested,
            "analytic triviality attested by caller"
            if inp.loi_trivial_attested
            else "analytic triviality not attested; it cannot be computed here",
        )
    )

    rho_label: str | None = None
    m: int | None = None
    if inp.rho is not None:
        r = inp.rho
        lab = ring.labels[r]
        conds = [
            (ring.dual[r] == r, f"{lab!r} is self-dual"),
            (action.perm[r] == r, f"{lab!r} is fixed by the action"),
            (ring.n(r, r, r) >= 1, f"{lab!r} appears in its own square"),
        ]
        ok = all(c for c, _ in conds)
        detail = "; ".join(
            text if good else "not: " + text for good, text in conds
        )
        items.append(AssumptionItem("A3", ok, detail))
        if ok:
            rho_label = lab
            m = ring.n(r, r, r)
    else:
        cands = _rho_candidates(action)
        if cands:
            r = cands[0]
            rho_label = ring.labels[r]
            m = ring.n(r, r, r)
            items.append(
                AssumptionItem(
                    "A3",
                    True,
                    f"scan found fixed self-dual self-coupled label {rho_label!r}",
                )
            )
        else:
            items.append(
                AssumptionItem(
                    "A3",
                    False,
                    "no label is simultaneously self-dual, fixed, and in its own square",
                )
            )

    return AssumptionReport(items=tuple(items), rho=rho_label, m=m)


def _require(inp: OrbifoldInput, *names: str) -> AssumptionReport:
    report = check_assumptions(inp)
    for name in names:
        it = report.item(name)
        if not it.passed:
            raise AssumptionError(name, it.detail)
    return report


# ---------------------------------------------------------------------------
# obstruction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObstructionValue:
    """The root of unity exp(2*pi*i*j/n), kept exact.

    ``l`` is its multiplicative order n/gcd(j, n); the trivial value is
    j = 0 with l = 1.
    """

    j: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError(f"obstruction modulus must be positive, got {self.n}")
        if not 0 <= self.j < self.n:
            raise InputError(
                f"obstruction exponent must satisfy 0 <= j < n, got j={self.j}, n={self.n}"
            )

    @property
    def l(self) -> int:
        return self.n // math.gcd(self.j, self.n)

    @property
    def is_trivial(self) -> bool:
        return self.j == 0

    def describe(self) -> str:
        if self.j == 0:
            return "1"
        if 2 * self.j == self.n:
            return "-1"
        return f"exp(2*pi*i*{self.j}/{self.n})"


@dataclass(frozen=True)
class ObstructionVerdict:
    """Result of the gcd test on m = N_{rho,rho}^{rho}.

    Trivial exactly when gcd(m, n) = 1; Inconclusive otherwise, which
    asserts nothing about the actual value.
    """

    m: int
    n: int
    verdict: Verdict

    def __post_init__(self) -> None:
        want = Verdict.TRIVIAL if math.gcd(self.m, self.n) == 1 else Verdict.INCONCLUSIVE
        if self.verdict is not want:
            raise InputError(
                f"verdict {self.verdict.value} is inconsistent with gcd({self.m}, {self.n})"
            )

    @classmethod
    def from_counts(cls, m: int, n: int) -> "ObstructionVerdict":
        v = Verdict.TRIVIAL if math.gcd(m, n) == 1 else Verdict.INCONCLUSIVE
        return cls(m=m, n=n, verdict=v)


def obstruction_bound(inp: OrbifoldInput) -> ObstructionVerdict:
    """Run the gcd test. Requires (A1) and (A3)."""
    report = _require(inp, "A1", "A3")
    assert report.m is not None
    return ObstructionVerdict.from_counts(report.m, inp.action.order)


# ---------------------------------------------------------------------------
# sectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MergedClass:
    members: tuple[str, ...]
    representative: str
    dimension: float


@dataclass(frozen=True)
class SplitFamily:
    """Pieces of one fixed label.

    ``extrapolated`` marks a fixed label other than the designated rho:
    such labels split by the same rule, but that case is outside what
    the construction is known to guarantee.
    """

    source: str
    pieces: tuple[str, ...]
    dimension: float
    extrapolated: bool


class ConjugacyOutcome(Enum):
    ALL_SELF_CONJUGATE = "AllSelfConjugate"
    UNDETERMINED = "Undetermined{AllSelfConjugate|ShiftByHalf}"


@dataclass(frozen=True)
class ConjugacyReport:
    """Duality on the output labels, as far as it is determined.

    ``merged`` maps each class representative to the representative of
    its conjugate class. ``split`` maps each fixed source label to the
    outcome for its family: for odd n the pieces are all
    self-conjugate; for even n the rule is two-valued (identity or the
    half-turn shift) and is reported undetermined.
    """

    merged: dict[str, str]
    split: dict[str, ConjugacyOutcome]
    n: int

    @property
    def all_self_conjugate(self) -> bool:
        return all(k == v for k, v in self.merged.items()) and all(
            v is ConjugacyOutcome.ALL_SELF_CONJUGATE for v in self.split.values()
        )


@dataclass(frozen=True)
class OrbifoldSectors:
    """Output labels of the quotient, with dimensions and dual action.

    Merged classes are named by their representative; pieces of a fixed
    label f are named f#0 .. f#{p-1}. ``dual_perm`` is the permutation
    induced by the canonical symmetry of the quotient: it fixes every
    merged class and shifts each piece family by one. ``conjugacy`` is
    populated when p = n (trivial obstruction), else None.
    """

    ring: FusionRing = field(repr=False)
    n: int
    obstruction: ObstructionValue
    merged: tuple[MergedClass, ...]
    split: tuple[SplitFamily, ...]
    dual_perm: dict[str, str]
    conjugacy: ConjugacyReport | None

    @property
    def p(self) -> int:
        return self.n // self.obstruction.l

    def labels(self) -> list[str]:
        out = [c.representative for c in self.merged]
        for fam in self.split:
            out.extend(fam.pieces)
        return out

    def dimensions(self) -> dict[str, float]:
        out = {c.representative: c.dimension for c in self.merged}
        for fam in self.split:
            for piece in fam.pieces:
                out[piece] = fam.dimension
        return out


def orbifold_sectors(
    inp: OrbifoldInput,
    obstruction: ObstructionValue,
    dims: DimensionTable | None = None,
) -> OrbifoldSectors:
    """Merge free orbits and split fixed labels.

    The obstruction must be supplied explicitly: use the trivial value
    when the gcd test certifies it, a recorded value otherwise. Orbits
    of size strictly between 1 and n are refused; order 1 degenerates
    to a copy of the input (every label a singleton class).
    """
    action = inp.action
    ring = action.ring
    n = action.order
    if obstruction.n != n:
        raise InputError(
            f"obstruction modulus {obstruction.n} does not match the action order {n}"
        )
    if dims is None:
        dims = fp_dimensions(ring)

    if n == 1:
        merged = tuple(
            MergedClass(members=(lab,), representative=lab, dimension=dims[i])
            for i, lab in enumerate(ring.labels)
        )
        dual_perm = {lab: lab for lab in ring.labels}
        sectors = OrbifoldSectors(
            ring=ring,
            n=1,
            obstruction=obstruction,
            merged=merged,
            split=(),
            dual_perm=dual_perm,
            conjugacy=None,
        )
        return replace(sectors, conjugacy=conjugacy_assignment(sectors))

    _require(inp, "A1", "A3")
    rho = inp.rho if inp.rho is not None else _rho_candidates(action)[0]

    l = obstruction.l
    p = n // l
    merged: list[MergedClass] = []
    split: list[SplitFamily] = []
    for orbit in action.orbits():
        if len(orbit) == n:
            members = tuple(ring.labels[i] for i in orbit)
            rep = min(members)
            merged.append(
                MergedClass(members=members, representative=rep, dimension=dims[orbit[0]])
            )
        elif len(orbit) == 1:
            f = orbit[0]
            lab = ring.labels[f]
            split.append(
                SplitFamily(
                    source=lab,
                    pieces=tuple(f"{lab}#{k}" for k in range(p)),
                    dimension=l * dims[f] / n,
                    extrapolated=f != rho,
                )
            )
        else:
            raise UnsupportedStructureError(
                f"orbit {tuple(ring.labels[i] for i in orbit)} has size {len(orbit)}, "
                f"strictly between 1 and {n}; only free orbits and fixed labels are handled"
            )

    dual_perm: dict[str, str] = {c.representative: c.representative for c in merged}
    for fam in split:
        for k, piece in enumerate(fam.pieces):
            dual_perm[piece] = fam.pieces[(k + 1) % p]

    sectors = OrbifoldSectors(
        ring=ring,
        n=n,
        obstruction=obstruction,
        merged=tuple(merged),
        split=tuple(split),
        dual_perm=dual_perm,
        conjugacy=None,
    )
    if p == n:
        sectors = replace(sectors, conjugacy=conjugacy_assignment(sectors))
    return sectors


def conjugacy_assignment(sectors: OrbifoldSectors) -> ConjugacyReport:
    """Duality of the output labels, where the construction decides it.

    Merged classes map to the class holding the dual of their
    representative. Piece families are all self-conjugate for odd n;
    for even n the outcome is reported undetermined. Only defined for
    the full splitting p = n.
    """
    if sectors.p != sectors.n:
        raise UnsupportedStructureError(
            f"conjugacy is only assigned for the full splitting p = n, "
            f"got p = {sectors.p}, n = {sectors.n}"
        )
    ring = sectors.ring
    class_of: dict[str, str] = {}
    for c in sectors.merged:
        for member in c.members:
            class_of[member] = c.representative

    merged: dict[str, str] = {}
    for c in sectors.merged:
        dual_label = ring.labels[ring.dual[ring.index(c.representative)]]
        if dual_label not in class_of:
            raise UnsupportedStructureError(
                f"dual of representative {c.representative!r} lies in a split family; "
                "no conjugate class exists"
            )
        merged[c.representative] = class_of[dual_label]

    outcome = (
        ConjugacyOutcome.ALL_SELF_CONJUGATE
        if sectors.n % 2 == 1
        else ConjugacyOutcome.UNDETERMINED
    )
    split = {fam.source: outcome for fam in sectors.split}
    return ConjugacyReport(merged=merged, split=split, n=sectors.n)


# ---------------------------------------------------------------------------
# global dimension bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GlobalDimCheck:
    input_sum: float
    output_sum: float
    n: int
    rel_error: float
    passed: bool

    def __str__(self) -> str:
        status = "ok" if self.passed else "FAIL"
        return (
            f"global dimension {self.input_sum:.10g} -> {self.output_sum:.10g} "
            f"(target {self.input_sum / self.n:.10g}, rel err {self.rel_error:.3g}) {status}"
        )


def global_dim_check(
    ring: FusionRing, sectors: OrbifoldSectors, tolerance: float = 1e-6
) -> GlobalDimCheck:
    """Sum of squared dimensions must drop by exactly the group order.

    Only meaningful for the full splitting p = n; refused otherwise.
    """
    if sectors.p != sectors.n:
        raise UnsupportedStructureError(
            "the squared-dimension law applies to the full splitting p = n only"
        )
    dims = fp_dimensions(ring)
    total_in = float(np.sum(np.asarray(dims.dims) ** 2))
    total_out = sum(d * d for d in sectors.dimensions().values())
    target = total_in / sectors.n
    rel = abs(total_out - target) / max(1.0, abs(target))
    return GlobalDimCheck(
        input_sum=total_in,
        output_sum=total_out,
        n=sectors.n,
        rel_error=rel,
        passed=rel < tolerance,
    )
