"""Fusion rings: exact structure constants, validation, dimensions.

A :class:`FusionRing` is a finite list of sector labels with sparse
nonnegative integer structure constants ``N[i,j,k]``, a unit label and a
duality involution. All multiplicity arithmetic is exact integer; floats
appear only in Frobenius-Perron dimensions.

Constants are stored pair-major (see :mod:`orbifusion.kernels`), which
keeps hand-written rings cheap and lets the level-24 SU(3) table share
the same validation path as a three-label toy ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NumericError, SchemaError, ValidationError
from .kernels import associativity_violations

__all__ = [
    "FusionRing",
    "FormalSum",
    "DimensionTable",
    "ValidationReport",
    "AxiomFailure",
    "GroupClass",
    "validate_ring",
    "require_valid",
    "fuse",
    "hom_dim",
    "fp_dimensions",
    "invertibles",
    "classify_group",
    "classify_by_orders",
]


class FusionRing:
    """Immutable fusion ring on string labels.

    Parameters
    ----------
    labels : sequence of str
        Ordered, duplicate-free sector names. Indices into this list are
        the working representation everywhere.
    unit : int
        Index of the unit label.
    dual : sequence of int
        ``dual[i]`` is the index of the conjugate of label ``i``. Must be
        a bijection; the involution property is an axiom checked by
        :func:`validate_ring`, not a construction requirement.
    nconst : mapping or iterable
        Either a mapping ``(i, j, k) -> n`` or an iterable of
        ``(i, j, k, n)`` tuples, integer ``n >= 1``, absent means zero.

    Notes
    -----
    Instances never mutate after ``__init__``; every operation on them
    is a pure function, so sharing between threads is safe.
    """

    __slots__ = ("labels", "unit", "dual", "_ptr", "_idx", "_val", "_index")

    def __init__(
        self,
        labels: Sequence[str],
        unit: int,
        dual: Sequence[int],
        nconst: Mapping[tuple[int, int, int], int] | Iterable[tuple[int, int, int, int]],
    ):
        labels = tuple(str(x) for x in labels)
        if not labels:
            raise SchemaError("a fusion ring needs at least one label")
        if len(set(labels)) != len(labels):
            raise SchemaError("duplicate labels")
        L = len(labels)
        if not (0 <= unit < L):
            raise SchemaError(f"unit index {unit} out of range")
        dual = tuple(int(d) for d in dual)
        if len(dual) != L or sorted(dual) != list(range(L)):
            raise SchemaError("dual must be a bijection on label indices")
        if isinstance(nconst, Mapping):
            triples = [(i, j, k, n) for (i, j, k), n in nconst.items()]
        else:
            triples = [tuple(t) for t in nconst]
        entries = []
        for i, j, k, n in triples:
            i, j, k = int(i), int(j), int(k)
            if not (0 <= i < L and 0 <= j < L and 0 <= k < L):
                raise SchemaError(f"structure constant index out of range: {(i, j, k)}")
            if int(n) != n or n < 0:
                raise SchemaError(f"structure constant must be a nonnegative integer: {(i, j, k, n)}")
            if n == 0:
                continue
            entries.append((i * L + j, k, int(n)))
        entries.sort()
        if any(entries[t][:2] == entries[t + 1][:2] for t in range(len(entries) - 1)):
            raise SchemaError("duplicate (i, j, k) entry")
        self.labels = labels
        self.unit = int(unit)
        self.dual = dual
        ptr = np.zeros(L * L + 1, dtype=np.int64)
        for p, _, _ in entries:
            ptr[p + 1] += 1
        np.cumsum(ptr, out=ptr)
        self._ptr = ptr
        self._idx = np.fromiter((k for _, k, _ in entries), dtype=np.int32, count=len(entries))
        self._val = np.fromiter((n for _, _, n in entries), dtype=np.int64, count=len(entries))
        self._index = {lab: t for t, lab in enumerate(labels)}

    @classmethod
    def from_labels(
        cls,
        labels: Sequence[str],
        unit: str,
        dual: Mapping[str, str],
        triples: Iterable[tuple[str, str, str, int]],
    ) -> "FusionRing":
        """Build from label strings instead of indices."""
        order = {lab: t for t, lab in enumerate(labels)}
        if len(order) != len(labels):
            raise SchemaError("duplicate labels")

        def at(lab):
            try:
                return order[lab]
            except KeyError:
                raise SchemaError(f"unknown label {lab!r}") from None

        if set(dual) != set(labels):
            raise SchemaError("dual map must cover every label exactly once")
        dual_ix = [at(dual[lab]) for lab in labels]
        n_ix = [(at(a), at(b), at(c), n) for a, b, c, n in triples]
        return cls(labels, at(unit), dual_ix, n_ix)

    @classmethod
    def from_csr(
        cls,
        labels: Sequence[str],
        unit: int,
        dual: Sequence[int],
        ptr: np.ndarray,
        idx: np.ndarray,
        val: np.ndarray,
    ) -> "FusionRing":
        """Adopt prebuilt pair-major arrays (bulk constructors)."""
        self = cls.__new__(cls)
        labels = tuple(labels)
        L = len(labels)
        if len(set(labels)) != L:
            raise SchemaError("duplicate labels")
        if len(ptr) != L * L + 1:
            raise SchemaError("ptr length mismatch")
        self.labels = labels
        self.unit = int(unit)
        self.dual = tuple(int(d) for d in dual)
        if sorted(self.dual) != list(range(L)):
            raise SchemaError("dual must be a bijection on label indices")
        self._ptr = np.asarray(ptr, dtype=np.int64)
        self._idx = np.asarray(idx, dtype=np.int32)
        self._val = np.asarray(val, dtype=np.int64)
        self._index = {lab: t for t, lab in enumerate(labels)}
        return self

    # -- basic queries ----------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def nnz(self) -> int:
        return len(self._idx)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise SchemaError(f"unknown label {label!r}") from None

    def row(self, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
        """Sparse row of the product ``i * j``: (output indices, counts)."""
        L = self.size
        p = i * L + j
        lo, hi = self._ptr[p], self._ptr[p + 1]
        return self._idx[lo:hi], self._val[lo:hi]

    def n(self, i: int, j: int, k: int) -> int:
        """Structure constant ``N[i,j,k]``."""
        ks, vs = self.row(i, j)
        t = np.searchsorted(ks, k)
        if t < len(ks) and ks[t] == k:
            return int(vs[t])
        return 0

    def iter_entries(self):
        """Yield every nonzero ``(i, j, k, n)`` in deterministic order."""
        L = self.size
        counts = np.diff(self._ptr)
        pairs = np.repeat(np.arange(L * L, dtype=np.int64), counts)
        for p, k, v in zip(pairs, self._idx, self._val):
            yield int(p) // L, int(p) % L, int(k), int(v)

    def entry_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """All nonzeros as parallel arrays ``(i, j, k, n)``."""
        L = self.size
        counts = np.diff(self._ptr)
        pairs = np.repeat(np.arange(L * L, dtype=np.int64), counts)
        return pairs // L, pairs % L, self._idx.astype(np.int64), self._val.copy()

    def fusion_matrix(self, i: int) -> np.ndarray:
        """Dense matrix of left fusion by label ``i``: ``M[j, k] = N[i,j,k]``."""
        L = self.size
        out = np.zeros((L, L), dtype=np.int64)
        lo, hi = self._ptr[i * L], self._ptr[(i + 1) * L]
        rows = np.repeat(np.arange(L), np.diff(self._ptr[i * L : (i + 1) * L + 1]))
        out[rows, self._idx[lo:hi]] = self._val[lo:hi]
        return out

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self._ptr, self._idx, self._val

    def __repr__(self):
        return f"FusionRing({self.size} labels, unit={self.labels[self.unit]!r}, nnz={self.nnz})"


@dataclass(frozen=True)
class FormalSum:
    """Nonnegative integer combination of ring labels, by index.

    Zero coefficients are dropped at construction, so equality of the
    stored mapping is equality of the sums.
    """

    coeffs: tuple[tuple[int, int], ...]

    @staticmethod
    def make(coeffs: Mapping[int, int] | Iterable[tuple[int, int]]) -> "FormalSum":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, int] = {}
        for i, c in items:
            if int(c) != c or c < 0:
                raise SchemaError(f"multiplicity must be a nonnegative integer, got {c!r}")
            if c:
                acc[int(i)] = acc.get(int(i), 0) + int(c)
        return FormalSum(tuple(sorted(acc.items())))

    @staticmethod
    def basis(i: int) -> "FormalSum":
        return FormalSum(((int(i), 1),))

    def coeff(self, i: int) -> int:
        for j, c in self.coeffs:
            if j == i:
                return c
        return 0

    def items(self):
        return iter(self.coeffs)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum.make(list(self.coeffs) + list(other.coeffs))

    def total(self) -> int:
        return sum(c for _, c in self.coeffs)

    def describe(self, ring: FusionRing) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in self.coeffs:
            lab = ring.labels[i]
            parts.append(lab if c == 1 else f"{c} {lab}")
        return " + ".join(parts)


@dataclass(frozen=True)
class DimensionTable:
    """Frobenius-Perron dimensions per label, with the working tolerance."""

    dims: tuple[float, ...]
    tolerance: float = 1e-9

    def __getitem__(self, i: int) -> float:
        return self.dims[i]

    def global_dim(self) -> float:
        """Sum of squared dimensions."""
        return float(sum(d * d for d in self.dims))


@dataclass(frozen=True)
class AxiomFailure:
    axiom: str
    witnesses: tuple[tuple, ...]

    def __str__(self):
        head = ", ".join(repr(w) for w in self.witnesses[:3])
        more = "" if len(self.witnesses) <= 3 else f", +{len(self.witnesses) - 3} more"
        return f"{self.axiom}: {head}{more}"


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_ring`, at most 20 witnesses per axiom."""

    failures: tuple[AxiomFailure, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def __str__(self):
        if self.passed:
            return "pass"
        return "; ".join(str(f) for f in self.failures)


_WITNESS_CAP = 20


def validate_ring(ring: FusionRing, *, use_numba: bool | None = None) -> ValidationReport:
    """Check every fusion-ring axiom, exhaustively.

    Axioms, in reporting order: unit (left and right), duality
    involution, dual-unit pairing ``N[i,j,unit] = delta(j, dual i)``,
    Frobenius reciprocity, associativity. Witnesses are index tuples;
    associativity witnesses are ``(i, j, k, l, lhs, rhs)``.
    """
    failures = []
    L = ring.size
    e = ring.unit

    wit = []
    for j in range(L):
        ks, vs = ring.row(e, j)
        if not (len(ks) == 1 and ks[0] == j and vs[0] == 1):
            wit.append((e, j))
        ks, vs = ring.row(j, e)
        if not (len(ks) == 1 and ks[0] == j and vs[0] == 1):
            wit.append((j, e))
        if len(wit) >= _WITNESS_CAP:
            break
    if wit:
        failures.append(AxiomFailure("unit", tuple(wit[:_WITNESS_CAP])))

    wit = [(i,) for i in range(L) if ring.dual[ring.dual[i]] != i]
    if ring.dual[e] != e:
        wit.append((e,))
    if wit:
        failures.append(AxiomFailure("duality-involution", tuple(wit[:_WITNESS_CAP])))

    ii, jj, kk, vv = ring.entry_arrays()
    sel = kk == e
    seen = {(int(a), int(b)): int(v) for a, b, v in zip(ii[sel], jj[sel], vv[sel])}
    wit = []
    for i in range(L):
        want = {(i, ring.dual[i]): 1}
        got = {key: v for key, v in seen.items() if key[0] == i}
        if got != want:
            for key in set(got) | set(want):
                wit.append((key[0], key[1], e, got.get(key, 0), want.get(key, 0)))
    if wit:
        failures.append(AxiomFailure("dual-unit", tuple(sorted(wit)[:_WITNESS_CAP])))

    dual = np.asarray(ring.dual, dtype=np.int64)
    key = (ii * L + jj) * L + kk
    order = np.argsort(key, kind="stable")
    frob_ok = True
    for a, b, c in ((dual[ii], kk, jj), (kk, dual[jj], ii)):
        k2 = (a * L + b) * L + c
        o2 = np.argsort(k2, kind="stable")
        if not (
            np.array_equal(key[order], k2[o2]) and np.array_equal(vv[order], vv[o2])
        ):
            frob_ok = False
    if not frob_ok:
        wit = []
        for i, j, k, v in zip(ii, jj, kk, vv):
            i, j, k, v = int(i), int(j), int(k), int(v)
            a = ring.n(ring.dual[i], k, j)
            b = ring.n(k, ring.dual[j], i)
            if a != v or b != v:
                wit.append((i, j, k, v, a, b))
                if len(wit) >= _WITNESS_CAP:
                    break
        failures.append(AxiomFailure("frobenius-reciprocity", tuple(wit)))

    ptr, idx, val = ring.csr()
    ok, aw = associativity_violations(ptr, idx, val, L, cap=_WITNESS_CAP, use_numba=use_numba)
    if not ok:
        failures.append(AxiomFailure("associativity", tuple(map(tuple, aw.tolist()))))

    return ValidationReport(tuple(failures))


def require_valid(ring: FusionRing) -> None:
    """Raise :class:`ValidationError` unless the ring passes validation."""
    report = validate_ring(ring)
    if not report.passed:
        raise ValidationError(f"ring fails validation: {report}", report=report)


def fuse(ring: FusionRing, x: FormalSum, y: FormalSum) -> FormalSum:
    """Bilinear product of two formal sums."""
    acc: dict[int, int] = {}
    for i, a in x.items():
        for j, b in y.items():
            ks, vs = ring.row(i, j)
            for k, v in zip(ks, vs):
                k = int(k)
                acc[k] = acc.get(k, 0) + a * b * int(v)
    return FormalSum.make(acc)


def hom_dim(ring: FusionRing, x: FormalSum, y: FormalSum) -> int:
    """Dimension of the intertwiner space between two sums of sectors.

    For sums of irreducibles this is the coefficient dot product.
    """
    ys = dict(y.items())
    return sum(a * ys.get(i, 0) for i, a in x.items())


def fp_dimensions(
    ring: FusionRing,
    *,
    tolerance: float = 1e-9,
    max_iter: int = 100_000,
) -> DimensionTable:
    """Frobenius-Perron dimensions by power iteration.

    Iterates ``M = sum_i N_i`` (symmetric for a ring satisfying
    Frobenius reciprocity, primitive because the diagonal is positive
    and the unit connects every label) from the all-ones vector and
    normalizes so the unit has dimension exactly 1. The table is checked
    against the defining equations before it is returned.
    """
    L = ring.size
    ii, jj, kk, vv = ring.entry_arrays()
    M = np.zeros((L, L), dtype=np.float64)
    np.add.at(M, (jj, kk), vv)
    v = np.ones(L, dtype=np.float64) / math.sqrt(L)
    for _ in range(max_iter):
        w = M @ v
        lam = float(v @ w)
        if np.max(np.abs(w - lam * v)) <= 1e-12 * max(1.0, lam):
            break
        nw = np.linalg.norm(w)
        if nw == 0:
            raise NumericError("power iteration collapsed to zero")
        v = w / nw
    else:
        raise NumericError("power iteration did not converge; is the ring validated?")
    if v[ring.unit] <= 0:
        v = -v
    d = v / v[ring.unit]

    if abs(d[ring.unit] - 1.0) > tolerance or np.min(d) < 1 - tolerance:
        raise NumericError("dimension vector failed positivity checks")
    rhs = np.zeros(L * L, dtype=np.float64)
    np.add.at(rhs, ii * L + jj, vv * d[kk])
    lhs = np.outer(d, d).ravel()
    if np.max(np.abs(lhs - rhs)) > tolerance * max(1.0, float(np.max(lhs))):
        raise NumericError("dimensions do not satisfy the product equations")
    for i in range(L):
        if abs(d[i] - d[ring.dual[i]]) > tolerance:
            raise NumericError("dimensions are not duality invariant")
    return DimensionTable(tuple(float(x) for x in d), tolerance)


def invertibles(ring: FusionRing) -> list[str]:
    """Labels whose fusion matrix is a permutation matrix.

    Equivalent to dimension 1; `classify_group` accepts the result.
    """
    out = []
    L = ring.size
    for i in range(L):
        cols = np.full(L, -1, dtype=np.int64)
        good = True
        for j in range(L):
            ks, vs = ring.row(i, j)
            if len(ks) != 1 or vs[0] != 1:
                good = False
                break
            cols[j] = ks[0]
        if good and len(set(cols.tolist())) == L:
            out.append(ring.labels[i])
    return out


@dataclass(frozen=True)
class GroupClass:
    """Isomorphism class of a small group, named by its standard form."""

    name: str
    order: int

    def __str__(self):
        return self.name


def _template_order_multisets(max_order: int = 12) -> dict[tuple[int, ...], GroupClass]:
    """Order multisets of the recognizable families, computed not quoted."""

    def cyclic_orders(n):
        return [n // math.gcd(n, t) for t in range(n)]

    out: dict[tuple[int, ...], GroupClass] = {}

    def put(orders, name, order):
        key = tuple(sorted(orders))
        out.setdefault(key, GroupClass(name, order))

    for n in range(1, max_order + 1):
        put(cyclic_orders(n), f"Z/{n}" if n > 1 else "trivial", n)
    # products of two or three cyclic factors, smallest factors first
    for a in range(2, max_order + 1):
        for b in range(a, max_order + 1):
            if a * b > max_order:
                break
            # order of (s, t) in Z/a x Z/b is the lcm of the component orders
            orders = [
                math.lcm(a // math.gcd(a, s), b // math.gcd(b, t))
                for s in range(a)
                for t in range(b)
            ]
            put(orders, f"Z/{a} x Z/{b}", a * b)
            for c in range(b, max_order + 1):
                if a * b * c > max_order:
                    break
                orders3 = [
                    math.lcm(math.lcm(a // math.gcd(a, s), b // math.gcd(b, t)), c // math.gcd(c, u))
                    for s in range(a)
                    for t in range(b)
                    for u in range(c)
                ]
                put(orders3, f"Z/{a} x Z/{b} x Z/{c}", a * b * c)
    for m in range(3, max_order // 2 + 1):
        orders = [m // math.gcd(m, t) for t in range(m)] + [2] * m
        put(orders, f"D_{m}", 2 * m)
    return out


_GROUP_TEMPLATES = _template_order_multisets()


def classify_by_orders(orders: Sequence[int]) -> GroupClass:
    """Identify a group of order <= 12 from its element-order multiset.

    Cyclic groups, products of cyclics and dihedral groups are pairwise
    separated by this invariant at these orders. Anything else comes
    back as an unknown class of the right order.
    """
    key = tuple(sorted(int(o) for o in orders))
    if not key or key[0] != 1:
        raise SchemaError("order multiset must contain exactly one identity entry")
    got = _GROUP_TEMPLATES.get(key)
    if got is not None:
        return got
    return GroupClass(f"unknown group of order {len(key)}", len(key))


def classify_group(ring: FusionRing, elems: Sequence[str]) -> GroupClass:
    """Isomorphism class of a set of invertible labels, order <= 12.

    ``elems`` must be closed under fusion and duality; violations raise
    :class:`InputError` rather than reporting a wrong group.
    """
    from .errors import InputError

    ix = [ring.index(lab) for lab in elems]
    members = set(ix)
    if ring.unit not in members:
        raise InputError("the unit must belong to the invertible set")
    table: dict[tuple[int, int], int] = {}
    for i in ix:
        if ring.dual[i] not in members:
            raise InputError(f"{ring.labels[i]!r} has its dual outside the set")
        for j in ix:
            ks, vs = ring.row(i, j)
            if len(ks) != 1 or vs[0] != 1:
                raise InputError(f"{ring.labels[i]!r} * {ring.labels[j]!r} is not a single sector")
            if int(ks[0]) not in members:
                raise InputError(f"{ring.labels[i]!r} * {ring.labels[j]!r} leaves the set")
            table[(i, j)] = int(ks[0])
    if len(members) > 12:
        raise InputError("group classification is implemented for order <= 12")

    def element_order(g):
        acc = g
        n = 1
        while acc != ring.unit:
            acc = table[(g, acc)]
            n += 1
            if n > len(members):
                raise InputError("set is not a group under fusion")
        return n

    return classify_by_orders([element_order(g) for g in members])
