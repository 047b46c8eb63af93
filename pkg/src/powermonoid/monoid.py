"""Finite monoids and semigroups given by Cayley tables.

Elements are the integers ``0..n-1``.  A validated :class:`FiniteMonoid`
always has its identity at index 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

Table = tuple[tuple[int, ...], ...]


class MonoidError(ValueError):
    """Base class for table validation failures."""


class NotAssociative(MonoidError):
    def __init__(self, a: int, b: int, c: int):
        self.witness = (a, b, c)
        super().__init__(f"not associative: (a*b)*c != a*(b*c) for (a, b, c) = {self.witness}")


class NoIdentity(MonoidError):
    def __init__(self) -> None:
        self.witness = None
        super().__init__("no two-sided identity element")


class WrongIdentity(MonoidError):
    def __init__(self, e: int, a: int):
        self.witness = (e, a)
        super().__init__(f"claimed identity {e} fails on element {a}")


class NotAlmostBreakable(MonoidError):
    def __init__(self, x: int, y: int):
        self.witness = (x, y)
        super().__init__(f"pair {(x, y)} violates almost-breakability")


def _freeze(table: Iterable[Iterable[int]]) -> Table:
    return tuple(tuple(int(v) for v in row) for row in table)


def _check_shape(table: Table) -> None:
    n = len(table)
    for a, row in enumerate(table):
        if len(row) != n:
            raise MonoidError(f"table is not square: row {a} has length {len(row)}, expected {n}")
        for b, v in enumerate(row):
            if not 0 <= v < n:
                raise MonoidError(f"entry table[{a}][{b}] = {v} out of range")


def _associativity_witness(table: Table) -> Optional[tuple[int, int, int]]:
    n = len(table)
    if n == 0:
        return None
    t = np.asarray(table, dtype=np.intp)
    # [a, b, c] -> (ab)c and a(bc)
    ab_c = t[t[:, :, None], np.arange(n)[None, None, :]]
    a_bc = t[np.arange(n)[:, None, None], t[None, :, :]]
    bad = np.argwhere(ab_c != a_bc)
    if len(bad) == 0:
        return None
    a, b, c = (int(v) for v in bad[0])
    return a, b, c


@dataclass(frozen=True)
class Magma:
    """A finite binary operation, possibly empty, possibly without identity."""

    table: Table
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _freeze(self.table))
        _check_shape(self.table)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(len(self.table))))
        else:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        if len(self.labels) != len(self.table):
            raise MonoidError("labels do not match table size")
        if len(set(self.labels)) != len(self.labels):
            raise MonoidError("labels are not distinct")

    @property
    def size(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def associativity_witness(self) -> Optional[tuple[int, int, int]]:
        # computed on first use, then cached on the instance
        return _associativity_witness(self.table)

    @property
    def is_associative(self) -> bool:
        return self.associativity_witness is None

    def require_semigroup(self) -> None:
        w = self.associativity_witness
        if w is not None:
            raise NotAssociative(*w)

    def find_identity(self) -> Optional[int]:
        n = self.size
        for e in range(n):
            if all(self.table[e][a] == a == self.table[a][e] for a in range(n)):
                return e
        return None


@dataclass(frozen=True)
class FiniteMonoid:
    """A validated finite monoid whose identity is element 0.

    Build instances with :func:`validate_monoid`; the constructor itself
    re-checks the identity and associativity laws.
    """

    table: Table
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _freeze(self.table))
        _check_shape(self.table)
        if not self.table:
            raise MonoidError("a monoid has at least one element")
        n = len(self.table)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))
        else:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise MonoidError("labels must be distinct and match table size")
        for a in range(n):
            if self.table[0][a] != a or self.table[a][0] != a:
                raise WrongIdentity(0, a)
        w = _associativity_witness(self.table)
        if w is not None:
            raise NotAssociative(*w)

    @property
    def size(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return 0

    def __len__(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def as_magma(self) -> Magma:
        return Magma(self.table, self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown element label {label!r}") from None

    @cached_property
    def units(self) -> frozenset[int]:
        n, t = self.size, self.table
        return frozenset(x for x in range(n) if any(t[x][y] == 0 == t[y][x] for y in range(n)))

    @cached_property
    def ideals(self) -> tuple[int, ...]:
        """Bitmask of the two-sided principal ideal ``HxH`` of every ``x``."""
        n, t = self.size, self.table
        out = []
        for x in range(n):
            mask = 0
            for u in range(n):
                ux = t[u][x]
                for v in range(n):
                    mask |= 1 << t[ux][v]
            out.append(mask)
        return tuple(out)


def validate_monoid(raw: Magma | Sequence[Sequence[int]], identity: Optional[int] = None,
                    labels: Sequence[str] = ()) -> FiniteMonoid:
    """Check the monoid axioms and return a monoid with identity moved to index 0.

    ``identity`` is the claimed identity; when omitted it is searched for.
    Non-identity elements keep their relative order.
    """
    magma = raw if isinstance(raw, Magma) else Magma(_freeze(raw), tuple(labels))
    n = magma.size
    if n == 0:
        raise NoIdentity()
    t = magma.table
    if identity is None:
        identity = magma.find_identity()
        if identity is None:
            raise NoIdentity()
    else:
        if not 0 <= identity < n:
            raise MonoidError(f"identity index {identity} out of range")
        for a in range(n):
            if t[identity][a] != a or t[a][identity] != a:
                raise WrongIdentity(identity, a)
    magma.require_semigroup()
    order = [identity] + [a for a in range(n) if a != identity]
    return _reindex(magma.table, magma.labels, order)


def _reindex(table: Table, labels: Sequence[str], order: Sequence[int]) -> FiniteMonoid:
    """New monoid whose element ``i`` is old element ``order[i]``."""
    pos = {old: new for new, old in enumerate(order)}
    new = tuple(tuple(pos[table[a][b]] for b in order) for a in order)
    return FiniteMonoid(new, tuple(labels[a] for a in order))


def relabel(H: FiniteMonoid, perm: Sequence[int]) -> FiniteMonoid:
    """Isomorphic copy of ``H`` where old element ``a`` becomes ``perm[a]``.

    ``perm`` must fix the identity.
    """
    if perm[0] != 0 or sorted(perm) != list(range(H.size)):
        raise ValueError("perm must be a permutation fixing 0")
    inv = [0] * H.size
    for a, p in enumerate(perm):
        inv[p] = a
    return _reindex(H.table, H.labels, inv)


def mul(H: FiniteMonoid | Magma, a: int, b: int) -> int:
    return H.table[a][b]


def element_order(H: FiniteMonoid, x: int) -> int:
    """Size of the submonoid ``{x^0 = 1, x, x^2, ...}``."""
    seen = {0}
    p = x
    while p not in seen:
        seen.add(p)
        p = H.table[p][x]
    return len(seen)


def units(H: FiniteMonoid) -> frozenset[int]:
    return H.units


def principal_ideal(H: FiniteMonoid, x: int) -> frozenset[int]:
    m = H.ideals[x]
    return frozenset(i for i in range(H.size) if m >> i & 1)


def divides_h(H: FiniteMonoid, x: int, y: int) -> bool:
    """``x | y`` in H, i.e. ``y`` lies in ``HxH``."""
    return bool(H.ideals[x] >> y & 1)


def associated_h(H: FiniteMonoid, x: int, y: int) -> bool:
    return H.ideals[x] == H.ideals[y]


@dataclass(frozen=True)
class StructureFlags:
    commutative: bool
    group: bool
    idempotent: bool
    dedekind_finite: bool
    acyclic: bool
    unit_cancellative: bool
    reduced: bool
    periodic: bool
    aperiodic: bool


def structure_flags(H: FiniteMonoid) -> StructureFlags:
    n, t, U = H.size, H.table, H.units
    R = range(n)
    nonunits = [x for x in R if x not in U]
    commutative = all(t[a][b] == t[b][a] for a in R for b in R)
    dedekind = all(t[y][x] == 0 for x in R for y in R if t[x][y] == 0)
    # x == uxv with u or v a non-unit
    acyclic = not any(
        t[t[u][x]][v] == x
        for x in R for u in R for v in R
        if u not in U or v not in U
    )
    unit_canc = not any(t[x][y] == x or t[y][x] == x for x in R for y in nonunits)
    return StructureFlags(
        commutative=commutative,
        group=len(U) == n,
        idempotent=all(t[x][x] == x for x in R),
        dedekind_finite=dedekind,
        acyclic=acyclic,
        unit_cancellative=unit_canc,
        reduced=len(U) == 1,
        periodic=True,
        aperiodic=n == 1,
    )


def _as_semigroup(S: FiniteMonoid | Magma) -> Magma:
    if isinstance(S, FiniteMonoid):
        return S.as_magma()
    S.require_semigroup()
    return S


def is_balanced_pair(S: FiniteMonoid | Magma, x: int, y: int) -> bool:
    return S.table[x][y] in (x, y)


def unbalanced_pairs(S: FiniteMonoid | Magma) -> list[tuple[int, int]]:
    n = S.size
    return [(x, y) for x in range(n) for y in range(n) if not is_balanced_pair(S, x, y)]


def almost_breakable_witness(S: FiniteMonoid | Magma) -> Optional[tuple[int, int]]:
    """First pair ``(x, y)`` with neither ``xy`` nor ``yx`` in ``{x, y}``."""
    S = _as_semigroup(S)
    n = S.size
    for x in range(n):
        for y in range(x, n):
            if not is_balanced_pair(S, x, y) and not is_balanced_pair(S, y, x):
                return x, y
    return None


def is_almost_breakable(S: FiniteMonoid | Magma) -> bool:
    return almost_breakable_witness(S) is None


def is_breakable(S: FiniteMonoid | Magma) -> bool:
    S = _as_semigroup(S)
    n = S.size
    return all(is_balanced_pair(S, x, y) for x in range(n) for y in range(n))


def is_twisted(H: FiniteMonoid | Magma) -> Optional[tuple[int, int, int, int]]:
    """Lexicographically first ``(x, y, z, w)`` making H twisted, or None.

    ``(x, y)`` and ``(z, w)`` are unbalanced, ``{x, y}`` and ``{z, w}`` are
    disjoint, ``xy`` lies in ``{z, w}`` and ``zw`` lies in ``{x, y}``.
    """
    t = H.table
    pairs = unbalanced_pairs(H)
    for x, y in pairs:
        for z, w in pairs:
            if {x, y} & {z, w}:
                continue
            if t[x][y] in (z, w) and t[z][w] in (x, y):
                return x, y, z, w
    return None


def is_bridged(H: FiniteMonoid | Magma) -> Optional[tuple[int, int, int]]:
    """Lexicographically first ``(x1, x2, x3)`` making H bridged, or None.

    ``(x1, x2)``, ``(x2, x3)``, ``(x1, x3)`` are unbalanced and
    ``x1 x3`` is neither ``x1 x2`` nor ``x2 x3``.
    """
    t = H.table
    n = H.size
    for x1, x2, x3 in itertools.product(range(n), repeat=3):
        if (t[x1][x2] in (x1, x2) or t[x2][x3] in (x2, x3) or t[x1][x3] in (x1, x3)):
            continue
        if t[x1][x3] not in (t[x1][x2], t[x2][x3]):
            return x1, x2, x3
    return None


def unitization(S: Magma, identity_label: str = "1") -> FiniteMonoid:
    """Adjoin a fresh identity to ``S`` (always adjoined, even if S has one)."""
    S.require_semigroup()
    n = S.size
    table = [list(range(n + 1))]
    for a in range(n):
        table.append([a + 1] + [S.table[a][b] + 1 for b in range(n)])
    return FiniteMonoid(_freeze(table), (identity_label,) + S.labels)


def trivial_ideal_extension(H: FiniteMonoid, K: Magma) -> FiniteMonoid:
    """Disjoint union of H and K with ``hk = kh = k`` for h in H, k in K."""
    K = _as_semigroup(K)
    if set(H.labels) & set(K.labels):
        raise ValueError("H and K must have disjoint labels")
    m, k = H.size, K.size
    n = m + k
    table = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a < m and b < m:
                table[a][b] = H.table[a][b]
            elif a >= m and b >= m:
                table[a][b] = K.table[a - m][b - m] + m
            else:
                table[a][b] = a if a >= m else b
    return FiniteMonoid(_freeze(table), H.labels + K.labels)


def is_trivial_extension_of_nonunits(H: FiniteMonoid) -> bool:
    t, U = H.table, H.units
    return all(t[u][y] == y == t[y][u] for u in U for y in range(H.size) if y not in U)


def nonunit_subsemigroup(H: FiniteMonoid) -> Optional[Magma]:
    """Restriction of H to its non-units, or None if they are not closed."""
    U = H.units
    rest = [x for x in range(H.size) if x not in U]
    pos = {x: i for i, x in enumerate(rest)}
    table = []
    for a in rest:
        row = []
        for b in rest:
            c = H.table[a][b]
            if c not in pos:
                return None
            row.append(pos[c])
        table.append(tuple(row))
    return Magma(tuple(table), tuple(H.labels[x] for x in rest))


def nonunit_submonoid(H: FiniteMonoid) -> Optional[FiniteMonoid]:
    """The submonoid ``(H \\ units) + {1}``, or None if non-units are not closed."""
    if nonunit_subsemigroup(H) is None:
        return None
    keep = [0] + [x for x in range(H.size) if x not in H.units]
    pos = {x: i for i, x in enumerate(keep)}
    table = tuple(tuple(pos[H.table[a][b]] for b in keep) for a in keep)
    return FiniteMonoid(table, tuple(H.labels[x] for x in keep))


def opposite(H: FiniteMonoid) -> FiniteMonoid:
    n = H.size
    return FiniteMonoid(tuple(tuple(H.table[b][a] for b in range(n)) for a in range(n)), H.labels)


@lru_cache(maxsize=None)
def _perm_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All permutations of ``0..n-1`` fixing 0, and their inverses."""
    perms = np.array([(0,) + p for p in itertools.permutations(range(1, n))], dtype=np.intp)
    inv = np.empty_like(perms)
    rows = np.arange(len(perms))[:, None]
    inv[rows, perms] = np.arange(n)[None, :]
    return perms, inv


def canonical_table(H: FiniteMonoid | Table) -> Table:
    """Row-major lexicographically least relabeling of H fixing the identity."""
    table = H.table if isinstance(H, FiniteMonoid) else H
    n = len(table)
    if n <= 2:
        return _freeze(table)
    t = np.asarray(table, dtype=np.intp)
    perms, inv = _perm_arrays(n)
    # relabeled[k][i][j] = perms[k][ t[inv[k][i]][inv[k][j]] ]
    src = t[inv[:, :, None], inv[:, None, :]]
    relabeled = np.take_along_axis(perms, src.reshape(len(perms), -1), axis=1)
    # lexsort uses the last key as primary
    best = np.lexsort(relabeled.T[::-1])[0]
    return _freeze(relabeled[best].reshape(n, n))


def encode_table(table: Table) -> bytes:
    n = len(table)
    return bytes([n]) + bytes(v for row in table for v in row)


def canonical_form(H: FiniteMonoid) -> bytes:
    """Byte string equal for two monoids exactly when they are isomorphic."""
    return encode_table(canonical_table(H))
