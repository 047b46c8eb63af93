"""Arithmetic of the reduced power monoid of a finite monoid H.

An element of the power monoid is a subset of H containing the identity,
stored as an ``int`` bitmask (bit ``i`` set when element ``i`` belongs to
the set; bit 0 is the identity).  A word is a tuple of such masks and a
multiset is a word sorted by :func:`set_key`.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .monoid import FiniteMonoid, NotAlmostBreakable, almost_breakable_witness

Word = tuple[int, ...]

ONE = 1  # the set {e}


class BadSubset(ValueError):
    pass


def members(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def set_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Canonical order on subsets: by size, then by sorted element tuple."""
    elems = tuple(members(mask))
    return len(elems), elems


def sort_sets(masks: Iterable[int]) -> list[int]:
    return sorted(masks, key=set_key)


def multiset_of(word: Sequence[int]) -> Word:
    return tuple(sort_sets(word))


def _submasks_with_one(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` containing bit 0, in increasing numeric order."""
    rest = mask & ~ONE
    subs = []
    s = rest
    while True:
        subs.append(s | ONE)
        if s == 0:
            break
        s = (s - 1) & rest
    return reversed(subs)


class PowerMonoid:
    """Precomputed setwise multiplication over a fixed ground monoid."""

    def __init__(self, H: FiniteMonoid):
        self.H = H
        n = H.size
        self.n = n
        self.full = (1 << n) - 1
        t = H.table
        # translates[x][Y] = {x*y : y in Y}
        self.translates = []
        for x in range(n):
            row = [0] * (1 << n)
            for Y in range(1, 1 << n):
                low = Y & -Y
                y = low.bit_length() - 1
                row[Y] = row[Y ^ low] | (1 << t[x][y])
            self.translates.append(row)
        self._irreducible = None
        self._atom = None

    def subset(self, elems: Iterable[int]) -> int:
        mask = 0
        for x in elems:
            if not 0 <= x < self.n:
                raise BadSubset(f"element {x} out of range")
            mask |= 1 << x
        if not mask & ONE:
            raise BadSubset("subset must contain the identity")
        return mask

    def check(self, X: int) -> int:
        if X & ~self.full or not X & ONE:
            raise BadSubset(f"{X:#b} is not a subset of H containing the identity")
        return X

    def all_sets(self) -> list[int]:
        """Every element of the power monoid, in canonical order."""
        return sort_sets(m for m in range(1, self.full + 1) if m & ONE)

    def mul(self, X: int, Y: int) -> int:
        out = 0
        tr = self.translates
        x = 0
        while X:
            if X & 1:
                out |= tr[x][Y]
            X >>= 1
            x += 1
        return out

    def product(self, word: Iterable[int]) -> int:
        P = ONE
        for A in word:
            P = self.mul(P, A)
        return P

    def divides(self, A: int, X: int) -> bool:
        """Whether ``U A V = X`` for some U, V; only U, V inside X need be tried."""
        if A & ~X:
            return False
        for U in _submasks_with_one(X):
            UA = self.mul(U, A)
            if UA & ~X:
                continue
            for V in _submasks_with_one(X):
                if self.mul(UA, V) == X:
                    return True
        return False

    def _scan_pairs(self) -> None:
        reducible = set()
        non_atom = set()
        sets = [m for m in range(1, self.full + 1) if m & ONE]
        for Y in sets:
            for Z in sets:
                P = self.mul(Y, Z)
                if Y != P and Z != P:
                    reducible.add(P)
                if Y != ONE and Z != ONE:
                    non_atom.add(P)
        self._irreducible = frozenset(m for m in sets if m != ONE and m not in reducible)
        self._atom = frozenset(m for m in sets if m != ONE and m not in non_atom)

    @property
    def irreducibles(self) -> frozenset[int]:
        if self._irreducible is None:
            self._scan_pairs()
        return self._irreducible

    @property
    def atoms(self) -> frozenset[int]:
        if self._atom is None:
            self._scan_pairs()
        return self._atom

    def is_irreducible(self, X: int) -> bool:
        return X in self.irreducibles

    def is_atom(self, X: int) -> bool:
        return X in self.atoms

    def is_quark(self, X: int) -> bool:
        if X == ONE:
            return False
        return not any(
            self.divides(A, X)
            for A in _submasks_with_one(X)
            if A != ONE and A != X
        )

    def irreducibles_within(self, X: int) -> list[int]:
        return sort_sets(A for A in self.irreducibles if A & ~X == 0)

    def factorizations(self, X: int, max_len: int) -> list[Word]:
        """All words of irreducibles of length at most ``max_len`` with product X."""
        letters = self.irreducibles_within(X)
        out: list[Word] = []

        def walk(P: int, word: list[int]) -> None:
            if P == X:
                out.append(tuple(word))
            if len(word) == max_len:
                return
            for A in letters:
                Q = self.mul(P, A)
                if Q & ~X == 0:
                    word.append(A)
                    walk(Q, word)
                    word.pop()

        walk(ONE, [])
        out.sort(key=lambda w: (len(w), [set_key(a) for a in w]))
        return out

    def minimal_factorizations(self, X: int) -> list[tuple[Word, Word]]:
        """Minimal factorizations of X as ``(multiset, witness word)`` pairs.

        Only words whose every letter strictly enlarges the running product
        are explored: a letter that leaves the prefix product unchanged can
        be deleted, so such a word is never minimal.  Strict growth also
        caps the length at ``|X| - 1``.
        """
        if X == ONE:
            return [((), ())]
        letters = self.irreducibles_within(X)
        found: dict[Word, Word] = {}

        def walk(P: int, word: list[int]) -> None:
            for A in letters:
                Q = self.mul(P, A)
                if Q == P or Q & ~X:
                    continue
                word.append(A)
                if Q == X:
                    key = multiset_of(word)
                    if key not in found:
                        found[key] = tuple(word)
                else:
                    walk(Q, word)
                word.pop()

        walk(ONE, [])
        return [(m, found[m]) for m in minimal_multisets(found)]

    def square_free_factorization(self, X: int) -> Word:
        """Factor X into pairwise distinct 2-element sets; H must be almost-breakable."""
        w = almost_breakable_witness(self.H)
        if w is not None:
            raise NotAlmostBreakable(*w)
        return self._sf(X)

    def _sf(self, X: int) -> Word:
        t, ideals = self.H.table, self.H.ideals
        elems = [a for a in members(X) if a != 0]
        if len(elems) <= 1:
            return () if not elems else (X,)
        # x has the smallest principal ideal in X (ideals form a chain)
        x = min(elems, key=lambda a: (bin(ideals[a]).count("1"), a))
        Y = [y for y in elems if ideals[y] == ideals[x]]
        others = [a for a in elems if ideals[a] != ideals[x]]
        A = [u for u in others if all(t[u][y] == y for y in Y)]
        B = [v for v in others if any(t[v][y] != y for y in Y)]
        mask = lambda s: ONE | sum(1 << a for a in s)  # noqa: E731
        if not B:
            if not A:
                return tuple(ONE | 1 << y for y in Y)
            return self._sf(mask(A)) + self._sf(mask(Y))
        y = min(y for y in Y if any(t[b][y] != y for b in B))
        rest = mask(A) | mask(B) | (mask(Y) & ~(1 << y))
        return (ONE | 1 << y,) + self._sf(rest)


def minimal_multisets(candidates: Iterable[Word]) -> list[Word]:
    """The inclusion-minimal multisets among ``candidates``, canonically sorted."""
    cands = sorted(set(candidates), key=lambda m: (len(m), [set_key(a) for a in m]))
    counts = [Counter(m) for m in cands]
    keep = []
    for i, c in enumerate(counts):
        if not any(
            len(cands[j]) < len(cands[i]) and all(c[k] >= v for k, v in counts[j].items())
            for j in range(i)
        ):
            keep.append(cands[i])
    return keep


def equivalent(w1: Sequence[int], w2: Sequence[int]) -> bool:
    """Words are equivalent in the power monoid exactly when they are permutations of each other."""
    return Counter(w1) == Counter(w2)


def is_antichain(H: FiniteMonoid, elems: Iterable[int]) -> bool:
    """No element of ``elems`` divides a different one in H."""
    s = list(elems)
    return all(not (H.ideals[a] >> b & 1) for a in s for b in s if a != b)


@lru_cache(maxsize=256)
def power_monoid(H: FiniteMonoid) -> PowerMonoid:
    return PowerMonoid(H)


def pmul(H: FiniteMonoid, X: int, Y: int) -> int:
    return power_monoid(H).mul(X, Y)


def word_product(H: FiniteMonoid, word: Iterable[int]) -> int:
    return power_monoid(H).product(word)


def divides_p(H: FiniteMonoid, A: int, X: int) -> bool:
    return power_monoid(H).divides(A, X)


def is_irreducible(H: FiniteMonoid, X: int) -> bool:
    return power_monoid(H).is_irreducible(X)


def is_atom(H: FiniteMonoid, X: int) -> bool:
    return power_monoid(H).is_atom(X)


def is_quark(H: FiniteMonoid, X: int) -> bool:
    return power_monoid(H).is_quark(X)


def irreducibles_within(H: FiniteMonoid, X: int) -> list[int]:
    return power_monoid(H).irreducibles_within(X)


def factorizations(H: FiniteMonoid, X: int, max_len: int) -> list[Word]:
    return power_monoid(H).factorizations(X, max_len)


def minimal_factorizations(H: FiniteMonoid, X: int) -> list[tuple[Word, Word]]:
    return power_monoid(H).minimal_factorizations(X)


def square_free_factorization_ab(H: FiniteMonoid, X: int) -> Word:
    return power_monoid(H).square_free_factorization(X)


def verify_antichain_irreducible(H: FiniteMonoid, A: Iterable[int]) -> bool:
    """True when the identity-free set ``A`` is a divisibility antichain of H.

    Any such ``A`` makes ``{e} + A`` irreducible; tests use this as a generator.
    """
    A = list(A)
    if not A or 0 in A:
        raise BadSubset("A must be non-empty and avoid the identity")
    return is_antichain(H, A)
