"""Factorization properties of the reduced power monoid of a finite monoid.

Two independent routes are provided for unique minimal factorization:

* ``pm_is_umf_brute`` enumerates every set and its minimal factorizations;
* ``pm_is_umf_theorem`` applies the structural criteria on H alone.

:func:`classify` runs both and records whether they agree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

from . import monoid as mc
from .monoid import FiniteMonoid, StructureFlags
from .pset import ONE, Word, power_monoid
from .serialize import subset_to_labels, word_to_labels

SCHEMA = 1
DEFAULT_BUDGET = 64  # max number of power-monoid elements for brute force (|H| <= 7)


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    anchor: str
    witness: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {"rule": self.rule, "anchor": self.anchor, "witness": list(self.witness)}


@dataclass
class TriState:
    value: Verdict
    trace: list[TraceEntry] = field(default_factory=list)
    reduced: Optional[FiniteMonoid] = None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "value": self.value.value,
            "trace": [e.to_dict() for e in self.trace],
        }
        if self.reduced is not None:
            d["reduced_monoid"] = {
                "labels": list(self.reduced.labels),
                "table": [list(r) for r in self.reduced.table],
            }
        return d


@dataclass(frozen=True)
class BFWitness:
    """An idempotent set with factorizations of two different lengths."""

    subset: int
    short: Word
    long: Word


@dataclass(frozen=True)
class MinimalWitness:
    """A set together with all of its minimal factorizations."""

    subset: int
    multisets: tuple[Word, ...]
    words: tuple[Word, ...]

    @property
    def lengths(self) -> list[int]:
        return sorted({len(m) for m in self.multisets})


class BudgetExceeded(RuntimeError):
    def __init__(self, report: "ClassificationReport", budget: int):
        self.report = report
        self.budget = budget
        super().__init__(
            f"brute force needs {1 << (report.size - 1)} sets, budget is {budget}; partial report attached"
        )


# --- atomicity and bounded factorization -----------------------------------

def pm_is_atomic(H: FiniteMonoid) -> bool:
    """Atomic exactly when ``x*x`` is neither 1 nor ``x`` for every ``x != 1``."""
    t = H.table
    return all(t[x][x] not in (0, x) for x in range(1, H.size))


def cyclic_submonoid(H: FiniteMonoid, x: int) -> int:
    mask, p = ONE, x
    while not mask >> p & 1:
        mask |= 1 << p
        p = H.table[p][x]
    return mask


def pm_is_bf_ff(H: FiniteMonoid) -> tuple[bool, bool, Optional[BFWitness]]:
    """BF and FF hold only for the trivial monoid (the only aperiodic finite one).

    Otherwise the cyclic submonoid X of element 1 satisfies ``X*X = X``, so
    any factorization of X can be doubled into a longer one.
    """
    if H.size == 1:
        return True, True, None
    pm = power_monoid(H)
    X = cyclic_submonoid(H, 1)
    _, word = pm.minimal_factorizations(X)[0]
    return False, False, BFWitness(X, word, word + word)


# --- brute force deciders ---------------------------------------------------

def _minimal_witness(pm, X: int) -> MinimalWitness:
    mins = pm.minimal_factorizations(X)
    return MinimalWitness(X, tuple(m for m, _ in mins), tuple(w for _, w in mins))


def pm_is_hmf_brute(H: FiniteMonoid) -> tuple[bool, Optional[MinimalWitness]]:
    """Check that all minimal factorizations of each set share one length."""
    pm = power_monoid(H)
    for X in pm.all_sets():
        w = _minimal_witness(pm, X)
        if len(w.lengths) > 1:
            return False, w
    return True, None


def pm_is_umf_brute(H: FiniteMonoid) -> tuple[bool, Optional[MinimalWitness]]:
    """Check that each set has exactly one minimal factorization up to order."""
    pm = power_monoid(H)
    for X in pm.all_sets():
        w = _minimal_witness(pm, X)
        if len(w.multisets) != 1:
            return False, w
    return True, None


# --- structural decider -----------------------------------------------------

def _labels(H: FiniteMonoid, elems) -> tuple[str, ...]:
    return tuple(H.labels[a] for a in elems)


def pm_is_umf_theorem(H: FiniteMonoid) -> TriState:
    """Decide UmF from the structure of H, without enumerating sets.

    The ladder stops at the first conclusive rule.  ``UNKNOWN`` is returned
    only for a non-commutative almost-breakable reduced monoid that is
    neither breakable, twisted nor bridged.
    """
    trace: list[TraceEntry] = []

    def stop(value: Verdict, rule: str, anchor: str, witness=()) -> TriState:
        trace.append(TraceEntry(rule, anchor, tuple(witness)))
        return TriState(value, trace)

    for x in range(H.size):
        if mc.element_order(H, x) > 2:
            return stop(Verdict.NO, "element-order",
                        "UmF requires every element to have order at most 2", _labels(H, [x]))

    U = sorted(H.units)
    if len(U) > 2:
        return stop(Verdict.NO, "unit-group-order",
                    "UmF requires at most two units", _labels(H, U))

    if len(U) == H.size:
        value = Verdict.YES if H.size <= 2 else Verdict.NO
        return stop(value, "group",
                    "a group is UmF exactly when it is trivial or cyclic of order 2")

    nonunits = mc.nonunit_subsemigroup(H)
    if nonunits is None:
        return stop(Verdict.NO, "nonunits-closed",
                    "UmF requires the non-units to form a subsemigroup")
    pair = mc.almost_breakable_witness(nonunits)
    if pair is not None:
        return stop(Verdict.NO, "nonunits-almost-breakable",
                    "UmF requires the non-units to form an almost-breakable semigroup",
                    tuple(nonunits.labels[a] for a in pair))

    t = H.table
    for u in U:
        for y in range(H.size):
            if y not in H.units and not (t[u][y] == y == t[y][u]):
                return stop(Verdict.NO, "units-act-trivially",
                            "UmF requires uy = yu = y for every unit u and non-unit y",
                            _labels(H, [u, y]))

    K = mc.nonunit_submonoid(H)
    if len(U) == 2:
        trace.append(TraceEntry("reduce",
                                "H is a trivial ideal extension of its non-units by a group of order 2; "
                                "UmF passes to and from the non-unit submonoid",
                                _labels(H, U)))

    if mc.is_breakable(K):
        return stop(Verdict.YES, "breakable", "a breakable ground monoid is UmF")
    if all(K.table[a][b] == K.table[b][a] for a in range(K.size) for b in range(K.size)):
        return stop(Verdict.NO, "commutative-not-breakable",
                    "a commutative ground monoid is UmF exactly when its non-units are breakable")
    tw = mc.is_twisted(K)
    if tw is not None:
        return stop(Verdict.NO, "twisted",
                    "a twisted almost-breakable ground monoid is not UmF", _labels(K, tw))
    br = mc.is_bridged(K)
    if br is not None:
        return stop(Verdict.NO, "bridged",
                    "a bridged almost-breakable ground monoid is not UmF", _labels(K, br))
    trace.append(TraceEntry("open",
                            "almost-breakable, non-commutative, not breakable, untwisted, unbridged: "
                            "no structural criterion applies"))
    return TriState(Verdict.UNKNOWN, trace, reduced=K)


# --- aggregation ------------------------------------------------------------

@dataclass
class ClassificationReport:
    H: FiniteMonoid
    structure: StructureFlags
    almost_breakable: bool
    breakable: bool
    twisted: Optional[tuple[int, int, int, int]]
    bridged: Optional[tuple[int, int, int]]
    pm_atomic: bool
    pm_bf: bool
    pm_ff: bool
    bf_witness: Optional[BFWitness]
    pm_umf_theorem: TriState
    pm_fmf: bool = True
    pm_hmf_brute: Optional[bool] = None
    hmf_witness: Optional[MinimalWitness] = None
    pm_umf_brute: Optional[bool] = None
    umf_witness: Optional[MinimalWitness] = None
    brute_skipped: bool = False

    @property
    def size(self) -> int:
        return self.H.size

    @property
    def agreement(self) -> Optional[bool]:
        """None when brute force was skipped; otherwise False only on a contradiction."""
        if self.pm_umf_brute is None:
            return None
        if self.pm_umf_theorem.value is Verdict.UNKNOWN:
            return True
        return (self.pm_umf_theorem.value is Verdict.YES) == self.pm_umf_brute

    def to_dict(self) -> dict[str, Any]:
        H = self.H

        def minimal(w: Optional[MinimalWitness]):
            if w is None:
                return None
            return {
                "subset": subset_to_labels(H, w.subset),
                "lengths": w.lengths,
                "multisets": [word_to_labels(H, m) for m in w.multisets],
                "words": [word_to_labels(H, x) for x in w.words],
            }

        bf = None
        if self.bf_witness is not None:
            bf = {
                "subset": subset_to_labels(H, self.bf_witness.subset),
                "short": word_to_labels(H, self.bf_witness.short),
                "long": word_to_labels(H, self.bf_witness.long),
            }
        return {
            "schema": SCHEMA,
            "size": H.size,
            "labels": list(H.labels),
            "structure": dict(vars(self.structure)),
            "almost_breakable": self.almost_breakable,
            "breakable": self.breakable,
            "twisted": {"value": self.twisted is not None,
                        "witness": list(_labels(H, self.twisted or ()))},
            "bridged": {"value": self.bridged is not None,
                        "witness": list(_labels(H, self.bridged or ()))},
            "pm_atomic": self.pm_atomic,
            "pm_bf": self.pm_bf,
            "pm_ff": self.pm_ff,
            "pm_bf_witness": bf,
            "pm_fmf": self.pm_fmf,
            "pm_hmf_brute": {"value": self.pm_hmf_brute, "witness": minimal(self.hmf_witness)},
            "pm_umf_brute": {"value": self.pm_umf_brute, "witness": minimal(self.umf_witness)},
            "pm_umf_theorem": self.pm_umf_theorem.to_dict(),
            "agreement": self.agreement,
            "brute_skipped": self.brute_skipped,
        }


def classify(H: FiniteMonoid, budget: int = DEFAULT_BUDGET, partial: bool = False) -> ClassificationReport:
    """Run every decider on H.

    Brute force needs ``2**(|H|-1)`` sets; above ``budget`` it is skipped and
    :class:`BudgetExceeded` is raised with the partial report, unless
    ``partial`` is true, in which case the partial report is returned.
    """
    bf, ff, bfw = pm_is_bf_ff(H)
    report = ClassificationReport(
        H=H,
        structure=mc.structure_flags(H),
        almost_breakable=mc.is_almost_breakable(H),
        breakable=mc.is_breakable(H),
        twisted=mc.is_twisted(H),
        bridged=mc.is_bridged(H),
        pm_atomic=pm_is_atomic(H),
        pm_bf=bf,
        pm_ff=ff,
        bf_witness=bfw,
        pm_umf_theorem=pm_is_umf_theorem(H),
    )
    if 1 << (H.size - 1) > budget:
        report.brute_skipped = True
        if partial:
            return report
        raise BudgetExceeded(report, budget)
    report.pm_hmf_brute, report.hmf_witness = pm_is_hmf_brute(H)
    report.pm_umf_brute, report.umf_witness = pm_is_umf_brute(H)
    return report
