"""Exhaustive census of small monoids up to isomorphism.

Tables are filled cell by cell in row-major order with the identity fixed
at 0.  Two prunings keep the search small:

* associativity is checked on every triple as soon as its last entry is placed;
* a partial table is dropped as soon as some relabeling fixing 0 is
  provably smaller in row-major order, so only canonical tables survive.

Every surviving table is the canonical representative of its class, so no
deduplication pass is needed and the output comes out sorted.
"""

from __future__ import annotations

import logging
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Iterator, Optional

from .classify import DEFAULT_BUDGET, classify
from .monoid import FiniteMonoid, _perm_arrays, encode_table
from .serialize import dumps_json

log = logging.getLogger(__name__)

MAX_ORDER = 7
WORKERS_ENV = "POWERMONOID_WORKERS"


class CapExceeded(ValueError):
    pass


@lru_cache(maxsize=None)
def _relabelings(n: int) -> list[tuple[list[int], list[int]]]:
    perms, inv = _perm_arrays(n)
    # skip the identity permutation (row 0)
    return [(p.tolist(), q.tolist()) for p, q in zip(perms[1:], inv[1:])]


def enumerate_monoids(n: int, *, idempotent: bool = False, almost_breakable: bool = False,
                      cap: int = MAX_ORDER) -> Iterator[FiniteMonoid]:
    """Yield one canonical monoid of order ``n`` per isomorphism class.

    ``idempotent`` forces ``x*x = x``; ``almost_breakable`` additionally
    requires every pair to be balanced in at least one order.  Both
    restrictions are closed under isomorphism, so the yielded classes are
    exactly the classes of the restricted family.
    """
    if not 1 <= n <= cap:
        raise CapExceeded(f"order {n} outside 1..{cap}")
    if almost_breakable:
        idempotent = True
    t = [[-1] * n for _ in range(n)]
    for a in range(n):
        t[0][a] = a
        t[a][0] = a
    if idempotent:
        for a in range(1, n):
            t[a][a] = a
    cells = [(a, b) for a in range(1, n) for b in range(1, n) if not (idempotent and a == b)]
    inner = [(a, b) for a in range(1, n) for b in range(1, n)]
    nz = range(1, n)
    relabelings = _relabelings(n)

    def associative_after(a: int, b: int) -> bool:
        v = t[a][b]
        for c in nz:
            # (a b) c == a (b c)
            bc = t[b][c]
            if bc >= 0:
                lhs, rhs = t[v][c], t[a][bc]
                if lhs >= 0 and rhs >= 0 and lhs != rhs:
                    return False
            # (c a) b == c (a b)
            ca = t[c][a]
            if ca >= 0:
                lhs, rhs = t[ca][b], t[c][v]
                if lhs >= 0 and rhs >= 0 and lhs != rhs:
                    return False
        for x in nz:
            row = t[x]
            for y in nz:
                # (x y) b with x y == a
                if row[y] == a:
                    yb = t[y][b]
                    if yb >= 0:
                        rhs = row[yb]
                        if rhs >= 0 and rhs != v:
                            return False
                # a (x y) with x y == b
                if row[y] == b:
                    ax = t[a][x]
                    if ax >= 0:
                        lhs = t[ax][y]
                        if lhs >= 0 and lhs != v:
                            return False
        return True

    def balanced_after(a: int, b: int) -> bool:
        ba = t[b][a]
        return ba < 0 or t[a][b] in (a, b) or ba in (a, b)

    def minimal_so_far() -> bool:
        for perm, inv in relabelings:
            for i, j in inner:
                cur = t[i][j]
                if cur < 0:
                    break
                src = t[inv[i]][inv[j]]
                if src < 0:
                    break
                w = perm[src]
                if w != cur:
                    if w < cur:
                        return False
                    break
        return True

    def fill(k: int) -> Iterator[FiniteMonoid]:
        if k == len(cells):
            yield FiniteMonoid(tuple(tuple(r) for r in t))
            return
        a, b = cells[k]
        for v in range(n):
            t[a][b] = v
            if not associative_after(a, b):
                continue
            if almost_breakable and not balanced_after(a, b):
                continue
            if not minimal_so_far():
                continue
            yield from fill(k + 1)
        t[a][b] = -1

    if idempotent and n > 1:
        # preset diagonal must itself be consistent before filling
        if not minimal_so_far():
            return
    yield from fill(0)


@dataclass
class CensusSummary:
    order: int
    count: int = 0
    per_order: dict[int, int] = field(default_factory=dict)
    flag_counts: dict[str, int] = field(default_factory=dict)
    unknown: list[str] = field(default_factory=list)
    agreement_failures: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    restriction: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "count": self.count,
            "per_order": {str(k): v for k, v in sorted(self.per_order.items())},
            "flag_counts": dict(sorted(self.flag_counts.items())),
            "unknown": self.unknown,
            "agreement_failures": self.agreement_failures,
            "skipped": self.skipped,
            "restriction": self.restriction,
        }


def make_record(H: FiniteMonoid, budget: int = DEFAULT_BUDGET) -> dict[str, Any]:
    report = classify(H, budget=budget, partial=True)
    return {
        "canonical_form": encode_table(H.table).hex(),
        "order": H.size,
        "table": [list(r) for r in H.table],
        "report": report.to_dict(),
    }


def _record_job(args: tuple[FiniteMonoid, int]) -> dict[str, Any]:
    return make_record(*args)


def _workers(workers: Optional[int]) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    return max(1, workers)


def census_records(n: int, budget: int = DEFAULT_BUDGET, workers: Optional[int] = None,
                   idempotent: bool = False, almost_breakable: bool = False) -> list[dict[str, Any]]:
    """Classify every monoid of order ``n``; records sorted by canonical form."""
    monoids = list(enumerate_monoids(n, idempotent=idempotent, almost_breakable=almost_breakable))
    jobs = [(H, budget) for H in monoids]
    w = _workers(workers)
    if w == 1 or len(jobs) < 2:
        records = [_record_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=w) as pool:
            records = list(pool.map(_record_job, jobs, chunksize=max(1, len(jobs) // (4 * w))))
    records.sort(key=lambda r: r["canonical_form"])
    return records


def _flag_key(rec: dict[str, Any]) -> str:
    r = rec["report"]
    return ",".join([
        f"almost_breakable={str(r['almost_breakable']).lower()}",
        f"umf_brute={str(r['pm_umf_brute']['value']).lower()}",
        f"umf_theorem={r['pm_umf_theorem']['value']}",
    ])


def summarize(n: int, records: list[dict[str, Any]], restriction: Optional[str] = None) -> CensusSummary:
    s = CensusSummary(order=n, count=len(records), per_order={n: len(records)}, restriction=restriction)
    for rec in records:
        key = _flag_key(rec)
        s.flag_counts[key] = s.flag_counts.get(key, 0) + 1
        r = rec["report"]
        cf = rec["canonical_form"]
        if r["pm_umf_theorem"]["value"] == "unknown":
            s.unknown.append(cf)
            log.info("open case %s: brute-force UmF = %s", cf, r["pm_umf_brute"]["value"])
        if r["agreement"] is False:
            s.agreement_failures.append(cf)
            log.error("theorem and brute force disagree on %s", cf)
        if r["brute_skipped"]:
            s.skipped.append(cf)
    return s


def run_census(n: int, budget: int = DEFAULT_BUDGET, out_dir: Optional[str | Path] = None,
               workers: Optional[int] = None, idempotent: bool = False,
               almost_breakable: bool = False) -> CensusSummary:
    """Classify all monoids of order ``n`` and optionally persist the results.

    Writes ``census-<n>.jsonl`` (one record per line) and ``summary-<n>.json``
    into ``out_dir`` when given.
    """
    restriction = "almost_breakable" if almost_breakable else "idempotent" if idempotent else None
    records = census_records(n, budget, workers, idempotent, almost_breakable)
    summary = summarize(n, records, restriction)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / f"census-{n}.jsonl", "w", encoding="utf-8", newline="\n") as f:
            for rec in records:
                f.write(dumps_json(rec) + "\n")
        with open(out / f"summary-{n}.json", "w", encoding="utf-8", newline="\n") as f:
            f.write(dumps_json(summary.to_dict()) + "\n")
    return summary


# --- filtering ----------------------------------------------------------------

def flatten_report(rec: dict[str, Any]) -> dict[str, str]:
    """Flat lowercase string view of a record, used by :func:`find_instances`."""
    r = rec["report"]
    flat = {
        "order": str(rec["order"]),
        "almost_breakable": r["almost_breakable"],
        "breakable": r["breakable"],
        "twisted": r["twisted"]["value"],
        "bridged": r["bridged"]["value"],
        "atomic": r["pm_atomic"],
        "bf": r["pm_bf"],
        "ff": r["pm_ff"],
        "fmf": r["pm_fmf"],
        "hmf_brute": r["pm_hmf_brute"]["value"],
        "umf_brute": r["pm_umf_brute"]["value"],
        "umf_theorem": r["pm_umf_theorem"]["value"],
        "agreement": r["agreement"],
    }
    flat.update(r["structure"])
    return {k: (str(v).lower() if not isinstance(v, str) else v.lower()) for k, v in flat.items()}


_TERM = re.compile(r"^\s*([a-z_]+)\s*(!=|=)\s*([A-Za-z0-9_]+)\s*$")


def parse_filter(expr: str) -> Callable[[dict[str, Any]], bool]:
    """Parse ``key=value`` terms joined by ``,`` or ``&`` into a record predicate."""
    terms = []
    for part in re.split(r"[,&]", expr):
        if not part.strip():
            continue
        m = _TERM.match(part.lower())
        if m is None:
            raise ValueError(f"cannot parse filter term {part!r}")
        terms.append(m.groups())
    if not terms:
        raise ValueError("empty filter")

    def pred(rec: dict[str, Any]) -> bool:
        flat = flatten_report(rec)
        for key, op, value in terms:
            if key not in flat:
                raise ValueError(f"unknown filter key {key!r}; known: {', '.join(sorted(flat))}")
            if (flat[key] == value) != (op == "="):
                return False
        return True

    return pred


def find_instances(expr: str | Callable[[dict[str, Any]], bool], max_order: int,
                   min_order: int = 1, budget: int = DEFAULT_BUDGET, workers: Optional[int] = None,
                   idempotent: bool = False, almost_breakable: bool = False) -> list[dict[str, Any]]:
    """Census records of order ``min_order..max_order`` matching ``expr``."""
    pred = parse_filter(expr) if isinstance(expr, str) else expr
    out = []
    for n in range(min_order, max_order + 1):
        out.extend(r for r in census_records(n, budget, workers, idempotent, almost_breakable) if pred(r))
    return out
