"""JSON reading and writing for Cayley tables, subsets and words."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Optional

from .monoid import FiniteMonoid, Magma, MonoidError, validate_monoid

FIXTURE_NAMES = ("z2", "z3", "z5", "chain2", "chain3", "s", "h1", "h2")


def table_from_dict(data: dict[str, Any]) -> tuple[Magma, Optional[int]]:
    """Parse ``{"size", "identity", "labels", "table"}`` into a magma and claimed identity."""
    try:
        table = data["table"]
    except (KeyError, TypeError):
        raise MonoidError("missing 'table' field") from None
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise MonoidError("'table' must be a list of rows")
    for row in table:
        for v in row:
            if not isinstance(v, int) or isinstance(v, bool):
                raise MonoidError(f"table entry {v!r} is not an integer")
    size = data.get("size", len(table))
    if size != len(table):
        raise MonoidError(f"size {size} does not match table with {len(table)} rows")
    labels = tuple(data.get("labels") or ())
    identity = data.get("identity")
    return Magma(tuple(tuple(r) for r in table), labels), identity


def monoid_from_dict(data: dict[str, Any]) -> FiniteMonoid:
    magma, identity = table_from_dict(data)
    return validate_monoid(magma, identity)


def monoid_to_dict(H: FiniteMonoid | Magma) -> dict[str, Any]:
    identity = 0 if isinstance(H, FiniteMonoid) else None
    return {
        "size": H.size,
        "identity": identity,
        "labels": list(H.labels),
        "table": [list(r) for r in H.table],
    }


def dumps_monoid(H: FiniteMonoid | Magma) -> str:
    d = monoid_to_dict(H)
    rows = ",\n".join("    " + json.dumps(r) for r in d["table"])
    return (
        "{\n"
        f'  "size": {d["size"]},\n'
        f'  "identity": {json.dumps(d["identity"])},\n'
        f'  "labels": {json.dumps(d["labels"])},\n'
        f'  "table": [\n{rows}\n  ]\n'
        "}\n"
    )


def read_table(path: str | Path) -> tuple[Magma, Optional[int]]:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise MonoidError(f"{path}: invalid JSON ({exc})") from None
    return table_from_dict(data)


def load_monoid(path: str | Path) -> FiniteMonoid:
    magma, identity = read_table(path)
    return validate_monoid(magma, identity)


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
    return resources.files(__package__).joinpath("fixtures", f"{name}.json").read_text(encoding="utf-8")


def fixture_table(name: str) -> tuple[Magma, Optional[int]]:
    return table_from_dict(json.loads(fixture_text(name)))


def load_fixture(name: str) -> FiniteMonoid:
    """Load one of the shipped monoids (``s`` is a semigroup; use :func:`fixture_table`)."""
    magma, identity = fixture_table(name)
    return validate_monoid(magma, identity)


def subset_to_labels(H: FiniteMonoid, mask: int) -> list[str]:
    return [H.labels[i] for i in range(H.size) if mask >> i & 1]


def word_to_labels(H: FiniteMonoid, word: Iterable[int]) -> list[list[str]]:
    return [subset_to_labels(H, a) for a in word]


def dumps_json(obj: Any) -> str:
    """Deterministic compact JSON used for records and CLI output."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
