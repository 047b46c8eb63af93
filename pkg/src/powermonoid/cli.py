"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 invalid monoid or subset,
3 brute-force budget exceeded (partial output is still printed),
4 theorem/brute-force disagreement.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import census as cen
from .classify import DEFAULT_BUDGET, BudgetExceeded, classify
from .monoid import (FiniteMonoid, MonoidError, is_almost_breakable, is_breakable,
                     validate_monoid)
from .pset import ONE, BadSubset, power_monoid
from .serialize import (FIXTURE_NAMES, dumps_json, fixture_table, fixture_text, read_table,
                        subset_to_labels, word_to_labels)

log = logging.getLogger("powermonoid")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_BUDGET, EXIT_DISAGREE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(source: str):
    p = Path(source)
    if not p.exists() and source in FIXTURE_NAMES:
        return fixture_table(source)
    if not p.exists():
        raise FileNotFoundError(f"no such file or fixture: {source}")
    return read_table(p)


def _load(source: str) -> FiniteMonoid:
    magma, identity = _read(source)
    return validate_monoid(magma, identity)


def parse_subset(H: FiniteMonoid, spec: str) -> int:
    """Comma-separated labels; the identity is added if missing."""
    spec = spec.strip().strip("{}[]")
    mask = 0
    for tok in (s.strip() for s in spec.split(",")):
        if not tok:
            continue
        try:
            mask |= 1 << H.index(tok)
        except KeyError:
            raise BadSubset(f"unknown element {tok!r}; labels are {', '.join(H.labels)}") from None
    if not mask & ONE:
        log.warning("identity %s added to subset", H.labels[0])
        mask |= ONE
    return mask


def _fmt_set(H: FiniteMonoid, mask: int) -> str:
    return "{" + ",".join(subset_to_labels(H, mask)) + "}"


def _fmt_word(H: FiniteMonoid, word) -> str:
    return " * ".join(_fmt_set(H, a) for a in word) if word else "(empty word)"


def _emit(obj: Any, pretty: bool = False, text: Optional[str] = None) -> None:
    if pretty and text is not None:
        print(text)
    elif pretty:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(dumps_json(obj))


# --- commands -------------------------------------------------------------------

def cmd_validate(args) -> int:
    magma, identity = _read(args.monoid)
    if args.semigroup:
        magma.require_semigroup()
        _emit({"valid": True, "kind": "semigroup", "size": magma.size,
               "almost_breakable": is_almost_breakable(magma),
               "breakable": is_breakable(magma)}, args.pretty)
        return EXIT_OK
    H = validate_monoid(magma, identity)
    _emit({"valid": True, "kind": "monoid", "size": H.size, "identity": H.labels[0],
           "labels": list(H.labels)}, args.pretty)
    return EXIT_OK


def _classify_text(d: dict[str, Any]) -> str:
    s = d["structure"]
    lines = [
        f"order {d['size']}: " + ", ".join(k for k, v in sorted(s.items()) if v is True),
        f"almost-breakable {d['almost_breakable']}, breakable {d['breakable']}, "
        f"twisted {d['twisted']['value']} {d['twisted']['witness']}, "
        f"bridged {d['bridged']['value']} {d['bridged']['witness']}",
        f"atomic {d['pm_atomic']}, BF {d['pm_bf']}, FF {d['pm_ff']}, FmF {d['pm_fmf']}",
        f"HmF (brute) {d['pm_hmf_brute']['value']}, UmF (brute) {d['pm_umf_brute']['value']}",
        f"UmF (theorem) {d['pm_umf_theorem']['value']}",
    ]
    for e in d["pm_umf_theorem"]["trace"]:
        lines.append(f"  - {e['rule']}: {e['anchor']} {e['witness'] or ''}".rstrip())
    lines.append(f"agreement {d['agreement']}")
    return "\n".join(lines)


def cmd_classify(args) -> int:
    H = _load(args.monoid)
    try:
        report = classify(H, budget=args.budget)
    except BudgetExceeded as exc:
        log.error("%s", exc)
        d = exc.report.to_dict()
        _emit(d, args.pretty, _classify_text(d))
        return EXIT_BUDGET
    d = report.to_dict()
    _emit(d, args.pretty, _classify_text(d))
    return EXIT_DISAGREE if report.agreement is False else EXIT_OK


def cmd_factorize(args) -> int:
    H = _load(args.monoid)
    X = parse_subset(H, args.subset)
    words = power_monoid(H).factorizations(X, args.max_len)
    _emit({"subset": subset_to_labels(H, X), "max_len": args.max_len,
           "factorizations": [word_to_labels(H, w) for w in words]},
          args.pretty, "\n".join(_fmt_word(H, w) for w in words))
    return EXIT_OK


def cmd_minfactor(args) -> int:
    H = _load(args.monoid)
    X = parse_subset(H, args.subset)
    mins = power_monoid(H).minimal_factorizations(X)
    out = {
        "subset": subset_to_labels(H, X),
        "minimal": [{"multiset": word_to_labels(H, m), "word": word_to_labels(H, w), "length": len(m)}
                    for m, w in mins],
    }
    text = "\n".join(f"[{len(m)}] {_fmt_word(H, w)}" for m, w in mins)
    _emit(out, args.pretty, text)
    return EXIT_OK


def cmd_irreducibles(args) -> int:
    H = _load(args.monoid)
    pm = power_monoid(H)
    X = parse_subset(H, args.subset) if args.subset is not None else pm.full
    irr = pm.irreducibles_within(X)
    _emit({"subset": subset_to_labels(H, X),
           "irreducibles": [{"set": subset_to_labels(H, A), "atom": pm.is_atom(A)} for A in irr]},
          args.pretty, "\n".join(_fmt_set(H, A) + ("" if pm.is_atom(A) else "  (not an atom)") for A in irr))
    return EXIT_OK


def cmd_census(args) -> int:
    summary = cen.run_census(args.order, budget=args.budget, out_dir=args.out, workers=args.workers,
                             idempotent=args.idempotent, almost_breakable=args.almost_breakable)
    _emit(summary.to_dict(), args.pretty)
    if summary.agreement_failures:
        return EXIT_DISAGREE
    return EXIT_BUDGET if summary.skipped else EXIT_OK


def cmd_find(args) -> int:
    try:
        pred = cen.parse_filter(args.expr)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        recs = cen.find_instances(pred, args.order, min_order=args.min_order, budget=args.budget,
                                  workers=args.workers, idempotent=args.idempotent,
                                  almost_breakable=args.almost_breakable)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.pretty:
        for r in recs:
            rep = r["report"]
            print(f"order {r['order']} {r['canonical_form']}  umf_theorem={rep['pm_umf_theorem']['value']} "
                  f"umf_brute={rep['pm_umf_brute']['value']}")
        print(f"{len(recs)} match(es)")
    else:
        print(dumps_json(recs))
    fails = [r for r in recs if r["report"]["agreement"] is False]
    return EXIT_DISAGREE if fails else EXIT_OK


def cmd_fixtures(args) -> int:
    if args.name:
        sys.stdout.write(fixture_text(args.name))
        return EXIT_OK
    if args.dump:
        out = Path(args.dump)
        out.mkdir(parents=True, exist_ok=True)
        for name in FIXTURE_NAMES:
            (out / f"{name}.json").write_text(fixture_text(name), encoding="utf-8")
    _emit(list(FIXTURE_NAMES), args.pretty, "\n".join(FIXTURE_NAMES))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="powermonoid", description="Arithmetic of reduced power monoids of finite monoids.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, monoid=True):
        if monoid:
            sp.add_argument("monoid", help="Cayley table JSON file or shipped fixture name")
        sp.add_argument("--pretty", action="store_true", help="human-readable output")

    def census_opts(sp):
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="max power-monoid size for brute force (default %(default)s)")
        sp.add_argument("--workers", type=int, default=None,
                        help=f"worker processes (default: ${cen.WORKERS_ENV} or 1)")
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--idempotent", action="store_true", help="only idempotent monoids")
        g.add_argument("--almost-breakable", action="store_true", help="only almost-breakable monoids")

    sp = sub.add_parser("validate", help="check the monoid axioms")
    common(sp)
    sp.add_argument("--semigroup", action="store_true", help="only require associativity")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("classify", help="structural and factorization report")
    common(sp)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("factorize", help="all factorizations up to a length")
    common(sp)
    sp.add_argument("subset", help="comma-separated element labels")
    sp.add_argument("--max-len", type=int, required=True)
    sp.set_defaults(func=cmd_factorize)

    sp = sub.add_parser("minfactor", help="minimal factorizations of a subset")
    common(sp)
    sp.add_argument("subset", help="comma-separated element labels")
    sp.set_defaults(func=cmd_minfactor)

    sp = sub.add_parser("irreducibles", help="irreducibles contained in a subset")
    common(sp)
    sp.add_argument("subset", nargs="?", default=None, help="defaults to the whole monoid")
    sp.set_defaults(func=cmd_irreducibles)

    sp = sub.add_parser("census", help="classify every monoid of one order")
    common(sp, monoid=False)
    sp.add_argument("order", type=int)
    sp.add_argument("--out", default=None, help="directory for census-<n>.jsonl and summary-<n>.json")
    census_opts(sp)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("find", help="census records matching a filter such as 'twisted=true,bridged=false'")
    common(sp, monoid=False)
    sp.add_argument("expr")
    sp.add_argument("--order", type=int, required=True, help="largest order searched")
    sp.add_argument("--min-order", type=int, default=1)
    census_opts(sp)
    sp.set_defaults(func=cmd_find)

    sp = sub.add_parser("fixtures", help="list or print the shipped tables")
    common(sp, monoid=False)
    sp.add_argument("name", nargs="?", choices=FIXTURE_NAMES)
    sp.add_argument("--dump", default=None, help="write all fixtures into this directory")
    sp.set_defaults(func=cmd_fixtures)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (MonoidError, BadSubset) as exc:
        print(dumps_json({"valid": False, "error": type(exc).__name__, "message": str(exc),
                          "witness": getattr(exc, "witness", None)}))
        return EXIT_INVALID
    except (UsageError, cen.CapExceeded) as exc:
        print(f"powermonoid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"powermonoid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
