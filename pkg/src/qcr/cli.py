"""Command line front end (``qcr``).

Exit codes: 0 for success or SAT, 1 for UNSAT or a failing property, 2 for
usage errors and refusals.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import analysis as an
from .catalog import Catalog, CatalogError, load_catalog
from .files import read_network
from .multialg import format_multialgebra
from .oracle import brute_force_sat, falsify_minimality, minimal_network_classical
from .qcn import Refused, algebraic_closure, enumerate_closed_scenarios, is_trivially_inconsistent, satisfiable
from .relalg import AlgebraFormatError, check_axioms, format_algebra
from .suite import run_paper_suite

EXIT_OK, EXIT_FAIL, EXIT_REFUSED = 0, 1, 2

# subclasses certified by the commands below, tried in this order by ``sat --method closure``
CERTIFIABLE = ("RCC8s_x_PAs", "H8_x_PA", "Q8_x_PA", "C8_x_PA")
DEFAULT_WEAKENING = {"RCC8s_x_PAs": "stc-weak-pa2rcc"}
REFINEMENT_TARGET = {"H8_x_PA": "RCC8s_x_PAs", "Q8_x_PA": "RCC8s_x_PAs", "C8_x_PA": "RCC8s_x_PAs"}


def _jobs(value: int | None) -> int:
    return value if value else (os.cpu_count() or 1)


def certify_named(
    catalog: Catalog, name: str, weaken: str | None = None, force: bool = False, jobs: int = 1
) -> an.TractabilityCertificate:
    """Certificate for a catalog subclass along its registered route."""
    S = catalog.subclass(name)
    if name in REFINEMENT_TARGET:
        target = certify_named(catalog, REFINEMENT_TARGET[name], force=force, jobs=jobs)
        w = catalog.weakening(weaken) if weaken else None
        return an.certify_refinement(S, target, catalog.multi_refinement(S), weakening=w, catalog=catalog)
    weaken = weaken or DEFAULT_WEAKENING.get(name)
    w = catalog.weakening(weaken) if weaken else None
    return an.certify_slicing(S, w, catalog, force=force, jobs=jobs)


# verbs -------------------------------------------------------------------------


def cmd_catalog(args, catalog: Catalog) -> int:
    if args.action == "list":
        for kind, names in catalog.names().items():
            print(f"{kind}: {' '.join(names)}")
        return EXIT_OK
    if not args.name:
        print("catalog show needs a name", file=sys.stderr)
        return EXIT_REFUSED
    name = args.name
    if name in catalog.algebras:
        print(format_algebra(catalog.algebra(name)), end="")
    elif name in catalog.subclasses:
        S = catalog.subclass(name)
        print(f"subclass {S.name} over {S.ma.name} ({S.size} relations)")
        for key, cite in sorted(S.facts.items()):
            print(f"fact {key}: {cite}")
        for note in S.notes:
            print(f"note {note}")
        for i in range(S.ma.m):
            a = S.ma.components[i]
            label = S.slice_names[i] if S.slice_names else a.name
            rels = sorted(S.slice_set(i), key=lambda r: (bin(r).count("1"), r))
            print(f"slice {i + 1} ({label}, {len(rels)}): " + " ".join(a.format_bits(r) for r in rels))
    elif name in catalog.refinements:
        h = catalog.refinement(name)
        a = h.algebra
        print(f"refinement {h.name} over {a.name}")
        for r in sorted(h.mapping, key=lambda r: (bin(r).count("1"), r)):
            print(f"{a.format_bits(r)} -> {a.format_bits(h.mapping[r])}")
    else:
        print(format_multialgebra(catalog.multialgebra(name)), end="")
    return EXIT_OK


def cmd_axioms(args, catalog: Catalog) -> int:
    rep = check_axioms(catalog.algebra(args.algebra))
    print(rep.format())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_closure(args, catalog: Catalog) -> int:
    N = read_network(args.file, catalog)
    C = algebraic_closure(N)
    print(C.format(skip_universal=False), end="")
    if is_trivially_inconsistent(C):
        print("trivially inconsistent")
        return EXIT_FAIL
    print("algebraically consistent")
    return EXIT_OK


def _find_certificate(N, catalog: Catalog, name: str | None, force: bool, jobs: int):
    names = [name] if name else [n for n in CERTIFIABLE if catalog.subclass(n).ma == N.ma]
    for n in names:
        S = catalog.subclass(n)
        if S.ma != N.ma:
            continue
        if all(S.contains_bits(bits) for _, _, bits in N.edges()):
            return certify_named(catalog, n, force=force, jobs=jobs)
    return None


def cmd_sat(args, catalog: Catalog) -> int:
    N = read_network(args.file, catalog)
    cert = None
    if args.method == "closure":
        cert = _find_certificate(N, catalog, args.subclass, args.force, _jobs(args.jobs))
    d = satisfiable(N, args.method, certificate=cert)
    print(f"{d.label} (method {d.method})")
    if d.assumption:
        print(f"assumption: {d.assumption}")
    for note in d.notes:
        print(f"note: {note}")
    if d.witness is not None:
        print("witness scenario:")
        print(d.witness.format(skip_universal=False), end="")
    return EXIT_OK if d.satisfiable else EXIT_FAIL


def cmd_scenarios(args, catalog: Catalog) -> int:
    N = read_network(args.file, catalog)
    count = 0
    for S in enumerate_closed_scenarios(N):
        count += 1
        print(f"# scenario {count}")
        print(S.format(skip_universal=False), end="")
        if args.limit and count >= args.limit:
            break
    print(f"{count} algebraically closed scenario(s) listed")
    return EXIT_OK if count else EXIT_FAIL


def _refinement_arg(catalog: Catalog, S, text: str | None):
    if not text:
        return None
    return catalog.multi_refinement(S, [t.strip() for t in text.split(",")])


def cmd_analyze(args, catalog: Catalog) -> int:
    S = catalog.subclass(args.subclass)
    w = catalog.weakening(args.weaken) if args.weaken else None
    H = _refinement_arg(catalog, S, args.refinement)
    props = an.PROPERTIES if args.property == "all" else [args.property]
    code = EXIT_OK
    for prop in props:
        try:
            reports = an.check_property(S, prop, catalog, w, args.force, _jobs(args.jobs), H)
        except CatalogError as e:
            print(f"{prop:<30} refused  {e}")
            code = max(code, EXIT_REFUSED) if code != EXIT_FAIL else code
            continue
        for rep in reports:
            print(rep.format())
            if not rep.holds:
                if rep.method in ("verified", "derived"):
                    code = EXIT_FAIL
                elif code == EXIT_OK:
                    code = EXIT_REFUSED
    return code


def cmd_certify(args, catalog: Catalog) -> int:
    S = catalog.subclass(args.subclass)
    w = catalog.weakening(args.weaken) if args.weaken else None
    jobs = _jobs(args.jobs)
    try:
        if args.theorem == "slicing":
            cert = an.certify_slicing(S, w, catalog, force=args.force, jobs=jobs)
        else:
            target_name = args.target or REFINEMENT_TARGET.get(S.name)
            if not target_name:
                print("certify refinement needs --target", file=sys.stderr)
                return EXIT_REFUSED
            try:
                target = certify_named(catalog, target_name, weaken=args.target_weaken, force=args.force, jobs=jobs)
            except an.CertificationRefused as e:
                print(f"target {target_name} is not certified")
                print(e.format(), end="")
                target = None
            H = _refinement_arg(catalog, S, args.refinement) or catalog.multi_refinement(S)
            cert = an.certify_refinement(S, target, H, weakening=w, catalog=catalog)
    except an.CertificationRefused as e:
        print(e.format(), end="")
        return EXIT_FAIL if e.kind == "failed" else EXIT_REFUSED
    print(cert.format(), end="")
    return EXIT_OK


def cmd_oracle(args, catalog: Catalog) -> int:
    if args.action == "sat":
        N = read_network(args.file, catalog)
        res = brute_force_sat(N, pruned=args.pruned)
        print(f"{res.label} ({res.scenarios_checked} scenarios checked)")
        if res.assumption:
            print(f"assumption: {res.assumption}")
        if res.witness is not None:
            print("witness scenario:")
            print(res.witness.format(skip_universal=False), end="")
        return EXIT_OK if res.satisfiable else EXIT_FAIL
    if args.action == "minimal":
        N = read_network(args.file, catalog)
        print(minimal_network_classical(N, pruned=args.pruned).format(skip_universal=False), end="")
        return EXIT_OK
    if not args.subclass:
        print("falsify-minimality needs --subclass", file=sys.stderr)
        return EXIT_REFUSED
    extra = [read_network(f, catalog) for f in args.extra or ()]
    rep = falsify_minimality(
        catalog.subclass(args.subclass), trials=args.trials, n_max=args.vars, seed=args.seed,
        p=args.p, extra_networks=extra,
    )
    print(rep.format(), end="")
    return EXIT_FAIL if rep.refuted else EXIT_OK


def cmd_suite(args, catalog: Catalog) -> int:
    results = run_paper_suite(catalog, jobs=_jobs(args.jobs), out=sys.stdout)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} items pass")
    return EXIT_FAIL if failed else EXIT_OK


# parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcr", description="Qualitative reasoning over multi-algebras.")
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("catalog", help="list or show catalog entries")
    c.add_argument("action", choices=["list", "show"])
    c.add_argument("name", nargs="?")
    c.set_defaults(func=cmd_catalog)

    c = sub.add_parser("axioms", help="check the algebra axioms")
    c.add_argument("algebra")
    c.set_defaults(func=cmd_axioms)

    c = sub.add_parser("closure", help="algebraic closure of a network")
    c.add_argument("file")
    c.set_defaults(func=cmd_closure)

    c = sub.add_parser("sat", help="decide satisfiability")
    c.add_argument("file")
    c.add_argument("--method", choices=["closure", "backtrack", "bruteforce"], default="backtrack")
    c.add_argument("--subclass", help="certified subclass used by --method closure")
    c.add_argument("--force", action="store_true")
    c.add_argument("--jobs", type=int)
    c.set_defaults(func=cmd_sat)

    c = sub.add_parser("scenarios", help="list algebraically closed scenarios")
    c.add_argument("file")
    c.add_argument("--limit", type=int, default=0)
    c.set_defaults(func=cmd_scenarios)

    c = sub.add_parser("analyze", help="check one property of a subclass")
    c.add_argument("--subclass", required=True)
    c.add_argument("--property", required=True, choices=list(an.PROPERTIES) + ["all"])
    c.add_argument("--weaken")
    c.add_argument("--refinement", help="comma-separated refinement names, one per component")
    c.add_argument("--force", action="store_true")
    c.add_argument("--jobs", type=int)
    c.set_defaults(func=cmd_analyze)

    c = sub.add_parser("certify", help="certify a subclass algebraically tractable")
    c.add_argument("theorem", choices=["slicing", "refinement"])
    c.add_argument("--subclass", required=True)
    c.add_argument("--weaken")
    c.add_argument("--target")
    c.add_argument("--target-weaken")
    c.add_argument("--refinement")
    c.add_argument("--force", action="store_true")
    c.add_argument("--jobs", type=int)
    c.set_defaults(func=cmd_certify)

    c = sub.add_parser("oracle", help="brute-force ground truth")
    c.add_argument("action", choices=["sat", "minimal", "falsify-minimality"])
    c.add_argument("file", nargs="?")
    c.add_argument("--pruned", action="store_true")
    c.add_argument("--subclass")
    c.add_argument("--trials", type=int, default=500)
    c.add_argument("--vars", type=int, default=4)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--p", type=float, default=0.5)
    c.add_argument("--extra", action="append", help="network file checked before the random trials")
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("suite", help="run the reproduction suite")
    c.add_argument("--jobs", type=int, default=1)
    c.set_defaults(func=cmd_suite)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb == "oracle" and args.action in ("sat", "minimal") and not args.file:
        parser.error(f"oracle {args.action} needs a network file")
    try:
        return args.func(args, load_catalog())
    except Refused as e:
        print(f"REFUSED: {e}")
        return EXIT_REFUSED
    except (AlgebraFormatError, CatalogError, FileNotFoundError, ValueError) as e:
        msg = e.args[0] if isinstance(e, CatalogError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
