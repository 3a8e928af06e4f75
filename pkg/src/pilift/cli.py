"""Command-line interface: ``pilift <command> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

from . import __version__
from .bounds import census, rows_to_csv, rows_to_json, verify_group
from .catalog import load_group, save_cache
from .chartab import character_table, table_to_json
from .errors import InputError, PiliftError
from .groups import DEFAULT_ORDER_CAP
from .nucleus import normal_nucleus, npi_set, vertex_pair
from .pichars import ipi_set, lifts, pi_classes
from .primes import PiSet, parse_pi
from .special import factorize_pi, is_pi_special

EXIT_OK, EXIT_INPUT, EXIT_INTEGRITY = 0, 1, 2


def _pi_from(args) -> PiSet:
    if getattr(args, "p", None) is not None:
        try:
            return PiSet.p_prime(args.p)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if getattr(args, "pi", None):
        try:
            return parse_pi(args.pi)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    raise InputError("give --pi or --p")


def _check_index(i: int, n: int, what: str) -> int:
    if not 0 <= i < n:
        raise InputError(f"{what} index {i} out of range 0..{n - 1}")
    return i


def _pi_label(pi: PiSet, G) -> str:
    inside = sorted(pi.restricted_to(G.order))
    return f"{pi.spec()} (primes of |G| in pi: {{{','.join(map(str, inside))}}})"


# -- commands -------------------------------------------------------------------


def cmd_table(args, G) -> tuple:
    T = character_table(G, seed=args.seed)
    if args.format == "json":
        return json.dumps(table_to_json(T), indent=1), EXIT_OK
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["chi", "degree"] + [f"class{k}" for k in range(len(G.classes))])
        for chi in T:
            w.writerow([chi.index, chi.degree] + [str(v) for v in chi.values()])
        return buf.getvalue(), EXIT_OK
    lines = [f"{G.label()}: order {G.order}, {len(G.classes)} classes"]
    for k, c in enumerate(G.classes):
        lines.append(f"  class {k}: order {c.element_order}, size {c.size}, rep {G.element(c.representative)}")
    for chi in T:
        lines.append(f"chi[{chi.index}] (degree {chi.degree}, o = {T.det_orders[chi.index]}): "
                     + ", ".join(str(v) for v in chi.values()))
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_ipi(args, G) -> tuple:
    pi = _pi_from(args)
    basis = ipi_set(G, pi)
    if args.format == "json":
        return json.dumps(basis.to_json(), indent=1), EXIT_OK
    pc = pi_classes(G, pi)
    lines = [f"{G.label()}, pi = {_pi_label(pi, G)}: {len(basis)} members on {len(pc)} pi-classes {pc}"]
    for i, phi in enumerate(basis.members):
        lines.append(f"phi[{i}] degree {int(phi.degree)}, lift chi[{basis.witness[i]}]: {phi}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_nucleus(args, G) -> tuple:
    pi = _pi_from(args)
    T = character_table(G, seed=args.seed)
    chi = T[_check_index(args.chi, len(T), "character")]
    nuc = normal_nucleus(chi, pi)
    v = vertex_pair(chi, pi, nuc)
    TQ = character_table(v.Q)
    rec = {
        "group": G.label(), "pi": pi.spec(), "chi": chi.index, "degree": chi.degree,
        "pi_special": is_pi_special(chi, pi),
        "factorable": factorize_pi(chi, pi) is not None,
        "chain": [{"N_order": s.N.order, "theta_degree": s.theta.degree,
                   "stabilizer_order": s.stabilizer.order,
                   "correspondent_degree": s.correspondent.degree} for s in nuc.chain],
        "W_order": nuc.W.order, "gamma_index": nuc.gamma.index, "gamma_degree": nuc.gamma.degree,
        "gamma_pi_degree": nuc.gamma_pi.degree, "gamma_pi_prime_degree": nuc.gamma_pi_prime.degree,
        "Q_order": v.Q.order, "delta_index": v.delta.index, "delta_degree": v.delta.degree,
        "delta_order": TQ.det_orders[v.delta.index],
        "canonical_lift": chi in npi_set(G, pi),
    }
    if args.format == "json":
        return json.dumps(rec, indent=1), EXIT_OK
    lines = [f"chi[{chi.index}] of {G.label()} (degree {chi.degree}), pi = {_pi_label(pi, G)}"]
    for s in rec["chain"]:
        lines.append(f"  N order {s['N_order']}, theta degree {s['theta_degree']}, "
                     f"G_theta order {s['stabilizer_order']}, correspondent degree {s['correspondent_degree']}")
    lines.append(f"nucleus: |W| = {rec['W_order']}, gamma degree {rec['gamma_degree']} "
                 f"= {rec['gamma_pi_degree']} * {rec['gamma_pi_prime_degree']}")
    lines.append(f"vertex: |Q| = {rec['Q_order']}, delta degree {rec['delta_degree']}, o(delta) = {rec['delta_order']}")
    lines.append(f"canonical lift: {'yes' if rec['canonical_lift'] else 'no'}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_lifts(args, G) -> tuple:
    pi = _pi_from(args)
    basis = ipi_set(G, pi)
    i = _check_index(args.phi, len(basis), "phi")
    L = lifts(basis, i)
    if args.format == "json":
        return json.dumps({"group": G.label(), "pi": pi.spec(), "phi": i,
                           "phi_degree": int(basis.members[i].degree),
                           "lifts": [{"index": c.index, "degree": c.degree,
                                      "values": [str(v) for v in c.values()]} for c in L]},
                          indent=1), EXIT_OK
    lines = [f"phi[{i}] of {G.label()} (degree {int(basis.members[i].degree)}), pi = {_pi_label(pi, G)}: "
             f"{len(L)} lifts"]
    for c in L:
        lines.append(f"  chi[{c.index}] degree {c.degree}: " + ", ".join(str(v) for v in c.values()))
    return "\n".join(lines) + "\n", EXIT_OK


def _emit_rows(rows, fmt) -> tuple:
    code = EXIT_INTEGRITY if any(r.errors for r in rows) else EXIT_OK
    if fmt == "json":
        return rows_to_json(rows) + "\n", code
    if fmt == "csv":
        return rows_to_csv(rows), code
    lines = []
    for r in rows:
        lo = "NA" if r.lower_bound is None else r.lower_bound
        up = "NA" if r.upper_bound is None else r.upper_bound
        status = "ok" if not r.errors else "; ".join(r.errors)
        lines.append(f"{r.group_id} {r.pi_spec} phi[{r.phi_index}] degree {r.phi_degree}: "
                     f"{lo} <= |L| = {r.num_lifts} <= {up}  lower_ok={r.lower_ok} upper_ok="
                     f"{'NA' if r.upper_ok is None else r.upper_ok}  {status}")
    return "\n".join(lines) + "\n", code


def cmd_verify(args, G) -> tuple:
    return _emit_rows(verify_group(G, _pi_from(args)), args.format)


def cmd_census(args) -> tuple:
    rows = census(args.corpus, jobs=args.jobs)
    fmt = args.format if args.format != "text" else "csv"
    return _emit_rows(rows, fmt)


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for eigenspace splitting (default 0)")
    common.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--out", help="write output to this file instead of stdout")

    pi_opts = argparse.ArgumentParser(add_help=False)
    grp = pi_opts.add_mutually_exclusive_group()
    grp.add_argument("--pi", help="prime set: '3,5', '{3,5}' or \"p':3\"")
    grp.add_argument("--p", type=int, help="use pi = p' (all primes except p)")

    ap = argparse.ArgumentParser(prog="pilift", description="Lifts of pi-partial characters.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("table", parents=[common], help="character table")
    s.add_argument("group")
    s = sub.add_parser("ipi", parents=[common, pi_opts], help="irreducible pi-partial characters")
    s.add_argument("group")
    s = sub.add_parser("nucleus", parents=[common, pi_opts], help="normal nucleus and vertex pair")
    s.add_argument("group")
    s.add_argument("--chi", type=int, required=True)
    s = sub.add_parser("lifts", parents=[common, pi_opts], help="lifts of one partial character")
    s.add_argument("group")
    s.add_argument("--phi", type=int, required=True)
    s = sub.add_parser("verify", parents=[common, pi_opts], help="bound checks for every phi")
    s.add_argument("group")
    s = sub.add_parser("census", parents=[common], help="bound checks over a corpus")
    s.add_argument("--corpus", default="default")
    s.add_argument("--jobs", type=int, default=1)
    return ap


COMMANDS = {"table": cmd_table, "ipi": cmd_ipi, "nucleus": cmd_nucleus, "lifts": cmd_lifts,
            "verify": cmd_verify}


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    G = None
    try:
        if args.command == "census":
            text, code = cmd_census(args)
        else:
            G = load_group(args.group, order_cap=args.order_cap)
            text, code = COMMANDS[args.command](args, G)
    except InputError as exc:
        print(f"pilift: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PiliftError as exc:
        print(f"pilift: integrity failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    if G is not None:
        save_cache(G)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
