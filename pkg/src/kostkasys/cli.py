"""Command line front end.

Exit codes: 0 success, 2 bad input (schema, table validation, unknown label,
Malle violation), 3 a mathematical flag failed, 4 truncation certification
failed, 5 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .amod import certify_finite, trace_quotient
from .errors import InputError, KostkaError, TruncationError
from .kostka import (NORMALIZATIONS, bnabla_structure, determine_normalization, full_report,
                     kostka_trunc, ldl_report, oracle_matches, oracle_table, _partition_of,
                     filtration_matrices)
from .molien import default_trunc, fake_degree, invariant_degrees, multiplicities
from .scalars import poly_str
from .wgroup import (BUILTIN_NAMES, builtin_group, builtin_preorder, conjugation_map, partition_name,
                     load_group_file, load_preorder_file, validate_malle)

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_TRUNC, EXIT_IO = 0, 2, 3, 4, 5


class IOFailure(KostkaError):
    exit_code = EXIT_IO


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise IOFailure(f"{path}: {exc.strerror or exc}") from None


def resolve_group(source):
    """A built-in name or a path to a group data file -> (group, table)."""
    if source in BUILTIN_NAMES or (source.startswith("S") and source[1:].isdigit()):
        return builtin_group(source)
    if os.path.exists(source) or source.endswith(".json"):
        return load_group_file(_read_json(source))
    raise InputError(f"unknown group {source!r}; built-ins are {', '.join(BUILTIN_NAMES)}")


def resolve_preorder(group_name, T, source):
    if source is None:
        source = "default"
    if os.path.exists(source) or source.endswith(".json"):
        P = load_preorder_file(T, _read_json(source))
    else:
        P = builtin_preorder(group_name, T, source)
    validate_malle(P, T)
    return P


# ---------------------------------------------------------------------------
# output helpers

def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOFailure(f"{out}: {exc.strerror or exc}") from None


def _json(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _rows_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands

def cmd_info(args):
    G, T = resolve_group(args.group)
    degrees = invariant_degrees(G, T)
    conj = conjugation_map(T)
    doc = {
        "group": G.name,
        "order": G.order,
        "rank": G.dim_h,
        "conductor": G.conductor,
        "degrees": degrees,
        "classes": [{"representative": G.words[r], "size": s}
                    for r, s in zip(G.class_reps, G.class_sizes)],
        "characters": [{"name": T.names[i], "values": [str(x) for x in T.rows[i]],
                        "fake_degree": poly_str(fake_degree(G, T, i)),
                        "conjugate": T.names[conj[i]]} for i in range(len(T.rows))],
    }
    if args.format == "json":
        return _json(doc), EXIT_OK
    if args.format == "csv":
        rows = [[c["name"], c["fake_degree"], c["conjugate"]] + c["values"]
                for c in doc["characters"]]
        header = ["character", "fake_degree", "conjugate"] + [f"class{i}" for i in
                                                              range(len(G.classes))]
        return _rows_csv(header, rows), EXIT_OK
    lines = [f"group {G.name}", f"order {G.order}", f"rank {G.dim_h}",
             f"conductor {G.conductor}", f"degrees {degrees}",
             "class sizes " + " ".join(str(s) for s in G.class_sizes), "characters:"]
    width = max(len(n) for n in T.names)
    for c in doc["characters"]:
        lines.append(f"  {c['name'].ljust(width)}  " + "  ".join(c["values"])
                     + f"   fake degree {c['fake_degree']}   conjugate {c['conjugate']}")
    return "\n".join(lines) + "\n", EXIT_OK


def _certified_weak(G, T, P, chi, N, buffer):
    Q, C = trace_quotient(G, T, P, chi, "weak", N)
    if certify_finite(C, buffer):
        return C, N
    Q, C = trace_quotient(G, T, P, chi, "weak", 2 * N)
    if certify_finite(C, buffer):
        return C, 2 * N
    raise TruncationError(f"truncation-insufficient: bnabla of {T.names[chi]} is not "
                          f"certified finite at N = {2 * N}")


def _grades(T, mults, upto):
    out = []
    for k in range(upto + 1):
        part = {T.names[i]: str(s.coeffs[k]) for i, s in enumerate(mults) if s.coeffs[k] != 0}
        out.append(part)
    return out


def cmd_traces(args):
    G, T = resolve_group(args.group)
    P = resolve_preorder(G.name, T, args.preorder)
    N = args.trunc if args.trunc is not None else default_trunc(G, T)
    if N < 1:
        raise TruncationError("invalid-truncation: N must be >= 1")
    chis = [T.index(args.chi)] if args.chi is not None else P.ordering()
    entries = []
    weak_rows = {}
    for chi in chis:
        C, Nw = _certified_weak(G, T, P, chi, N, args.buffer)
        wm = multiplicities(G, T, C)
        weak_rows[chi] = [s.truncate(N) for s in wm] if Nw != N else wm
        _, Cs = trace_quotient(G, T, P, chi, "strict", N)
        sm = multiplicities(G, T, Cs)
        top = max([k for k in range(Nw + 1) if any(s.coeffs[k] != 0 for s in wm)] + [0])
        entries.append({"character": T.names[chi], "bnabla": _grades(T, wm, top),
                        "nabla": _grades(T, sm, N), "certified_finite": True,
                        "truncation": N})
    structure = bnabla_structure(T, P, weak_rows, args.buffer, N)
    for e in entries:
        e["structure_ok"] = structure[e["character"]]
    code = EXIT_OK if all(structure.values()) else EXIT_MATH
    doc = {"group": G.name, "phyla": [[T.names[i] for i in ph] for ph in P.phyla],
           "traces": entries}
    if args.format == "json":
        return _json(doc), code
    if args.format == "csv":
        rows = []
        for e in entries:
            for kind in ("bnabla", "nabla"):
                for k, part in enumerate(e[kind]):
                    for name, mult in sorted(part.items()):
                        rows.append([e["character"], kind, k, name, mult])
        return _rows_csv(["character", "module", "grade", "constituent", "multiplicity"],
                         rows), code
    lines = []
    for e in entries:
        fmt = "; ".join(" + ".join(f"{m}*{n}" if m != "1" else n for n, m in sorted(p.items()))
                        or "0" for p in e["bnabla"])
        lines.append(f"bnabla[{e['character']}]  grades 0..{len(e['bnabla']) - 1}: {fmt}"
                     f"   finite: yes   structure: {'ok' if e['structure_ok'] else 'FAILED'}")
        fmt = "; ".join(" + ".join(f"{m}*{n}" if m != "1" else n for n, m in sorted(p.items()))
                        or "0" for p in e["nabla"])
        lines.append(f"nabla[{e['character']}]   grades 0..{N}: {fmt}")
    return "\n".join(lines) + "\n", code


def _render_report(rep, fmt):
    if fmt == "json":
        return rep.to_json()
    if fmt == "csv":
        return rep.to_csv()
    return rep.to_text()


def cmd_kostka(args):
    G, T = resolve_group(args.group)
    P = resolve_preorder(G.name, T, args.preorder)
    source = args.group if args.group in BUILTIN_NAMES else os.path.abspath(args.group)
    rep = full_report(G, T, P, N=kostka_trunc(G, T, args.trunc), buffer=args.buffer,
                      source=source, verify=args.verify)
    return _render_report(rep, args.format), EXIT_OK if rep.ok() else EXIT_MATH


def cmd_ldl(args):
    G, T = resolve_group(args.group)
    P = resolve_preorder(G.name, T, args.preorder)
    rep = ldl_report(G, T, P)
    return _render_report(rep, args.format), EXIT_OK if rep.ok() else EXIT_MATH


def cmd_oracle(args):
    """Kostka-Foulkes table by charge; with a symmetric group, compare with m."""
    G, T = resolve_group(args.group)
    if not (G.name.startswith("S") and G.name[1:].isdigit()):
        raise InputError("the charge oracle applies to symmetric groups only")
    n = int(G.name[1:])
    if n > 6:
        raise InputError("invalid-input: charge oracle supports n <= 6")
    norm = args.normalization
    if norm == "auto":
        G2, T2 = builtin_group("S2")
        r2 = filtration_matrices(G2, T2, builtin_preorder("S2", T2, "dominance"))
        r2.partition_labels = {i: _partition_of(T2, i) for i in range(len(T2.rows))}
        norm = determine_normalization(r2)
        if norm is None:
            return _json({"normalization": None, "match": False}), EXIT_MATH
    P = resolve_preorder(G.name, T, args.preorder or "dominance")
    rep = filtration_matrices(G, T, P, N=kostka_trunc(G, T, args.trunc), buffer=args.buffer)
    rep.partition_labels = {i: _partition_of(T, i) for i in range(len(T.rows))}
    match = oracle_matches(rep, n, norm)
    table = oracle_table(n, norm)
    doc = {"group": G.name, "normalization": norm, "match": match,
           "table": {f"{partition_name(lam)}|{partition_name(mu)}": poly_str(p)
                     for (lam, mu), p in sorted(table.items())}}
    code = EXIT_OK if match else EXIT_MATH
    if args.format == "json":
        return _json(doc), code
    if args.format == "csv":
        rows = [[k.split("|")[0], k.split("|")[1], v] for k, v in doc["table"].items()]
        return _rows_csv(["lambda", "mu", "K(q)"], rows), code
    lines = [f"group {G.name}", f"normalization {norm}", f"match {'yes' if match else 'NO'}"]
    lines += [f"K[{k.replace('|', ', ')}] = {v or '0'}" for k, v in doc["table"].items()]
    return "\n".join(lines) + "\n", code


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="kostkasys",
                                description="Kostka systems of graded modules over C[W] # S(h).")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, preorder=True):
        sp.add_argument("--group", required=True, help="built-in name or group JSON file")
        if preorder:
            sp.add_argument("--preorder", default=None,
                            help="default, dominance, springer, one-phylum or a JSON file")
        sp.add_argument("--trunc", type=int, default=None, help="truncation grade N")
        sp.add_argument("--buffer", type=int, default=3,
                        help="vanishing top grades required for finiteness")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("json", "csv", "text"), default="text")
        sp.add_argument("--verify", choices=("characters", "full"), default="characters",
                        help="'full' adds Hom computations between the quotient modules")

    common(sub.add_parser("info", help="group order, degrees and character table"),
           preorder=False)
    sp = sub.add_parser("traces", help="graded characters of nabla and bnabla")
    common(sp)
    sp.add_argument("--chi", default=None, help="restrict to one character label")
    common(sub.add_parser("kostka", help="filtration matrices and all checks"))
    common(sub.add_parser("ldl", help="block factorization of the projective pairing"))
    sp = sub.add_parser("oracle", help="Kostka-Foulkes polynomials by charge")
    common(sp)
    sp.add_argument("--normalization", default="auto", choices=["auto"] + list(NORMALIZATIONS))
    return p


COMMANDS = {"info": cmd_info, "traces": cmd_traces, "kostka": cmd_kostka, "ldl": cmd_ldl,
            "oracle": cmd_oracle}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        text, code = COMMANDS[args.command](args)
        _emit(text, args.out)
    except KostkaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return code


if __name__ == "__main__":
    sys.exit(main())
