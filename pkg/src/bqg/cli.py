"""Command-line frontend: bqg irr|fuse|growth|rd.

Exit codes: 0 success, 1 audit/oracle failure, 2 configuration error.
Progress goes to stderr; data only to files under --out.  Outputs are
byte-reproducible for a fixed (config, seed).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys

import numpy as np

from .config import (
    BicrossedConfigured,
    ConfigError,
    SemidirectInstance,
    WeightedSumInstance,
    load_instance,
    load_instance_file,
)
from .groups import GroupError
from .lengths import dual_growth, group_growth, rd_shell_ratio
from .mackey import fusion_oracle, fusion_semidirect
from .presets import preset
from .reps import RepError


class AuditFailure(RuntimeError):
    pass


def _progress(msg: str):
    print(msg, file=sys.stderr)


def _write(outdir: str, name: str, text: str) -> str:
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _json_text(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _load(args):
    if args.instance and args.preset:
        raise ConfigError("cli", "give either --instance or --preset, not both")
    if args.preset:
        doc = preset(args.preset)
    elif args.instance:
        return _override(load_instance_file(args.instance), args)
    else:
        raise ConfigError("cli", "one of --instance or --preset is required")
    inst = load_instance(doc)
    return _override(inst, args)


def _override(inst, args):
    if args.kmax is not None:
        inst.params.kmax = args.kmax
    if args.seed is not None:
        inst.params.seed = args.seed
    if args.tol is not None:
        inst.params.tol = args.tol
    return inst


# ---------------------------------------------------------------------------
# commands


def cmd_irr(inst, outdir: str) -> int:
    if isinstance(inst, WeightedSumInstance):
        raise ConfigError("$.kind", "irr needs a representation-theoretic instance")
    rows, payload = [], []
    if isinstance(inst, SemidirectInstance):
        classes = inst.classes
        total = sum(c.dim ** 2 for c in classes)
        expect = inst.ctx.product.order
        for c in classes:
            lam0 = [int(x) for x in c.drp.lambda0.embed]
            rows.append([c.index, c.dim, c.drp.u_class.index,
                         "|".join(map(str, lam0)), c.drp.v.dim])
            payload.append({
                "id": c.index, "dim": c.dim,
                "u_class": c.drp.u_class.index,
                "lambda0": lam0, "v_dim": c.drp.v.dim,
            })
        header = ["id", "dim", "u_class", "lambda0", "v_dim"]
    else:
        classes = inst.classes()
        if inst.finite:
            expect = inst.mp.gamma.raw.order * inst.mp.h.order
            total = sum(c.dim ** 2 for c in classes)
        else:
            expect = total = None
        for c in classes:
            rows.append([c.index, c.class_id, "|".join(c.orbit.names),
                         inst.mp.gamma.name(c.orbit.base), c.isotype.index, c.dim])
            payload.append({
                "id": c.index, "class_id": c.class_id,
                "orbit": list(c.orbit.names),
                "base": inst.mp.gamma.name(c.orbit.base),
                "isotype": {"index": c.isotype.index,
                            "u_class": c.isotype.drp.u_class.index,
                            "dim": c.isotype.dim},
                "dim": c.dim,
            })
        header = ["id", "class_id", "orbit", "base", "isotype", "dim"]
    audit = {"sum_dim_sq": total, "expected": expect,
             "ok": (total == expect) if expect is not None else True}
    _write(outdir, "irr.csv", _csv_text(header, rows))
    _write(outdir, "irr.json", _json_text({"label": inst.label,
                                           "classes": payload, "audit": audit}))
    _progress(f"irr: {len(rows)} classes, sum dim^2 = {total} (expected {expect})")
    if not audit["ok"]:
        raise AuditFailure("classification completeness audit failed")
    return 0


def _fusion_table_semidirect(inst: SemidirectInstance):
    classes = inst.classes
    n = len(classes)
    table = np.zeros((n, n, n), dtype=int)
    oracle = np.zeros((n, n, n), dtype=int)
    for x, y, z in itertools.product(classes, repeat=3):
        # multiplicity of z in x (x) y
        table[x.index, y.index, z.index] = fusion_semidirect(inst.ctx, z, x, y)
        oracle[x.index, y.index, z.index] = fusion_oracle(inst.ctx, z, x, y)
    return classes, table, oracle


def _fusion_table_bicrossed(inst: BicrossedConfigured):
    classes = inst.classes()
    n = len(classes)
    table = np.zeros((n, n, n), dtype=int)
    for x, y, z in itertools.product(classes, repeat=3):
        table[x.index, y.index, z.index] = inst.instance.fusion(x, y, z)
    return classes, table


def _ring_audit(classes, table) -> dict:
    n = len(classes)
    dims = np.array([c.dim for c in classes])
    eps = 0
    unit = bool(np.array_equal(table[eps], np.eye(n, dtype=int))
                and np.array_equal(table[:, eps, :], np.eye(n, dtype=int)))
    book = all(int((table[x, y] * dims).sum()) == int(dims[x] * dims[y])
               for x in range(n) for y in range(n))
    assoc = bool(np.array_equal(np.einsum("xyz,zwv->xywv", table, table),
                                np.einsum("ywz,xzv->xywv", table, table)))
    return {"unit": unit, "dimension_bookkeeping": book, "associativity": assoc}


def cmd_fuse(inst, outdir: str) -> int:
    if isinstance(inst, WeightedSumInstance):
        raise ConfigError("$.kind", "fuse needs a representation-theoretic instance")
    if isinstance(inst, SemidirectInstance):
        classes, table, oracle = _fusion_table_semidirect(inst)
        diff = [(x, y, z, int(table[x, y, z]), int(oracle[x, y, z]))
                for x, y, z in zip(*np.nonzero(table != oracle))]
        rows = [[x, y, z, int(table[x, y, z])]
                for x, y, z in itertools.product(range(len(classes)), repeat=3)]
        _write(outdir, "fusion.csv",
               _csv_text(["class1", "class2", "class3", "multiplicity"], rows))
        orows = [[x, y, z, int(oracle[x, y, z])]
                 for x, y, z in itertools.product(range(len(classes)), repeat=3)]
        _write(outdir, "fusion_oracle.csv",
               _csv_text(["class1", "class2", "class3", "multiplicity"], orows))
        _write(outdir, "fusion_diff.csv",
               _csv_text(["class1", "class2", "class3", "formula", "oracle"], diff))
        audit = _ring_audit(classes, table)
        audit["oracle_diff"] = len(diff)
        _write(outdir, "fusion.json", _json_text({
            "label": inst.label,
            "table": {f"{x},{y},{z}": int(table[x, y, z])
                      for x, y, z in zip(*np.nonzero(table))},
            "audit": audit,
        }))
        _progress(f"fuse: {table.size} triples, oracle diff {len(diff)}")
        if diff:
            raise AuditFailure(f"{len(diff)} fusion/oracle mismatches")
        if not all(audit[k] for k in ("unit", "dimension_bookkeeping", "associativity")):
            raise AuditFailure(f"fusion ring audit failed: {audit}")
        return 0
    if not inst.finite:
        raise ConfigError("$.kind", "fuse needs a finite instance")
    classes, table = _fusion_table_bicrossed(inst)
    rows = [[x, y, z, int(table[x, y, z])]
            for x, y, z in itertools.product(range(len(classes)), repeat=3)]
    _write(outdir, "fusion.csv",
           _csv_text(["class1", "class2", "class3", "multiplicity"], rows))
    conj = [inst.instance.conjugate_class(c).index for c in classes]
    n = len(classes)
    conj_ok = all(int(table[x, y, z]) == int(table[conj[y], conj[x], conj[z]])
                  for x in range(n) for y in range(n) for z in range(n))
    audit = _ring_audit(classes, table)
    audit["conjugation_symmetry"] = conj_ok
    _write(outdir, "fusion.json", _json_text({
        "label": inst.label,
        "table": {f"{x},{y},{z}": int(table[x, y, z])
                  for x, y, z in zip(*np.nonzero(table))},
        "audit": audit,
    }))
    _progress(f"fuse: {table.size} triples, audit {audit}")
    if not all(audit[k] for k in
               ("unit", "dimension_bookkeeping", "associativity",
                "conjugation_symmetry")):
        raise AuditFailure(f"fusion ring audit failed: {audit}")
    return 0


def cmd_growth(inst, outdir: str) -> int:
    kmax = inst.params.kmax
    wrote = False
    if isinstance(inst, WeightedSumInstance):
        nmax = inst.params.nmax
        counts = [inst.dsl.count_below(k + 1) for k in range(kmax + 1)]
        shells = [counts[0]] + [counts[k] - counts[k - 1] for k in range(1, kmax + 1)]
        rows = [[k, shells[k], counts[k]] for k in range(kmax + 1)]
        _write(outdir, "growth_group.csv",
               _csv_text(["k", "shell_sum", "cumulative"], rows))
        bound = all(inst.dsl.count_below(n) <= n for n in range(1, nmax + 1))
        _progress(f"growth: cumulative-below-n bound up to {nmax}: {bound}")
        if not bound:
            raise AuditFailure("weighted-length growth bound violated")
        return 0
    if isinstance(inst, SemidirectInstance):
        from .lengths import growth_profile
        l_dual = inst.dual_length()
        pairs = [(l_dual(c.index), c.dim ** 2) for c in inst.classes]
        prof = growth_profile(pairs, kmax)
        _write(outdir, "growth_dual.csv", prof.csv())
        _progress(f"growth: dual shells {prof.shells}")
        return 0
    # bicrossed: group shells of the raw word metric, dual shells of the
    # affording family (ball widened so every shell below kmax+1 is complete)
    mp = inst.mp
    if mp.gamma.finite:
        from .lengths import word_length_function
        lG = word_length_function(mp.gamma.raw,
                                  [int(x) for x in inst.lengths.gamma_generators])
        scope = list(mp.gamma.raw.elements())
    else:
        from .lengths import free_word_length
        lG = free_word_length(mp.gamma.raw)
        pad = max(mp.gamma.raw.word_length(w) for w in mp.lam_elems)
        scope = mp.gamma.raw.ball(kmax + 2 * pad)
        inst.params.ball = max(inst.params.ball, kmax + 2 * pad)
    prof = group_growth(mp.gamma, lG, kmax, scope)
    _write(outdir, "growth_group.csv", prof.csv())
    fam = inst.affording()
    profd = dual_growth(inst.classes(), lambda i: fam.values[i], kmax)
    _write(outdir, "growth_dual.csv", profd.csv())
    _progress(f"growth: group shells {prof.shells}, dual shells {profd.shells}")
    return 0


def cmd_rd(inst, outdir: str) -> int:
    if isinstance(inst, WeightedSumInstance):
        raise ConfigError("$.kind", "rd needs a finite quantum instance")
    kmax, seed = inst.params.kmax, inst.params.seed
    if isinstance(inst, SemidirectInstance):
        from .bicrossed import BicrossedInstance, QuantumFourier
        bc = BicrossedInstance(inst.matched_pair(), seed=seed)
        qf = QuantumFourier(bc)
        l_dual = inst.dual_length()
        # plain instances: bicrossed class index == semidirect class index
        lengths = {c.index: l_dual(c.isotype.index) for c in qf.classes}
    else:
        if not inst.finite:
            raise ConfigError("$.kind", "rd needs a finite Gamma")
        qf = inst.fourier()
        lengths = inst.affording().values
    reports = []
    for k in range(kmax + 1):
        rep = rd_shell_ratio(qf, lengths, k, seed=seed,
                             iters=inst.params.iters, restarts=inst.params.samples)
        reports.append(rep.to_dict())
        if rep.lower > rep.upper + inst.params.tol:
            raise AuditFailure(f"rd bracket inverted at shell {k}")
    _write(outdir, "rd.json", _json_text({"label": inst.label, "seed": seed,
                                          "shells": reports}))
    _progress(f"rd: {len(reports)} shells written")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bqg",
        description="Finite-scale bicrossed-product representation theory",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("--instance", help="instance JSON file")
        p.add_argument("--preset", help="named preset instance")
        p.add_argument("--kmax", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out", default="bqg-out")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        inst = _load(args)
        code = COMMANDS[args.command](inst, args.out)
    except (ConfigError, KeyError) as exc:
        _progress(f"config error: {exc}")
        return 2
    except (AuditFailure, RepError, GroupError) as exc:
        _progress(f"audit failure: {exc}")
        return 1
    return code


COMMANDS = {
    "irr": cmd_irr,
    "fuse": cmd_fuse,
    "growth": cmd_growth,
    "rd": cmd_rd,
}


if __name__ == "__main__":
    sys.exit(main())
