#!/usr/bin/env python3
"""Regenerate crates/core/data/*.jsonl from the KnotInfo / LinkInfo CSV dumps.

Usage: build_tables.py CSV_DIR OUT_DIR

CSV_DIR holds knotinfo_data_complete.csv and linkinfo_data_complete.csv
(shipped in the `database_knotinfo` Python package).

The `det` column is NOT copied from the dumps. It is recomputed by brute-force
counting of Fox colorings (depth-first search over arc colors with constraint
propagation, no linear algebra): for each prime p the p-part of det is
lim_e #colorings(p^e) / p^e. The dump's own determinant column is only used as
a cross-check, and any disagreement aborts the run.
"""
import csv
import json
import re
import sys
from pathlib import Path

csv.field_size_limit(10**9)

KNOTS = ["3_1", "4_1", "5_1", "5_2"] + [f"6_{i}" for i in range(1, 4)] \
    + [f"7_{i}" for i in range(1, 8)] + [f"8_{i}" for i in range(1, 22)]
LINKS = ["L2a1{0}", "L4a1{0}", "L5a1{0}", "L6a1{0}", "L6a2{0}", "L6a3{0}",
         "L6a4{0,0}", "L6a5{0,0}", "L7a1{0}", "L7a2{0}", "L7a3{0}",
         "L7a4{0}", "L7a5{0}", "L7a6{0}", "L7n1{0}", "L7n2{0}"]


def load(path):
    head = open(path).read(4000)
    delim = "|" if head.count("|") > 5 else ","
    rows = list(csv.DictReader(open(path, newline=""), delimiter=delim))
    return {r["name"]: r for r in rows[1:]}


def parse_pd(text):
    nums = [int(x) for x in re.findall(r"-?\d+", text)]
    assert len(nums) % 4 == 0
    return [nums[i:i + 4] for i in range(0, len(nums), 4)]


def arcs_of(pd):
    """Crossing records (over, under_in, under_out) over arc ids."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in pd:
        a, b = find(x[1]), find(x[3])
        parent[a] = b
    roots = sorted({find(e) for x in pd for e in x})
    ids = {r: i for i, r in enumerate(roots)}
    return len(roots), [(ids[find(x[1])], ids[find(x[0])], ids[find(x[2])]) for x in pd]


def count_colorings(k, crossings, n):
    """Number of n-colorings with arc 0 pinned to color 0 (DFS + propagation)."""
    vals = [None] * k
    vals[0] = 0
    count = 0

    def consistent_and_propagate(assigned):
        changed = True
        while changed:
            changed = False
            for o, a, b in crossings:
                vo, va, vb = vals[o], vals[a], vals[b]
                known = (vo is not None) + (va is not None) + (vb is not None)
                if known == 3:
                    if (2 * vo - va - vb) % n:
                        return False
                elif known == 2 and vo is not None:
                    tgt = a if va is None else b
                    other = vb if va is None else va
                    vals[tgt] = (2 * vo - other) % n
                    assigned.append(tgt)
                    changed = True
                elif known == 2 and n % 2 == 1 and o not in (a, b):
                    vals[o] = (va + vb) * pow(2, -1, n) % n
                    assigned.append(o)
                    changed = True
        return True

    def dfs():
        nonlocal count
        try:
            i = vals.index(None)
        except ValueError:
            count += 1
            return
        for v in range(n):
            vals[i] = v
            assigned = [i]
            if consistent_and_propagate(assigned):
                dfs()
            for j in assigned:
                vals[j] = None

    start = [0]
    if consistent_and_propagate(start):
        dfs()
    for j in start[1:]:
        vals[j] = None
    return count


def primes_upto(m):
    return [p for p in range(2, m + 1) if all(p % q for q in range(2, int(p ** 0.5) + 1))]


def brute_force_det(k, crossings, prime_bound=61, power_bound=256):
    det = 1
    for p in primes_upto(prime_bound):
        if count_colorings(k, crossings, p) == 1:
            continue
        part, q = 1, p
        while q <= max(power_bound, p * p):
            c = count_colorings(k, crossings, q)
            if c == part:
                break
            part = c
            q *= p
        else:
            raise SystemExit(f"p-part for {p} did not stabilise below {power_bound}")
        det *= part
    return det


def main():
    src, out = Path(sys.argv[1]), Path(sys.argv[2])
    knots = load(src / "knotinfo_data_complete.csv")
    links = load(src / "linkinfo_data_complete.csv")
    jobs = [("knots8.jsonl", [(n, knots[n]["pd_notation"], knots[n]["determinant"], n) for n in KNOTS]),
            ("links.jsonl", [(n.split("{")[0], links[n]["pd_notation_vector"], links[n]["determinant"], n)
                             for n in LINKS])]
    for fname, entries in jobs:
        lines = []
        for name, pd_text, ref_det, _ in entries:
            pd = parse_pd(pd_text)
            k, crossings = arcs_of(pd)
            assert k == len(pd), name
            det = brute_force_det(k, crossings)
            if det != int(ref_det):
                raise SystemExit(f"{name}: brute force {det} vs reference {ref_det}")
            lines.append(json.dumps({"name": name, "pd": pd, "det": det}, separators=(",", ":")))
            print(name, det, file=sys.stderr)
        (out / fname).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
