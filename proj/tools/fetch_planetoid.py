#!/usr/bin/env python3
"""Fetch the Planetoid citation datasets (cora, citeseer, pubmed) and convert
them to the text layout the loader expects:

    <out>/<name>/meta.json      {"name", "n_nodes", "n_features", "n_classes"}
    <out>/<name>/graph.tsv      src<TAB>dst, one undirected edge per line
    <out>/<name>/features.tsv   one node per line, space-separated reals
    <out>/<name>/labels.tsv     one integer label per line

Source: the .npz snapshots from github.com/shchur/gnn-benchmark (same
Planetoid data, friendlier serialization). Needs network access + numpy;
run it on any machine and copy the output directories next to the binary:

    python3 tools/fetch_planetoid.py --out data cora citeseer pubmed

Offline, convert an already-downloaded file with --from-npz. The graph is
symmetrized, self-loops and duplicate edges are dropped, and for cora and
citeseer the largest connected component is kept (2485 and 2110 nodes),
which is the convention the accuracy tables assume.
"""

import argparse
import io
import json
import sys
import urllib.request
from collections import deque
from pathlib import Path

import numpy as np

URL = "https://github.com/shchur/gnn-benchmark/raw/master/data/npz/{name}.npz"


def csr_to_dense(data, indices, indptr, shape):
    out = np.zeros(shape, dtype=np.float64)
    for i in range(shape[0]):
        lo, hi = indptr[i], indptr[i + 1]
        out[i, indices[lo:hi]] = data[lo:hi]
    return out


def load_npz(blob):
    with np.load(io.BytesIO(blob), allow_pickle=True) as f:
        adj_shape = tuple(int(v) for v in f["adj_shape"])
        n = adj_shape[0]
        adj_indices = f["adj_indices"].astype(np.int64)
        adj_indptr = f["adj_indptr"].astype(np.int64)
        if "attr_data" in f:
            x = csr_to_dense(
                f["attr_data"].astype(np.float64),
                f["attr_indices"].astype(np.int64),
                f["attr_indptr"].astype(np.int64),
                tuple(int(v) for v in f["attr_shape"]),
            )
        else:
            x = np.asarray(f["attr_matrix"], dtype=np.float64)
        y = f["labels"].astype(np.int64)
    # undirected simple graph: union of both directions, no self-loops
    neighbors = [set() for _ in range(n)]
    for i in range(n):
        for j in adj_indices[adj_indptr[i] : adj_indptr[i + 1]]:
            j = int(j)
            if i != j:
                neighbors[i].add(j)
                neighbors[j].add(i)
    return neighbors, x, y


def largest_component(neighbors):
    n = len(neighbors)
    seen = np.full(n, -1, dtype=np.int64)
    comp = 0
    for start in range(n):
        if seen[start] >= 0:
            continue
        queue = deque([start])
        seen[start] = comp
        while queue:
            u = queue.popleft()
            for v in neighbors[u]:
                if seen[v] < 0:
                    seen[v] = comp
                    queue.append(v)
        comp += 1
    sizes = np.bincount(seen, minlength=comp)
    keep = np.flatnonzero(seen == int(np.argmax(sizes)))
    return keep  # sorted old indices of the largest component


def write_dataset(out_dir, name, neighbors, x, y):
    n, d = x.shape
    classes = np.unique(y)
    remap = {int(c): i for i, c in enumerate(sorted(int(c) for c in classes))}
    out = Path(out_dir) / name
    out.mkdir(parents=True, exist_ok=True)

    meta = {"name": name, "n_nodes": int(n), "n_features": int(d), "n_classes": len(remap)}
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")

    with open(out / "graph.tsv", "w", encoding="utf-8", newline="\n") as f:
        for i in range(n):
            for j in sorted(neighbors[i]):
                if i < j:
                    f.write(f"{i}\t{j}\n")

    with open(out / "features.tsv", "w", encoding="utf-8", newline="\n") as f:
        for i in range(n):
            f.write(" ".join(repr(float(v)) for v in x[i]) + "\n")

    with open(out / "labels.tsv", "w", encoding="utf-8", newline="\n") as f:
        for v in y:
            f.write(f"{remap[int(v)]}\n")
    print(f"{name}: wrote {n} nodes, {d} features, {len(remap)} classes -> {out}")


def convert(name, blob, out_dir, keep_lcc):
    neighbors, x, y = load_npz(blob)
    if keep_lcc:
        keep = largest_component(neighbors)
        old_to_new = {int(o): i for i, o in enumerate(keep)}
        neighbors = [
            sorted(old_to_new[v] for v in neighbors[int(o)] if int(v) in old_to_new) for o in keep
        ]
        neighbors = [set(ns) for ns in neighbors]
        x = x[keep]
        y = y[keep]
    write_dataset(out_dir, name, neighbors, x, y)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("names", nargs="*", default=["cora", "citeseer", "pubmed"],
                    help="datasets to fetch (default: all three)")
    ap.add_argument("--out", default="data", help="output root directory [data]")
    ap.add_argument("--from-npz", metavar="FILE", default=None,
                    help="convert a local .npz instead of downloading (one name required)")
    ap.add_argument("--full-graph", action="store_true",
                    help="keep all nodes instead of the largest connected component")
    args = ap.parse_args()
    names = args.names or ["cora", "citeseer", "pubmed"]

    if args.from_npz:
        if len(names) != 1:
            ap.error("--from-npz converts exactly one dataset; pass its name")
        blob = Path(args.from_npz).read_bytes()
        keep_lcc = not args.full_graph and names[0] in ("cora", "citeseer")
        convert(names[0], blob, args.out, keep_lcc)
        return

    for name in names:
        url = URL.format(name=name)
        print(f"downloading {url}")
        with urllib.request.urlopen(url) as r:
            blob = r.read()
        keep_lcc = not args.full_graph and name in ("cora", "citeseer")
        convert(name, blob, args.out, keep_lcc)


if __name__ == "__main__":
    sys.exit(main())
