#!/usr/bin/env python3
"""Materialize the real-world benchmark networks into data/.

lesmis is rebuilt locally from networkx (it ships the canonical 77-node /
254-edge coappearance network). The other seven are listed with their usual
download locations and expected sizes; in an offline sandbox they stay absent
and the acceptance tests that need them skip with a per-network reason.

Run: python3 scripts/fetch_datasets.py [--data-dir data]
"""

import argparse
import gzip
import io
import sys
import urllib.error
import urllib.request
import zipfile
from pathlib import Path

# name -> (expected_n, expected_m, url, member inside the archive or None)
REMOTE = {
    "dolphins": (62, 159, "https://websites.umich.edu/~mejn/netdata/dolphins.zip", "dolphins.gml"),
    "polbooks": (105, 441, "https://websites.umich.edu/~mejn/netdata/polbooks.zip", "polbooks.gml"),
    "adjnoun": (112, 425, "https://websites.umich.edu/~mejn/netdata/adjnoun.zip", "adjnoun.gml"),
    "football": (115, 613, "https://websites.umich.edu/~mejn/netdata/football.zip", "football.gml"),
    "celegansneural": (297, 2148, "https://websites.umich.edu/~mejn/netdata/celegansneural.zip", "celegansneural.gml"),
    "netscience": (1589, 2742, "https://websites.umich.edu/~mejn/netdata/netscience.zip", "netscience.gml"),
    "power": (4941, 6594, "https://websites.umich.edu/~mejn/netdata/power.zip", "power.gml"),
}

EXPECTED = {"lesmis": (77, 254), **{k: v[:2] for k, v in REMOTE.items()}}


def write_lesmis(path: Path) -> None:
    import networkx as nx

    g = nx.les_miserables_graph()
    names = sorted(g.nodes())
    idx = {name: i for i, name in enumerate(names)}
    lines = ["graph [", '  comment "Les Miserables character coappearances"']
    for name in names:
        lines.append(f'  node [\n    id {idx[name]}\n    label "{name}"\n  ]')
    edges = sorted((min(idx[u], idx[v]), max(idx[u], idx[v])) for u, v in g.edges())
    for u, v in edges:
        lines.append(f"  edge [\n    source {u}\n    target {v}\n  ]")
    lines.append("]")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def fetch_remote(name: str, path: Path) -> bool:
    n, m, url, member = REMOTE[name]
    try:
        with urllib.request.urlopen(url, timeout=30) as resp:
            payload = resp.read()
    except (urllib.error.URLError, OSError) as exc:
        print(f"  {name}: download failed ({exc}); expected {n} nodes / {m} edges from {url}")
        return False
    if url.endswith(".zip"):
        with zipfile.ZipFile(io.BytesIO(payload)) as zf:
            payload = zf.read(member)
    elif url.endswith(".gz"):
        payload = gzip.decompress(payload)
    path.write_bytes(payload)
    return True


def verify(name: str, path: Path) -> bool:
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
    from netquake import load_gml

    g = load_gml(str(path))
    n, m = EXPECTED[name]
    ok = (g.n, g.m) == (n, m)
    status = "ok" if ok else f"MISMATCH got {g.n}/{g.m}"
    print(f"  {name}: {g.n} nodes / {g.m} edges -> {status}")
    return ok


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data-dir", default=Path(__file__).resolve().parent.parent / "data")
    args = parser.parse_args()
    data_dir = Path(args.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)

    failures = 0
    lesmis = data_dir / "lesmis.gml"
    if not lesmis.exists():
        write_lesmis(lesmis)
    print("local:")
    failures += not verify("lesmis", lesmis)

    print("remote:")
    for name in REMOTE:
        path = data_dir / f"{name}.gml"
        if path.exists():
            failures += not verify(name, path)
            continue
        if fetch_remote(name, path):
            failures += not verify(name, path)
        else:
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
