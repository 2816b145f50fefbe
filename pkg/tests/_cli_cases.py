"""Graph fixtures and one invocation per CLI subcommand, shared by the CLI tests."""

from __future__ import annotations

import contextlib
import io
import json
from pathlib import Path

from matchmeasure.cli import main
from matchmeasure.generators import make_complete_bipartite, make_cycle, make_path, random_regular
from matchmeasure.graph import write_graph


def write_fixtures(root: Path) -> dict:
    paths = {
        "c4": make_cycle(4),
        "c6": make_cycle(6),
        "p3": make_path(3),
        "k33": make_complete_bipartite(3, 3),
        "cubic": random_regular(12, 3, seed=1),
    }
    out = {}
    for name, g in paths.items():
        p = root / f"{name}.txt"
        write_graph(g, p)
        out[name] = str(p)
    manifest = root / "manifest.json"
    manifest.write_text(json.dumps({"family": "random_regular", "d": 3, "sizes": [10, 12, 14], "r": 1, "seed": 2}))
    out["manifest"] = str(manifest)
    return out


def subcommand_cases(f: dict) -> dict:
    """argv per subcommand, without the common --threads flag."""
    return {
        "gen": ["gen", "--family", "random-regular", "--n", "12", "--d", "3", "--seed", "4"],
        "poly": ["poly", "--graph", f["c4"]],
        "indep": ["indep", "--graph", f["c4"]],
        "stats": ["stats", "--graph", f["cubic"]],
        "pm": ["pm", "--graph", f["k33"]],
        "bs-stats": ["bs-stats", "--graph", f["cubic"], "--r", "2"],
        "measure": ["measure", "--graph", f["c6"]],
        "edge-prob": ["edge-prob", "--graph", f["k33"]],
        "cover": ["cover", "--graph", f["k33"], "--edge", "0,3", "--n", "2"],
        "construct": ["construct", "theorem52", "--d", "3", "--n", "2"],
        "mckay": ["mckay", "--d", "3"],
        "expander": ["expander", "--graph", f["k33"], "--edge", "0,3"],
        "bs-dist": ["bs-dist", "--graph", f["c6"], "--other", f["k33"], "--r", "1"],
        "converge": ["converge", "--manifest", f["manifest"]],
        "diverge": ["diverge", "--d", "3", "--seed", "1"],
        "selftest": ["selftest", "--max-v", "5", "--random", "5"],
    }


def run(argv) -> tuple:
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()
