"""Regenerates the stand-in configs for the sigmoid-lane and bipartite experiments.

The fitted acceptance curves and the contract graph behind the published
sigmoid-lane and round-trip results are proprietary; these configs use
made-up logistic parameters and a random graph of the same size instead.
"""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "configs"


def logistic(k, x0, p_max):
    return {"type": "logistic", "k": k, "x0": x0, "p_min": 0.0, "p_max": p_max}


def sigmoid_lane():
    # Two lead-time segments, 100 loads each.
    segments = [logistic(0.02, 350.0, 2000.0), logistic(0.008, 600.0, 2000.0)]
    oracles = [segments[0]] * 100 + [segments[1]] * 100
    return {
        "experiment": "sigmoid_lane_standin",
        "instance": {
            "loads": 200,
            "capacity": 140,
            "alternate_cost": 5000.0,
            "nu": 0.25,
            "family": {"type": "lane"},
            "oracles": oracles,
        },
        "dfw": {"epsilon": 100.0, "max_iterations": 20000},
        "eval": {"samples": 1000, "seed": 7},
    }


def bipartite():
    rng = random.Random(20260214)
    n = 50
    edges = [(i, j) for i in range(n) for j in range(n) if rng.random() < 0.10]
    with open(OUT / "standin_edges.txt", "w") as f:
        f.write("# stand-in round-trip graph: 50 O->D loads (left), 50 D->O loads (right)\n")
        for i, j in edges:
            f.write(f"{i} {j}\n")
    oracles = [logistic(round(rng.uniform(0.03, 0.08), 4), round(rng.uniform(150.0, 250.0), 1), 600.0)
               for _ in range(2 * n)]
    return {
        "experiment": "bipartite_standin",
        "instance": {
            "capacity": 25,
            "alternate_cost": 300.0,
            "nu": 0.2,
            "family": {"type": "bipartite", "n_left": n, "n_right": n, "edges_file": "standin_edges.txt"},
            "oracles": oracles,
        },
        "dfw": {"epsilon": 1.0, "max_iterations": 20000},
        "eval": {"samples": 1000, "seed": 5},
        "sweep": {"axis": "alternate_premium", "values": [0, 5, 10, 20, 50]},
    }


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for name, cfg in [("sigmoid_lane_standin.json", sigmoid_lane()), ("bipartite_standin.json", bipartite())]:
        with open(OUT / name, "w") as f:
            json.dump(cfg, f, indent=1)
            f.write("\n")
