"""Regenerates the files under data/sample from the reference rows.

The pairwise matrices are synthetic: three experts judge the fourteen
indicators on the Saaty scale around a shared weight profile.
"""
import json
import random
from fractions import Fraction
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[2] / "data" / "sample"
IDS = [f"B{i}" for i in range(1, 15)]

ENTROPY_ROWS = [
    ("B1", 0.966, 0.034, 0.245, 0.2333, 0.313),
    ("B2", 0.963, 0.037, 0.263, 0.2333, 0.336),
    ("B3", 0.985, 0.015, 0.106, 0.2333, 0.135),
    ("B4", 0.982, 0.018, 0.13, 0.1834, 0.13),
    ("B5", 0.977, 0.023, 0.166, 0.0667, 0.061),
    ("B6", 0.987, 0.013, 0.091, 0.05, 0.025),
    ("B7", 0.856, 0.144, 0.0293, 0.4, 0.355),
    ("B8", 0.735, 0.265, 0.54, 0.3, 0.492),
    ("B9", 0.918, 0.082, 0.167, 0.3, 0.152),
    ("B10", 0.996, 0.004, 0.024, 0.1667, 0.27),
    ("B11", 0.965, 0.035, 0.184, 0.1333, 0.17),
    ("B12", 0.975, 0.025, 0.13, 0.15, 0.136),
    ("B13", 0.992, 0.008, 0.043, 0.15, 0.045),
    ("B14", 0.945, 0.055, 0.129, 0.1833, 0.372),
]

RATINGS = ["M", "VH", "H", "M", "M", "VH", "H", "H", "H", "VL", "VL", "L", "VL", "H"]
PEAK = {"VL": 0, "L": 2.5, "M": 5, "H": 7.5, "VH": 10}

COLUMNS = [["VL"], ["L"], ["M"], ["H"], ["VH"], ["VL", "L"], ["L", "M"], ["M", "H"], ["H", "VH"]]
WINDOW_ROWS = [
    ("B1, B2, B3, B4", [0, 0, 0, 0, 0, 0, 0.01, 0.02, 0.03]),
    ("B3, B4, B5, B6", [0, 0, 0, 0, 0, 0, 0.01, 0.02, 0.01]),
    ("B5, B6, B7, B8", [0, 0, 0, 0.2, 0, 0, 0.01, 0.11, 0.11]),
    ("B7, B8, B9, B10", [0, 0, 0, 0.2, 0, 0, 0, 0.08, 0.08]),
    ("B9, B10, B11, B12", [0, 0, 0, 0.1, 0, 0.02, 0.01, 0.04, 0.04]),
    ("B11, B12, B13, B14", [0, 0, 0, 0.1, 0, 0.02, 0.01, 0.03, 0.03]),
]
FRAME = ["VL", "L", "M", "H", "VH"]

SAATY = [Fraction(1, k) for k in range(9, 1, -1)] + [Fraction(k) for k in range(1, 10)]
RI = {"11": 1.51, "12": 1.48, "13": 1.56, "14": 1.57, "15": 1.59}


def fmt(x):
    return repr(float(x))


def nearest_saaty(ratio):
    return min(SAATY, key=lambda s: abs(np.log(float(s)) - np.log(ratio)))


def expert_matrix(weights):
    n = len(weights)
    m = [[Fraction(1)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = nearest_saaty(weights[i] / weights[j])
            m[i][j] = v
            m[j][i] = 1 / v
    return m


def cr(matrix):
    a = np.array([[float(v) for v in row] for row in matrix])
    lam = max(np.linalg.eigvals(a).real)
    n = len(a)
    return (lam - n) / n / RI[str(n)]


def as_text(v):
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "entropy_table.csv", "w") as f:
        f.write("indicator,E,d,W,lambda,W_adj\n")
        for row in ENTROPY_ROWS:
            f.write(",".join([row[0]] + [fmt(v) for v in row[1:]]) + "\n")
    with open(OUT / "priors.csv", "w") as f:
        f.write("indicator,lambda\n")
        for row in ENTROPY_ROWS:
            f.write(f"{row[0]},{fmt(row[4])}\n")
    with open(OUT / "scores.csv", "w") as f:
        f.write("expert_id,indicator,score\n")
        for ind, label in zip(IDS, RATINGS):
            f.write(f"reference,{ind},{fmt(PEAK[label])}\n")
    windows = []
    for label, masses in WINDOW_ROWS:
        entries = [{"subset": c, "mass": m} for c, m in zip(COLUMNS, masses) if m > 0]
        printed = sum(Fraction(str(m)) for m in masses)
        entries.append({"subset": FRAME, "mass": float(1 - printed)})
        windows.append({"label": label, "frame": FRAME, "masses": entries})
    (OUT / "windows.json").write_text(json.dumps(windows, indent=2) + "\n")
    (OUT / "ri.json").write_text(json.dumps(RI, indent=2) + "\n")

    rng = random.Random(14)
    base = [row[3] + 0.05 for row in ENTROPY_ROWS]
    experts = []
    for e in range(3):
        w = [b * rng.uniform(0.8, 1.25) for b in base]
        m = expert_matrix(w)
        print(f"expert e{e + 1}: CR = {cr(m):.4f}")
        experts.append({"id": f"e{e + 1}", "matrix": [[as_text(v) for v in row] for row in m]})
    lines = ['{', '  "indicators": ' + json.dumps(IDS) + ',', '  "experts": [']
    for k, e in enumerate(experts):
        rows = ",\n".join("      " + json.dumps(row) for row in e["matrix"])
        tail = "," if k + 1 < len(experts) else ""
        lines.append('    {"id": "%s", "matrix": [\n%s\n    ]}%s' % (e["id"], rows, tail))
    lines += ['  ]', '}']
    (OUT / "matrices.json").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
