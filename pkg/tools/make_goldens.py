"""Compute and freeze golden expected values for the test suite.

Two independent oracles, both deliberately avoiding the code paths the
package itself uses:

* Pairwise correlation over the bundled fixture, evaluated term by term
  from the definitional formula in 50-digit arithmetic (mpmath), over
  pairwise-complete years.
* Upper-tail probabilities of the t and F distributions by direct
  numerical integration of the densities in 50-digit arithmetic.

Outputs land in tests/data/ and are committed; the tests never recompute
them.
"""

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50

ROOT = Path(__file__).resolve().parents[1]
FIXTURE = ROOT / "src" / "paneldep" / "data" / "table_wdi.csv"
OUTDIR = ROOT / "tests" / "data"


def load_fixture():
    lines = FIXTURE.read_text().strip().splitlines()
    years = [int(y) for y in lines[0].split(",")[2:]]
    series = {}
    for line in lines[1:]:
        parts = line.split(",")
        vals = {}
        for year, cell in zip(years, parts[2:]):
            if cell != "-":
                vals[year] = mp.mpf(cell)
        series[parts[0]] = vals
    return series


def definitional_r(xs, ys):
    n = len(xs)
    xbar = mp.fsum(xs) / n
    ybar = mp.fsum(ys) / n
    num = mp.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    dx = mp.fsum((x - xbar) ** 2 for x in xs)
    dy = mp.fsum((y - ybar) ** 2 for y in ys)
    return num / mp.sqrt(dx * dy)


def pearson_matrix():
    series = load_fixture()
    codes = list(series)
    r = [[None] * len(codes) for _ in codes]
    n = [[0] * len(codes) for _ in codes]
    for i, a in enumerate(codes):
        for j, b in enumerate(codes):
            common = sorted(set(series[a]) & set(series[b]))
            n[i][j] = len(common)
            if i == j:
                r[i][j] = 1.0
                continue
            xs = [series[a][y] for y in common]
            ys = [series[b][y] for y in common]
            r[i][j] = float(definitional_r(xs, ys))
    return {"codes": codes, "n": n, "r": r}


def t_tail(t, dof):
    t = mp.mpf(t)
    dof = mp.mpf(dof)
    c = mp.gamma((dof + 1) / 2) / (mp.sqrt(dof * mp.pi) * mp.gamma(dof / 2))
    pdf = lambda u: c * (1 + u * u / dof) ** (-(dof + 1) / 2)
    return mp.quad(pdf, [t, mp.inf])


def f_tail(f, d1, d2):
    f = mp.mpf(f)
    d1 = mp.mpf(d1)
    d2 = mp.mpf(d2)
    B = mp.beta(d1 / 2, d2 / 2)

    def pdf(u):
        num = (d1 * u) ** d1 * d2 ** d2
        den = (d1 * u + d2) ** (d1 + d2)
        return mp.sqrt(num / den) / (u * B)

    return mp.quad(pdf, [f, mp.inf])


def tail_grid():
    t_stats = [0.0, 0.5, 1.0, 2.0, 2.5, 3.5, 5.0]
    t_dofs = [1, 2, 5, 10]
    t_points = [
        {"t": t, "dof": d, "sf": float(t_tail(t, d))}
        for t in t_stats
        for d in t_dofs
    ]
    f_combos = [(1, 1), (1, 40), (2, 10), (5, 5)]
    f_stats = [0.05, 0.5, 1.0, 2.5, 3.89]
    f_points = [
        {"f": f, "d1": d1, "d2": d2, "sf": float(f_tail(f, d1, d2))}
        for f in f_stats
        for d1, d2 in f_combos
    ]
    f_points.append({"f": 20.0, "d1": 1, "d2": 40, "sf": float(f_tail(20.0, 1, 40))})
    f_points.append({"f": 7.7, "d1": 3, "d2": 30, "sf": float(f_tail(7.7, 3, 30))})
    assert len(t_points) + len(f_points) == 50
    return {"t": t_points, "f": f_points}


def main():
    OUTDIR.mkdir(parents=True, exist_ok=True)
    mat = pearson_matrix()
    (OUTDIR / "pearson_fixture_golden.json").write_text(
        json.dumps(mat, indent=1) + "\n"
    )
    i, j = mat["codes"].index("E2"), mat["codes"].index("S1")
    print(f"r(E2, S1) n={mat['n'][i][j]}: {mat['r'][i][j]!r}")

    grid = tail_grid()
    (OUTDIR / "tail_probability_golden.json").write_text(
        json.dumps(grid, indent=1) + "\n"
    )
    for p in grid["t"]:
        if p["t"] == 2.5 and p["dof"] == 10:
            print("t_sf(2.5, 10) =", repr(p["sf"]))
    for p in grid["f"]:
        if p["f"] == 3.89 and p["d1"] == 1 and p["d2"] == 40:
            print("f_sf(3.89, 1, 40) =", repr(p["sf"]))


if __name__ == "__main__":
    main()
