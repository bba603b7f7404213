"""Brute-force reference values for the fixed examples.

Shares no code with the library: plain Python, networkx for shortest paths and
maximal cliques, scipy for the covering LP. Run with --write to refresh
frozen.json, or with --check to compare against it.
"""

import argparse
import itertools
import json
import math
import pathlib
import sys

import networkx as nx
import numpy as np
from scipy.optimize import linprog

HERE = pathlib.Path(__file__).resolve().parent


def line(points):
    pts = list(points)
    return pts, np.array([[abs(a - b) for b in pts] for a in pts], dtype=float)


def cycle(n):
    g = nx.cycle_graph(n)
    d = dict(nx.all_pairs_shortest_path_length(g))
    return list(range(n)), np.array([[d[i][j] for j in range(n)] for i in range(n)], dtype=float)


def diam(d, s):
    s = list(s)
    return max((d[a][b] for a in s for b in s), default=0.0)


def components(d, s, r, strict=False):
    s = sorted(s)
    g = nx.Graph()
    g.add_nodes_from(s)
    for a, b in itertools.combinations(s, 2):
        if (d[a][b] < r) if strict else (d[a][b] <= r):
            g.add_edge(a, b)
    return sorted(sorted(c) for c in nx.connected_components(g))


def expansion(d, s, r, domain):
    return {x for x in domain if x in s or any(d[x][u] < r for u in s)}


def dim_at_scale(d, family, r, domain):
    best = 0
    for x in domain:
        best = max(best, sum(1 for u in family if x in expansion(d, u, r, domain)))
    return best - 1


def maximal_bounded(d, domain, r):
    g = nx.Graph()
    g.add_nodes_from(domain)
    for a, b in itertools.combinations(domain, 2):
        if d[a][b] <= r:
            g.add_edge(a, b)
    return sorted(sorted(c) for c in nx.find_cliques(g))


def hausdorff(d, a, b):
    return max(max(min(d[x][y] for y in b) for x in a), max(min(d[x][y] for x in a) for y in b))


def preimage(assign, b):
    return sorted(x for x, y in enumerate(assign) if y in b)


def profile(dx, dy, assign, r, big_r):
    worst_c, worst_d = 0, 0.0
    for b in maximal_bounded(dy, list(range(len(dy))), r):
        comps = components(dx, preimage(assign, set(b)), big_r)
        worst_c = max(worst_c, len(comps))
        worst_d = max(worst_d, max(diam(dx, c) for c in comps))
    return worst_c, worst_d


def min_max_split(d, pts, parts):
    best = math.inf
    for labels in itertools.product(range(parts), repeat=len(pts)):
        groups = [[p for p, l in zip(pts, labels) if l == k] for k in range(parts)]
        best = min(best, max(diam(d, g) for g in groups if g))
    return best


def abs_map(lo, hi):
    xs, dx = line(range(lo, hi + 1))
    ys, dy = line(range(0, max(abs(lo), abs(hi)) + 1))
    return xs, dx, ys, dy, [ys.index(abs(x)) for x in xs]


def c6_quotient():
    xs, dx = cycle(6)
    orbits = [[0, 3], [1, 4], [2, 5]]
    dy = np.array([[hausdorff(dx, a, b) for b in orbits] for a in orbits])
    assign = [next(k for k, o in enumerate(orbits) if x in o) for x in xs]
    return dx, dy, assign


def asdim_exhaustive(d, r, cap):
    n = len(d)
    ball = [{y for y in range(n) if y == x or d[x][y] < r} for x in range(n)]

    def feasible(k):
        blocks, covered, mult = [], [], [0] * n

        def rec(i):
            if i == n:
                return True
            for b in range(len(blocks) + 1):
                if b < len(blocks) and any(d[i][y] > cap for y in blocks[b]):
                    continue
                if b == len(blocks):
                    blocks.append([])
                    covered.append(set())
                fresh = ball[i] - covered[b]
                for y in fresh:
                    mult[y] += 1
                blocks[b].append(i)
                covered[b] |= fresh
                if all(mult[y] <= k + 1 for y in fresh) and rec(i + 1):
                    return True
                blocks[b].pop()
                covered[b] -= fresh
                for y in fresh:
                    mult[y] -= 1
                if not blocks[b]:
                    blocks.pop()
                    covered.pop()
            return False

        return rec(0)

    k = 0
    while not feasible(k):
        k += 1
    return k


def apc_exhaustive(d, scales, cap):
    n = len(d)
    for labels in itertools.product(range(len(scales)), repeat=n):
        ok = True
        for k, r in enumerate(scales):
            cls = [p for p in range(n) if labels[p] == k]
            if any(diam(d, c) > cap for c in components(d, cls, r, strict=True)):
                ok = False
                break
        if ok:
            return True
    return False


def best_mass(d, weights, r, s):
    n = len(d)
    best = 0.0
    for mask in range(1 << n):
        pts = [p for p in range(n) if mask >> p & 1]
        if all(diam(d, c) <= s for c in components(d, pts, r, strict=True)):
            best = max(best, sum(weights[p] for p in pts))
    return best


def game_value(d, pts, r, s):
    feas = []
    for k in range(1, len(pts) + 1):
        for sub in itertools.combinations(pts, k):
            if all(diam(d, c) <= s for c in components(d, sub, r, strict=True)):
                feas.append(set(sub))
    a = np.array([[-1.0 if p in f else 0.0 for f in feas] for p in pts])
    res = linprog(np.ones(len(feas)), A_ub=a, b_ub=-np.ones(len(pts)), bounds=(0, None), method="highs")
    return 1.0 / res.fun


def derive():
    out = {}
    g = nx.path_graph(10)
    sp = dict(nx.all_pairs_shortest_path_length(g))
    out["path10_isometric"] = all(sp[i][j] == abs(i - j) for i in range(10) for j in range(10))

    pts, d = line(range(11))
    a = set(range(6))
    out["inner_neighborhood_0_5_r1.5"] = sorted(x for x in a if all(y in a for y in pts if d[x][y] < 1.5))
    out["hausdorff_0123_12"] = hausdorff(d, [0, 1, 2, 3], [1, 2])
    reals = [0, 1, 2, 10, 11, 12]
    _, dr = line(range(13))
    out["r_components_0_1_2_10_11_12"] = components(dr, reals, 1)
    _, d6 = cycle(6)
    out["c6_diameter"] = diam(d6, range(6))

    _, d20 = line(range(21))
    fam = [list(range(0, 11)), list(range(5, 16)), list(range(10, 21))]
    out["dim_three_intervals_r2"] = dim_at_scale(d20, fam, 2, list(range(21)))
    out["c6_antipodal_mesh"] = max(diam(d6, s) for s in [[0, 3], [1, 4], [2, 5]])
    _, d10 = line(range(10))
    halves = [set(range(5)), set(range(5, 10))]
    lebesgue = math.inf
    for x in range(10):
        best = 0.0
        for u in halves:
            if x in u:
                outside = [d10[x][y] for y in range(10) if y not in u]
                best = max(best, min(outside) if outside else math.inf)
        lebesgue = min(lebesgue, best)
    out["lebesgue_halves"] = lebesgue

    xs, dx, ys, dy, assign = abs_map(-5, 5)
    realized = sorted({dx[i][j] for i in range(len(xs)) for j in range(len(xs))})
    out["abs_upper_control"] = [[r, max(dy[assign[i]][assign[j]] for i in range(len(xs)) for j in range(len(xs)) if dx[i][j] <= r)] for r in realized]
    pre = [[xs[p] for p in preimage(assign, {ys.index(v) for v in s})] for s in ([0, 1], [4, 5])]
    out["abs_pullback_01_45"] = pre
    out["abs_profile_r2_R3"] = list(profile(dx, dy, assign, 2, 3))
    out["abs_profile_r2_R2"] = list(profile(dx, dy, assign, 2, 2))
    control = []
    for r in sorted({dy[i][j] for i in range(len(ys)) for j in range(len(ys))}):
        worst = 0.0
        for b in maximal_bounded(dy, list(range(len(ys))), r):
            worst = max(worst, min_max_split(dx, preimage(assign, set(b)), 2))
        control.append([r, worst])
    out["abs_n2_control"] = control
    classes = []
    for y in range(len(ys)):
        classes += components(np.maximum(dx, 1.0 - np.eye(len(xs))), preimage(assign, {y}), 1)
    out["abs_factor_classes_R1"] = len(classes)

    dcx, dcy, cassign = c6_quotient()
    out["c6_quotient_distances"] = dcy.tolist()
    out["c6_quotient_profile_r1_R2"] = list(profile(dcx, dcy, cassign, 1, 2))
    out["c6_symmetrized_d01"] = d6[0][1] + d6[3][4]
    _, d7 = line(range(-3, 4))
    orbits = [[3], [2, 4], [1, 5], [0, 6]]
    out["reflection_quotient_distances"] = [[hausdorff(d7, a, b) for b in orbits] for a in orbits]

    _, d16 = line(range(16))
    out["asdim_0_15_r3_cap5"] = asdim_exhaustive(d16, 3, 5)
    _, d12 = line(range(12))
    out["apc_path12_scales_100_200_cap1_feasible"] = apc_exhaustive(d12, [100, 200], 1)
    out["apc_path10_scales_2_3_cap3_feasible"] = apc_exhaustive(d10, [2, 3], 3)

    out["best_mass_uniform10_r2_s3"] = best_mass(d10, [0.1] * 10, 2, 3)
    _, d5 = line(range(-2, 3))
    lam = [0.0] * 3
    for x in range(-2, 3):
        lam[abs(x)] += 0.2
    out["abs_pushforward_uniform_m2_2"] = lam

    _, d6line = line(range(6))
    out["game_line6_r2_s1"] = game_value(d6line, list(range(6)), 2, 1)
    out["game_line6_r1_s0"] = game_value(d6line, list(range(6)), 1, 0)
    out["game_c6_r2_s1"] = game_value(d6, list(range(6)), 2, 1)
    tri = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=float)
    out["game_triangle_r1_s0"] = game_value(tri, [0, 1, 2], 1, 0)
    out["game_triangle_r2_s1"] = game_value(tri, [0, 1, 2], 2, 1)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--write", action="store_true")
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    values = json.loads(json.dumps(derive()))
    path = HERE / "frozen.json"
    if args.write:
        path.write_text(json.dumps(values, indent=1) + "\n")
    if args.check:
        frozen = json.loads(path.read_text())
        bad = [k for k in values if json.dumps(values[k]) != json.dumps(frozen.get(k))]
        for k in bad:
            print(f"{k}: frozen {frozen.get(k)} recomputed {values[k]}")
        sys.exit(1 if bad else 0)
    if not args.write:
        print(json.dumps(values, indent=1))


if __name__ == "__main__":
    main()
