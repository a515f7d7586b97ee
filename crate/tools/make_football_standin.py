#!/usr/bin/env python3
"""Deterministically generates the synthetic college-football-style graph in
data/: 115 nodes and 613 edges, 11 dense conferences (107 teams) plus 8
independent teams whose games are scattered across conferences. This is NOT
the real Girvan-Newman college football network; it is a stand-in with the
same shape, generated from a fixed seed, for tests that need a small graph
with planted groups and weakly attached nodes.

Run from the repository root: python3 tools/make_football_standin.py
"""
import random

SIZES = [9, 8, 11, 12, 10, 13, 8, 10, 12, 7, 7]  # 11 conferences, 107 teams
N_INDEP = 8
N = sum(SIZES) + N_INDEP
assert N == 115
INTRA, INTER, INDEP_EDGES = 441, 100, 72
TOTAL = INTRA + INTER + INDEP_EDGES
assert TOTAL == 613

rng = random.Random(20261)

conf_of = {}
members = []
node = 0
for c, s in enumerate(SIZES):
    group = list(range(node, node + s))
    members.append(group)
    for v in group:
        conf_of[v] = c
    node += s
independents = list(range(node, N))

edges = set()


def add(u, v):
    if u == v:
        return False
    e = (min(u, v), max(u, v))
    if e in edges:
        return False
    edges.add(e)
    return True


# dense intra-conference play: fill proportionally to pair capacity
capacity = [s * (s - 1) // 2 for s in SIZES]
quota = [round(INTRA * c / sum(capacity)) for c in capacity]
while sum(quota) > INTRA:
    quota[quota.index(max(quota))] -= 1
while sum(quota) < INTRA:
    quota[quota.index(min(quota))] += 1
for c, group in enumerate(members):
    pairs = [(u, v) for i, u in enumerate(group) for v in group[i + 1:]]
    rng.shuffle(pairs)
    for u, v in pairs[: quota[c]]:
        add(u, v)

# cross-conference games
placed = 0
while placed < INTER:
    u, v = rng.sample(range(sum(SIZES)), 2)
    if conf_of[u] != conf_of[v] and add(u, v):
        placed += 1

# independents: 9 games each, at most 2 against any one conference
for v in independents:
    per_conf = {}
    placed = 0
    while placed < INDEP_EDGES // N_INDEP:
        u = rng.randrange(sum(SIZES))
        c = conf_of[u]
        if per_conf.get(c, 0) >= 2:
            continue
        if add(u, v):
            per_conf[c] = per_conf.get(c, 0) + 1
            placed += 1

assert len(edges) == TOTAL

header = (
    "# Synthetic college-football-style graph: 115 teams, 613 games.\n"
    "# 11 dense conferences plus 8 independents with scattered schedules.\n"
    "# Generated by tools/make_football_standin.py from a fixed seed; this\n"
    "# is NOT the real Girvan-Newman network, only a same-shaped stand-in.\n"
)
with open("data/football.edges", "w") as f:
    f.write(header)
    for u, v in sorted(edges):
        f.write(f"team{u:03d} team{v:03d}\n")

with open("data/football.cover", "w") as f:
    f.write("# Conference membership for data/football.edges (synthetic).\n")
    f.write("# Communities 0-10 are conferences; 11 groups the independents.\n")
    for v in range(N):
        c = conf_of.get(v, 11)
        f.write(f"team{v:03d}\t{c}\n")

with open("data/football.outliers", "w") as f:
    f.write("# The 8 independent teams of data/football.edges (synthetic).\n")
    for v in independents:
        f.write(f"team{v:03d}\n")

print(f"wrote data/football.edges ({TOTAL} edges), cover, outliers")
