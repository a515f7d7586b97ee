#!/usr/bin/env python3
"""Straight-from-formula oNMI oracle for freezing test expectations.

Computes the lack-of-information oNMI between two covers:
  onmi(A, B) = 1 - 0.5 * (H(A|B)/H(A) + H(B|A)/H(B))
with best-match conditional entropies under the standard per-pair validity
constraint. Covers are given as lists of node sets over a universe of n nodes.
"""
import math
import sys


def h(p):
    return -p * math.log(p) if p > 0 else 0.0


def H_comm(X, n):
    p = len(X) / n
    return h(p) + h(1 - p)


def H_cond_pair(X, Y, n):
    n11 = len(X & Y)
    n10 = len(X - Y)
    n01 = len(Y - X)
    n00 = n - len(X | Y)
    if h(n11 / n) + h(n00 / n) < h(n10 / n) + h(n01 / n):
        return None  # constraint violated
    joint = h(n11 / n) + h(n10 / n) + h(n01 / n) + h(n00 / n)
    hy = h(len(Y) / n) + h((n - len(Y)) / n)
    return joint - hy


def H_cond(X, cover, n):
    best = None
    for Y in cover:
        v = H_cond_pair(X, Y, n)
        if v is not None and (best is None or v < best):
            best = v
    return best if best is not None else H_comm(X, n)


def onmi(A, B, n):
    def side(A, B):
        num = sum(H_cond(X, B, n) for X in A)
        den = sum(H_comm(X, n) for X in A)
        return num / den if den > 0 else 0.0

    return 1 - 0.5 * (side(A, B) + side(B, A))


if __name__ == "__main__":
    A = [{1, 2, 3}, {4, 5, 6}]
    B = [{1, 2, 3, 4}, {5, 6}]
    print("hand case:", repr(onmi(A, B, 6)))
    print("identity:", onmi(A, A, 6))
    sys.exit(0)
