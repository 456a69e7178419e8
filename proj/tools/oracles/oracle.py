#!/usr/bin/env python3
"""Independent reference values for the frozen test fixtures.

Everything here works straight from permutations or from first principles
with fractions.Fraction, sharing no code with the C++ headers.
Run: python3 tools/oracles/oracle.py
"""

import itertools
import math
from collections import Counter, deque
from fractions import Fraction


def cycle_type(perm):
    n = len(perm)
    seen = [False] * n
    out = []
    for i in range(n):
        if not seen[i]:
            k, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                k += 1
            out.append(k)
    return tuple(sorted(out, reverse=True))


def compose_transposition(perm, u, v):
    # (u v) applied after perm, on successor arrays: swap successors
    p = list(perm)
    p[u], p[v] = p[v], p[u]
    return tuple(p)


def partitions(n, top=None):
    if top is None:
        top = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, top), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def class_counts(n):
    return Counter(cycle_type(p) for p in itertools.permutations(range(n)))


def kernel_from_permutations(n):
    """One-step law on cycle types, by applying all n^2 ordered (u, v) to one
    representative of each class."""
    reps = {}
    for p in itertools.permutations(range(n)):
        reps.setdefault(cycle_type(p), p)
    out = {}
    for lam, p in reps.items():
        row = Counter()
        for u in range(n):
            for v in range(n):
                row[cycle_type(compose_transposition(p, u, v))] += 1
        out[lam] = {k: Fraction(w, n * n) for k, w in row.items()}
    return out


def kernel_by_moves(lam):
    """Split/merge enumeration over part positions (no permutations)."""
    n = sum(lam)
    row = Counter()
    row[lam] += n
    parts = list(lam)
    for i, a in enumerate(parts):
        for r in range(1, a):
            nxt = parts[:i] + parts[i + 1:] + [r, a - r]
            row[tuple(sorted(nxt, reverse=True))] += a
    for i in range(len(parts)):
        for j in range(len(parts)):
            if i != j:
                nxt = [x for k, x in enumerate(parts) if k not in (i, j)] + [parts[i] + parts[j]]
                row[tuple(sorted(nxt, reverse=True))] += parts[i] * parts[j]
    return {k: Fraction(w, n * n) for k, w in row.items()}


def neighbors(lam):
    out = set()
    parts = list(lam)
    for i, a in enumerate(parts):
        for r in range(1, a):
            out.add(tuple(sorted(parts[:i] + parts[i + 1:] + [r, a - r], reverse=True)))
        for j in range(i + 1, len(parts)):
            rest = [x for k, x in enumerate(parts) if k not in (i, j)]
            out.add(tuple(sorted(rest + [parts[i] + parts[j]], reverse=True)))
    return out


def bfs(src):
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for v in neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def diameter(n):
    return max(max(bfs(p).values()) for p in partitions(n))


def tv_curve_partitions(n, t_max):
    states = list(partitions(n))
    counts = class_counts(n) if n <= 8 else None
    fact = math.factorial(n)

    def pi(lam):
        if counts is not None:
            return Fraction(counts[lam], fact)
        denom = 1
        for v, k in Counter(lam).items():
            denom *= v ** k * math.factorial(k)
        return Fraction(1, denom)

    pis = {s: pi(s) for s in states}
    rows = {s: kernel_by_moves(s) for s in states}
    dist = {s: Fraction(0) for s in states}
    dist[(1,) * n] = Fraction(1)
    curve = []
    for t in range(t_max + 1):
        curve.append(sum(abs(dist[s] - pis[s]) for s in states) / 2)
        if t == t_max:
            break
        nxt = {s: Fraction(0) for s in states}
        for s, m in dist.items():
            if m:
                for q, w in rows[s].items():
                    nxt[q] += m * w
        dist = nxt
    return curve


def tv_curve_sn(n, t_max):
    perms = list(itertools.permutations(range(n)))
    dist = Counter({tuple(range(n)): Fraction(1)})
    u = Fraction(1, len(perms))
    curve = []
    for t in range(t_max + 1):
        curve.append(sum(abs(dist.get(p, 0) - u) for p in perms) / 2)
        if t == t_max:
            break
        nxt = Counter()
        for p, m in dist.items():
            for a in range(n):
                for b in range(n):
                    nxt[compose_transposition(p, a, b)] += m / (n * n)
        dist = nxt
    return curve


def mixing_time(n, eps=Fraction(1, 4)):
    # lengthen the curve until it crosses eps
    t_max = 4 * n
    while True:
        curve = tv_curve_partitions(n, t_max)
        for t, d in enumerate(curve):
            if d <= eps:
                return t
        t_max *= 2


def markovian_overlap(n):
    perms = list(itertools.permutations(range(n)))
    best = Fraction(0)
    rows = {}
    for p in perms:
        row = Counter()
        for a in range(n):
            for b in range(n):
                row[compose_transposition(p, a, b)] += 1
        rows[p] = row
    for p, q in itertools.combinations(perms, 2):
        rp, rq = rows[p], rows[q]
        ov = sum(min(w, rq.get(k, 0)) for k, w in rp.items())
        best = max(best, Fraction(ov, n * n))
    return best


def z_of(s):
    lo, hi = 1e-9, 1.0
    f = lambda z: 1 - z - math.exp(-z * s)
    for _ in range(200):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo


def schedule(n, j, eps, delta):
    x = Fraction(eps) * Fraction(delta) * n
    K = 0
    while Fraction(2) ** K < x:
        K += 1
    a = {}
    for r in range(j, K):
        a[r] = math.ceil(2 / delta * 2.0 ** (-r) * n * (math.log2(n) - r))
    tau = {j: 0}
    for r in range(j + 1, K + 1):
        tau[r] = tau[r - 1] + a[r - 1]
    return K, a, tau


def shrink_expectation(lam, x):
    n = sum(lam)
    tot = Fraction(0)
    for a in lam:
        for r in range(1, a):
            tot += Fraction(a, n * n) * ((r if r < x else 0) + ((a - r) if a - r < x else 0))
    return tot


def main():
    c3 = class_counts(3)
    print("perm_count n=3:", dict(c3))
    print("stationary n=3:", {k: str(Fraction(v, 6)) for k, v in c3.items()})
    print("rho((3),(1,1,1)) =", bfs((3,))[(1, 1, 1)])
    print("diameters n=2..14:", [diameter(n) for n in range(2, 15)])

    for lam, ref in [((2, 1), None), ((4, 1), None)]:
        a = kernel_from_permutations(sum(lam))[lam]
        b = kernel_by_moves(lam)
        assert a == b
        print("kernel", lam, {k: str(v) for k, v in sorted(a.items(), reverse=True)})

    print("identity n=5 one step:", {k: str(v) for k, v in kernel_from_permutations(5)[(1,) * 5].items()})

    for n in (3, 4, 5):
        a = tv_curve_partitions(n, 30)
        b = tv_curve_sn(n, 30)
        assert a == b, n
    print("projection equality exact for n=3,4,5 t<=30")
    print("d(3,2) =", tv_curve_partitions(3, 2)[2])
    print("d(5,10) =", float(tv_curve_partitions(5, 10)[10]))
    print("d(6,20) =", float(tv_curve_partitions(6, 20)[20]))
    print("d(2,1) =", tv_curve_partitions(2, 1)[1])
    print("tau_mix(1/4) n=2..10:", {n: mixing_time(n) for n in range(2, 11)})

    for n in (3, 4, 5):
        print("markovian overlap n=%d:" % n, markovian_overlap(n), "bound", Fraction(6, n * n))

    print("z(2) =", z_of(2.0), "z(4) =", z_of(4.0), "z(1.5) =", z_of(1.5), "z(3) =", z_of(3.0))

    n = 10 ** 4
    j = math.floor(math.log2(round(n ** (1 / 3), 9))) - 1
    K, a, tau = schedule(n, j, Fraction(1, 64), Fraction(1, 2))
    print("schedule n=1e4: j=%d K=%d tau_K=%d a=%s" % (j, K, tau[K], a))
    K, a, tau = schedule(2 ** 20, 3, Fraction(1, 64), Fraction(1, 2))
    print("schedule n=2^20 eps*delta*n=2^13: K=%d" % K)

    print("shrink (5), x=2:", shrink_expectation((5,), 2))


if __name__ == "__main__":
    main()
