"""Audit a census run with two certificates that do not rely on the
vertex enumeration used to produce it.

First, the boundary rotation permutes the classes; integrality is a
rotation invariant because rotating the weight slot only translates the
polytope by an integer vector.  The audit computes the orbit structure,
checks that the class set is closed, that no orbit mixes verdicts, and
reports the divisibility constraint this imposes on the counts.

Second, for every class the audit re-derives all half-integral vertices
from the facet description alone: exact simplex bounds give a safe box,
the second dilation's lattice points are swept inside it, and a point
counts as a vertex when its tight rows have full rank.  The result is
compared against the recorded fractional vertex list per class.

    python3 scripts/run_census.py --shapes 3,7 --deep --out g37.json
    python3 scripts/deep_census_audit.py g37.json
"""

import argparse
import json
import sys
import time
from fractions import Fraction

from okbodies.census import CensusReport
from okbodies.charts import NetworkChart
from okbodies.mirror import gamma_polytope, gamma_system, marsh_scott_expansion, standard_r_vec
from okbodies.partitions import cyclic_shift, label_sort_key


def rotate_key(key, shape):
    # the empty label is implicit in every chart, so the rotation moves a
    # frozen label onto it and the empty label onto another frozen one
    img = {cyclic_shift(p, shape) for p in key} | {cyclic_shift((), shape)}
    img.discard(())
    return tuple(sorted(img, key=label_sort_key))


def simplex_max(rows, c):
    """Exact max of c.x over {x : a.x + b >= 0 for (a, b) in rows}.

    The origin is feasible for every system audited here (all b >= 0),
    which the function asserts.  Free coordinates are split as x = u - w;
    Bland's rule guarantees termination.  Returns the optimum, or None if
    unbounded.
    """
    m = len(rows)
    d = len(rows[0][0])
    assert all(b >= 0 for _, b in rows), "origin must be feasible"
    # tableau over nonnegative variables (u_1..u_d, w_1..w_d, s_1..s_m):
    # s_i = b_i + sum_j a_ij (u_j - w_j), maximize sum c_j (u_j - w_j)
    nv = 2 * d + m
    T = []
    for i, (a, b) in enumerate(rows):
        row = [Fraction(0)] * (nv + 1)
        for j in range(d):
            row[j] = -Fraction(a[j])
            row[d + j] = Fraction(a[j])
        row[2 * d + i] = Fraction(1)
        row[nv] = Fraction(b)
        T.append(row)
    z = [Fraction(0)] * (nv + 1)
    for j in range(d):
        z[j] = -Fraction(c[j])
        z[d + j] = Fraction(c[j])
    basis = list(range(2 * d, nv))
    while True:
        enter = next((j for j in range(nv) if z[j] < 0), None)
        if enter is None:
            return z[nv]
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][nv] / T[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return None
        _, piv = best
        pr = T[piv]
        inv = Fraction(1) / pr[enter]
        T[piv] = [x * inv for x in pr]
        for i in range(m):
            if i != piv and T[i][enter]:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[piv])]
        if z[enter]:
            f = z[enter]
            z = [x - f * y for x, y in zip(z, T[piv])]
        basis[piv] = enter


def coordinate_box(rows, d):
    lo, hi = [], []
    for j in range(d):
        c = [0] * d
        c[j] = 1
        top = simplex_max(rows, c)
        c[j] = -1
        bot = simplex_max(rows, c)
        if top is None or bot is None:
            raise ValueError("polytope is unbounded")
        hi.append(top)
        lo.append(-bot)
    return lo, hi


def lattice_sweep(rows, lo, hi):
    """Integer points of {x : a.x + b >= 0} inside the box, by prefix
    pruning against the achievable suffix maximum of each row."""
    d = len(lo)
    lo_i = [int(-(-x.numerator // x.denominator)) for x in lo]
    hi_i = [int(x.numerator // x.denominator) for x in hi]
    suffix = []
    for a, _ in rows:
        s = [Fraction(0)] * (d + 1)
        for j in range(d - 1, -1, -1):
            s[j] = s[j + 1] + max(a[j] * lo_i[j], a[j] * hi_i[j])
        suffix.append(s)
    out = []
    point = [0] * d

    def rec(j, partial):
        if j == d:
            if all(p >= 0 for p in partial):
                out.append(tuple(point))
            return
        for v in range(lo_i[j], hi_i[j] + 1):
            point[j] = v
            nxt = [p + a[j] * v for p, (a, _) in zip(partial, rows)]
            if all(p + s[j + 1] >= 0 for p, s in zip(nxt, suffix)):
                rec(j + 1, nxt)

    rec(0, [Fraction(b) for _, b in rows])
    return out


def rank(mat):
    rows = [list(r) for r in mat]
    r = 0
    for col in range(len(rows[0]) if rows else 0):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col] / rows[r][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def half_integral_vertices(rows, d):
    """All vertices with denominator two, from the facet description only."""
    doubled = [(a, 2 * Fraction(b)) for a, b in rows]
    lo, hi = coordinate_box(doubled, d)
    found = []
    for z in lattice_sweep(doubled, lo, hi):
        x = tuple(Fraction(v, 2) for v in z)
        if all(v.denominator == 1 for v in x):
            continue
        tight = [a for a, b in rows if sum(ai * xi for ai, xi in zip(a, x)) + b == 0]
        if len(tight) >= d and rank(tight) == d:
            found.append(x)
    return sorted(found)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("census_json")
    ap.add_argument("--skip-sweep", action="store_true", help="orbit analysis only")
    args = ap.parse_args(argv)

    with open(args.census_json) as fh:
        report = CensusReport.from_json(json.load(fh))
    shape = report.shape
    keys = {c.key: c for c in report.classes}
    print(
        f"({shape.k},{shape.n}): {report.class_count} classes, "
        f"{report.integral_count} integral, {report.nonintegral_count} fractional"
    )

    # ---- rotation orbits
    not_closed = [k for k in keys if rotate_key(k, shape) not in keys]
    print(f"closure under rotation: {'ok' if not not_closed else f'{len(not_closed)} MISSING'}")
    seen = set()
    hist = {}
    mixed = fixed = 0
    frac_orbits = []
    for k in keys:
        if k in seen:
            continue
        orb = [k]
        cur = rotate_key(k, shape)
        while cur != k:
            orb.append(cur)
            cur = rotate_key(cur, shape)
        seen.update(orb)
        hist[len(orb)] = hist.get(len(orb), 0) + 1
        flags = {keys[o].integral for o in orb}
        mixed += len(flags) > 1
        fixed += len(orb) == 1
        if flags == {False}:
            frac_orbits.append(len(orb))
    print(f"orbit sizes: {dict(sorted(hist.items()))}, fixed classes: {fixed}, mixed orbits: {mixed}")
    print(f"fractional orbits: {sorted(frac_orbits)} (sum {sum(frac_orbits)})")
    if fixed == 0 and len(hist) == 1:
        size = next(iter(hist))
        print(
            f"free rotation action: every rotation-invariant count is a multiple of {size};"
            f" {report.nonintegral_count} {'is' if report.nonintegral_count % size == 0 else 'IS NOT'} one"
        )
    ok = not not_closed and mixed == 0

    # ---- half-integral vertex sweep from the facet description
    if not args.skip_sweep:
        t0 = time.time()
        bad = 0
        for t, c in enumerate(report.classes):
            chart = NetworkChart.of(c.graph)
            H = gamma_polytope(gamma_system(marsh_scott_expansion(chart), standard_r_vec(shape, 1)))
            swept = half_integral_vertices(H.ineqs, H.dim)
            if swept != sorted(c.nonintegral_vertices):
                bad += 1
                print(f"  MISMATCH at {c.key_str}: sweep {swept} vs recorded {sorted(c.nonintegral_vertices)}")
            if t % 40 == 0:
                print(f"  ... {t} classes swept ({time.time() - t0:.0f}s)", flush=True)
        print(
            f"half-integral sweep: {bad} mismatches over {report.class_count} classes"
            f" ({time.time() - t0:.0f}s)"
        )
        ok = ok and bad == 0

    print("audit:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
