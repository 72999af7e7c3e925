"""Generate a table of imaginary parts of nontrivial zeta zeros.

Stage 1 brackets sign changes of the Riemann-Siegel Z function on a fine
grid (numpy, main sum + C0 correction), stage 2 refines each bracket with
mpmath.siegelz to ~1e-10.  Spot checks against mpmath.zetazero certify the
indexing.  Output: one ascending gamma per line.
"""

import sys
import time

import numpy as np
from mpmath import mp, siegelz, zetazero

TARGET = 10000
OUT = sys.argv[1] if len(sys.argv) > 1 else "data/zeta_zeros_10k.txt"

TWO_PI = 2.0 * np.pi


def theta(t):
    return t / 2.0 * np.log(t / TWO_PI) - t / 2.0 - np.pi / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t ** 3)


def rs_z(t):
    """Riemann-Siegel Z(t), main sum + C0 term, vectorized over t."""
    t = np.asarray(t, dtype=float)
    a = np.sqrt(t / TWO_PI)
    n_terms = np.floor(a).astype(int)
    p = a - n_terms
    th = theta(t)
    nmax = int(n_terms.max())
    z = np.zeros_like(t)
    for n in range(1, nmax + 1):
        mask = n_terms >= n
        z[mask] += np.cos(th[mask] - t[mask] * np.log(n)) / np.sqrt(n)
    z *= 2.0
    c0 = np.cos(TWO_PI * (p * p - p - 1.0 / 16.0)) / np.cos(TWO_PI * p)
    z += (-1) ** (n_terms - 1) * (t / TWO_PI) ** -0.25 * c0
    return z


def bracket_low(t_lo, t_hi, step):
    """mpmath-only bracketing for low t where the RS expansion is weak."""
    mp.dps = 10
    ts = np.arange(t_lo, t_hi + step, step)
    vals = np.array([float(siegelz(x)) for x in ts])
    sign_flip = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    return [(ts[i], ts[i + 1]) for i in sign_flip]


def bracket_high(t_lo, t_hi, step):
    brackets = []
    chunk = 200000
    ts_all = np.arange(t_lo, t_hi + step, step)
    for start in range(0, len(ts_all) - 1, chunk):
        ts = ts_all[start:start + chunk + 1]
        vals = rs_z(ts)
        flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        for i in flips:
            brackets.append((ts[i], ts[i + 1]))
    return brackets


def refine(lo, hi):
    """Bisection + secant polish on siegelz, returns root to ~1e-10."""
    flo = float(siegelz(lo))
    fhi = float(siegelz(hi))
    if flo * fhi > 0:
        # widen until a sign change is found
        for widen in (0.01, 0.05, 0.2):
            flo = float(siegelz(lo - widen))
            fhi = float(siegelz(hi + widen))
            if flo * fhi < 0:
                lo -= widen
                hi += widen
                break
        else:
            raise RuntimeError(f"no sign change near [{lo}, {hi}]")
    for _ in range(8):
        mid = 0.5 * (lo + hi)
        fmid = float(siegelz(mid))
        if flo * fmid <= 0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    # secant finishing steps
    a, fa, b, fb = lo, flo, hi, fhi
    for _ in range(6):
        if fb == fa:
            break
        c = b - fb * (b - a) / (fb - fa)
        if not (lo <= c <= hi):
            c = 0.5 * (a + b)
        fc = float(siegelz(c))
        a, fa, b, fb = b, fb, c, fc
        if abs(b - a) < 1e-11:
            break
    return b


def main():
    t0 = time.time()
    brackets = bracket_low(14.0, 200.0, 0.2)
    brackets += bracket_high(200.0, 10010.0, 0.01)
    print(f"bracketed {len(brackets)} candidates in {time.time()-t0:.1f}s", flush=True)
    if len(brackets) < TARGET:
        raise RuntimeError("not enough brackets")

    mp.dps = 11
    zeros = []
    t0 = time.time()
    for i, (lo, hi) in enumerate(brackets[: TARGET + 50]):
        zeros.append(refine(lo, hi))
        if (i + 1) % 500 == 0:
            print(f"refined {i+1} ({time.time()-t0:.0f}s)", flush=True)
    zeros = sorted(zeros)[:TARGET]

    diffs = np.diff(zeros)
    assert np.all(diffs > 1e-6), "non-ascending or duplicated zeros"
    # certify indexing against mpmath's certified zero finder
    mp.dps = 13
    for idx in (1, 2, 100, 1000, 5000, TARGET):
        ref = float(zetazero(idx).imag)
        got = zeros[idx - 1]
        if abs(ref - got) > 1e-6:
            raise RuntimeError(f"zero #{idx}: got {got}, reference {ref}")
        print(f"zero #{idx}: {got:.9f} vs reference {ref:.9f}", flush=True)

    with open(OUT, "w") as fh:
        fh.write("# imaginary parts of the first %d nontrivial zeta zeros\n" % TARGET)
        fh.write("# one ascending value per line\n")
        for g in zeros:
            fh.write("%.10f\n" % g)
    print(f"wrote {OUT} with {len(zeros)} zeros", flush=True)


if __name__ == "__main__":
    main()
