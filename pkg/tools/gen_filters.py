#!/usr/bin/env python3
"""Generate the literal wavelet filter tables embedded in warpad.wavelet._coeffs.

Run once (``python tools/gen_filters.py``) to regenerate the table module from
first principles:

  * Daubechies (dbN): minimum-phase spectral factorization of the maximally
    flat half-band polynomial, computed with 60-digit mpmath arithmetic.
  * Coiflets (coifN): Gauss-Newton refinement of published seed tables against
    the defining equations (orthonormality, lowpass normalization, wavelet and
    scaling-function vanishing moments) down to machine precision.
  * Spline biorthogonal (biorN.M): exact rational CDF construction via sympy
    (primal binomial spline filter, dual from the maximally flat complement),
    scaled by sqrt(2) at the end.

Quadruple conventions (shared by the transform core):

    dec_lo = analysis lowpass   (applied by convolution, downsample odd phase)
    dec_hi = analysis highpass
    rec_lo = synthesis lowpass
    rec_hi = synthesis highpass

    dec_hi[k] = -(-1)^k rec_lo[k]
    rec_hi[k] =  (-1)^k dec_lo[k]
    orthogonal families additionally satisfy dec_lo = rec_lo reversed.

Every generated quadruple is checked here for the half-band perfect
reconstruction identity and (where applicable) orthonormality and vanishing
moments before being written out.
"""

import math
from fractions import Fraction

import mpmath
import numpy as np

mpmath.mp.dps = 60

FAMILIES = [
    "haar",
    "db2",
    "db3",
    "db4",
    "bior1.3",
    "bior1.5",
    "bior2.2",
    "bior2.4",
    "bior3.1",
    "coif1",
    "coif2",
    "coif3",
]

# Published coiflet lowpass seeds (14 significant digits); refined below.
COIF_SEEDS = {
    1: [
        -0.01565572813579199, -0.07273261951252645, 0.38486484686485778,
        0.85257202021160039, 0.33789766245748182, -0.07273261951252645,
    ],
    2: [
        -0.00072054944552035, -0.00182320887091103, 0.00561143481936883,
        0.02368017194684777, -0.05943441864643109, -0.07648859907828076,
        0.41700518442323908, 0.81272363544941351, 0.38611006682276289,
        -0.06737255472372559, -0.04146493678687178, 0.01638733646320364,
    ],
    3: [
        -0.00003459977319727, -0.00007098330250638, 0.00046621695982040,
        0.00111751877083063, -0.00257451768813680, -0.00900797613673062,
        0.01588054486366945, 0.03455502757329774, -0.08230192710629983,
        -0.07179982161915484, 0.42848347637737000, 0.79377722262608719,
        0.40517690240911824, -0.06112339000297255, -0.06577191128146936,
        0.02345269614207717, 0.00778259642567275, -0.00379351286438080,
    ],
}


def daubechies_lowpass(n):
    """Minimum-phase Daubechies scaling filter with n vanishing moments."""
    # Roots of P(y) = sum_k C(n-1+k, k) y^k, the maximally flat complement.
    coeffs = [mpmath.binomial(n - 1 + k, k) for k in range(n)]
    poly = list(reversed(coeffs))
    roots_y = mpmath.polyroots(poly, maxsteps=200, extraprec=120)

    # Map each y-root into the z-plane via y = (2 - z - 1/z)/4 and keep the
    # root inside the unit circle (minimum phase).
    z_roots = []
    for y in roots_y:
        # z^2 - (2 - 4y) z + 1 = 0
        b = 2 - 4 * y
        disc = mpmath.sqrt(b * b - 4)
        for z in ((b + disc) / 2, (b - disc) / 2):
            if abs(z) < 1:
                z_roots.append(z)
                break

    # h(z) ~ ((1+z)/2)^n * prod (z - z_i), normalized so sum h = sqrt(2).
    poly = [mpmath.mpf(1)]
    for _ in range(n):
        poly = _polymul(poly, [mpmath.mpf(1), mpmath.mpf(1)])
    for z_i in z_roots:
        poly = _polymul(poly, [mpmath.mpf(1), -z_i])
    poly = [p.real for p in poly]
    s = sum(poly)
    scale = mpmath.sqrt(2) / s
    h = [p * scale for p in poly]
    # Orient with the dominant taps leading (minimum-phase convention).
    if abs(h[0]) < abs(h[-1]):
        h = h[::-1]
    return [float(x) for x in h]


def _polymul(a, b):
    out = [mpmath.mpf(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def coiflet_lowpass(n):
    """Coiflet scaling filter (6n taps), Gauss-Newton polished seed."""
    c = np.asarray(COIF_SEEDS[n], dtype=np.float64)
    taps = 6 * n
    center = 4 * n - 1
    k = np.arange(taps, dtype=np.float64)
    sgn = (-1.0) ** k

    def residual(c):
        res = [c.sum() - math.sqrt(2)]
        for m in range(3 * n):
            if 2 * m >= taps:
                break
            r = float(np.dot(c[: taps - 2 * m], c[2 * m :]))
            res.append(r - (1.0 if m == 0 else 0.0))
        for p in range(2 * n):
            res.append(float(np.dot(sgn * (k - center) ** p, c)))
        for p in range(1, 2 * n):
            res.append(float(np.dot((k - center) ** p, c)))
        return np.asarray(res)

    def jacobian(c):
        rows = [np.ones(taps)]
        for m in range(3 * n):
            if 2 * m >= taps:
                break
            row = np.zeros(taps)
            row[: taps - 2 * m] += c[2 * m :]
            row[2 * m :] += c[: taps - 2 * m]
            rows.append(row)
        for p in range(2 * n):
            rows.append(sgn * (k - center) ** p)
        for p in range(1, 2 * n):
            rows.append((k - center) ** p)
        return np.vstack(rows)

    for _ in range(60):
        r = residual(c)
        if np.max(np.abs(r)) < 1e-15:
            break
        step, *_ = np.linalg.lstsq(jacobian(c), -r, rcond=None)
        c = c + step
    r = residual(c)
    assert np.max(np.abs(r)) < 1e-13, f"coif{n} did not converge: {np.max(np.abs(r))}"
    assert np.max(np.abs(c - COIF_SEEDS[n])) < 1e-9, f"coif{n} drifted from seed"
    return c.tolist()


def spline_biorthogonal(n_rec, n_dec):
    """Exact CDF spline pair: returns (dec_lo, rec_lo) rational lists (x sqrt2)."""
    assert (n_rec + n_dec) % 2 == 0
    big_l = (n_rec + n_dec) // 2

    # Primal (synthesis) lowpass: binomial spline of order n_rec.
    primal = [Fraction(math.comb(n_rec, k), 2 ** n_rec) for k in range(n_rec + 1)]

    # Dual (analysis) lowpass: binomial(n_dec) * P_L evaluated at
    # y(z) = (2 - z - 1/z)/4, all in exact rational arithmetic.
    # P_L(y) = sum_j C(L-1+j, j) y^j.
    y_taps = {-1: Fraction(-1, 4), 0: Fraction(2, 4), 1: Fraction(-1, 4)}
    q = {0: Fraction(1)}  # accumulates P_L(y(z)) as Laurent taps
    y_pow = {0: Fraction(1)}
    for j in range(1, big_l):
        y_pow = _laurent_mul(y_pow, y_taps)
        cj = Fraction(math.comb(big_l - 1 + j, j))
        for off, v in y_pow.items():
            q[off] = q.get(off, Fraction(0)) + cj * v

    spline = [Fraction(math.comb(n_dec, k), 2 ** n_dec) for k in range(n_dec + 1)]
    dual = {}
    for i, s in enumerate(spline):
        for off, v in q.items():
            dual[i + off] = dual.get(i + off, Fraction(0)) + s * v
    lo = min(dual)
    dual_list = [dual.get(i, Fraction(0)) for i in range(lo, max(dual) + 1)]
    return dual_list, primal


def _laurent_mul(a, b):
    out = {}
    for i, ai in a.items():
        for j, bj in b.items():
            out[i + j] = out.get(i + j, Fraction(0)) + ai * bj
    return out


def _pad_bior(dual, primal):
    """Zero-pad the bior pair to a common even length with half-band centering."""
    ld, lp = len(dual), len(primal)
    n = max(ld, lp)
    if n % 2:
        n += 1
    # conv(dec_lo, rec_lo) must have its only odd-index tap at n-1. Both
    # filters are symmetric, so the product is symmetric about the joint
    # center (ld+lp-2)/2, an integer because ld and lp share parity.
    conv_center = (ld + lp - 2) // 2
    total_shift = (n - 1) - conv_center
    assert total_shift >= 0
    candidates = []
    for od in range(total_shift + 1):
        op = total_shift - od
        if od + ld <= n and op + lp <= n:
            dec = [0.0] * od + [float(v) for v in dual] + [0.0] * (n - od - ld)
            rec = [0.0] * op + [float(v) for v in primal] + [0.0] * (n - op - lp)
            candidates.append((od, dec, rec))
    assert candidates, "no valid bior padding"
    # Prefer the layout that centers the longer (dual) filter, matching the
    # conventional table layout (e.g. leading zero on the 5-tap dual of 2.2).
    od, dec, rec = min(candidates, key=lambda c: (abs(2 * c[0] + ld - n), -c[0]))
    s = math.sqrt(2)
    return [v * s for v in dec], [v * s for v in rec]


def derive_quadruple(dec_lo, rec_lo):
    dec_lo = list(dec_lo)
    rec_lo = list(rec_lo)
    dec_hi = [-((-1.0) ** k) * v for k, v in enumerate(rec_lo)]
    rec_hi = [((-1.0) ** k) * v for k, v in enumerate(dec_lo)]
    return dec_lo, dec_hi, rec_lo, rec_hi


def check_quadruple(name, quad):
    dec_lo, dec_hi, rec_lo, rec_hi = (np.asarray(f) for f in quad)
    n = len(dec_lo)
    assert n % 2 == 0 and all(len(f) == n for f in quad)

    # Half-band: odd part of conv(dec_lo, rec_lo) is a unit spike at n-1.
    p = np.convolve(dec_lo, rec_lo)
    odd = p[1::2]
    spike = np.zeros_like(odd)
    spike[(n - 1) // 2] = 1.0
    err = np.max(np.abs(odd - spike))
    assert err < 5e-14, f"{name}: half-band violation {err}"

    # Detail channels annihilate constants.
    assert abs(dec_hi.sum()) < 5e-14, f"{name}: dec_hi DC leak"
    assert abs(rec_hi.sum()) < 5e-14, f"{name}: rec_hi DC leak"

    # Orthogonal families: orthonormal shifts and mirror relation.
    if not name.startswith("bior"):
        h = rec_lo
        for m in range(n // 2):
            r = float(np.dot(h[: n - 2 * m], h[2 * m :]))
            assert abs(r - (1.0 if m == 0 else 0.0)) < 5e-14, f"{name}: orthonormality"
        assert np.max(np.abs(dec_lo - rec_lo[::-1])) < 5e-15, f"{name}: mirror"


def build_all():
    tables = {}
    tables["haar"] = derive_quadruple(
        [math.sqrt(0.5), math.sqrt(0.5)], [math.sqrt(0.5), math.sqrt(0.5)]
    )
    for n in (2, 3, 4):
        h = daubechies_lowpass(n)
        tables[f"db{n}"] = derive_quadruple(h[::-1], h)
    for n in (1, 2, 3):
        h = coiflet_lowpass(n)
        tables[f"coif{n}"] = derive_quadruple(h[::-1], h)
    for spec in ("1.3", "1.5", "2.2", "2.4", "3.1"):
        n_rec, n_dec = (int(v) for v in spec.split("."))
        dual, primal = spline_biorthogonal(n_rec, n_dec)
        dec_lo, rec_lo = _pad_bior(dual, primal)
        tables[f"bior{spec}"] = derive_quadruple(dec_lo, rec_lo)
    for name in FAMILIES:
        check_quadruple(name, tables[name])
    return tables


def emit(tables, path):
    lines = [
        '"""Wavelet filter bank tables (generated by tools/gen_filters.py; do not edit).',
        "",
        "Quadruple layout per family: (dec_lo, dec_hi, rec_lo, rec_hi), equal even",
        "lengths, analysis by convolution + odd-phase downsampling. Regenerate with",
        "``python tools/gen_filters.py`` if the family list ever changes.",
        '"""',
        "",
        "FILTERS = {",
    ]
    for name in FAMILIES:
        lines.append(f"    {name!r}: (")
        for filt in tables[name]:
            body = ", ".join(f"{v!r}" for v in filt)
            lines.append(f"        ({body}),")
        lines.append("    ),")
    lines.append("}")
    lines.append("")
    with open(path, "w") as fh:
        fh.write("\n".join(lines))
    print(f"wrote {path} ({len(FAMILIES)} families)")


if __name__ == "__main__":
    import os

    here = os.path.dirname(os.path.abspath(__file__))
    out = os.path.join(here, "..", "src", "warpad", "wavelet", "_coeffs.py")
    os.makedirs(os.path.dirname(out), exist_ok=True)
    emit(build_all(), os.path.normpath(out))
