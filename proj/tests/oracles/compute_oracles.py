"""Independent high-precision oracle values frozen into the C++ tests.

Run with: python3 tests/oracles/compute_oracles.py
"""
from mpmath import mp, mpf, exp, sqrt

mp.dps = 40


def hawkeye(r, eps, a, lam):
    if r <= -eps:
        return lam * (1 - (-a * (r + eps) + 1) * exp(a * (r + eps)))
    if r >= eps:
        return lam * (1 - (a * (r - eps) + 1) * exp(-a * (r - eps)))
    return mpf(0)


def hawkeye_d(r, eps, a, lam):
    if r < -eps:
        return lam * a**2 * (r + eps) * exp(a * (r + eps))
    if r > eps:
        return lam * a**2 * (r - eps) * exp(-a * (r - eps))
    return mpf(0)


print("hawkeye(0.5,1,1) at 1.5 :", mp.nstr(hawkeye(mpf("1.5"), mpf("0.5"), 1, 1), 20))
print("hawkeye'(0.5,1,1) at 1.5:", mp.nstr(hawkeye_d(mpf("1.5"), mpf("0.5"), 1, 1), 20))
print("rbf sigma=2 d2=4        :", mp.nstr(exp(mpf(-4) / 4), 20))


def adam_trace(g, steps, placement, b1=mpf("0.9"), b2=mpf("0.999"), gamma=mpf("0.01"),
               delta=mpf("1e-8"), a0=mpf(0), m0=mpf(0), v0=mpf(0)):
    a, m, v = a0, m0, v0
    out = []
    for t in range(1, steps + 1):
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        mh = m / (1 - b1**t)
        vh = v / (1 - b2**t)
        if placement == "inside":
            a = a - gamma * mh / sqrt(vh + delta)
        else:
            a = a - gamma * mh / (sqrt(vh) + delta)
        out.append((m, v, mh, vh, a))
    return out


for placement in ("inside", "outside"):
    for g in (mpf(1), mpf("-0.5")):
        tr = adam_trace(g, 2, placement)
        for t, (m, v, mh, vh, a) in enumerate(tr, 1):
            print(f"adam {placement} g={g} t={t}: m={mp.nstr(m,20)} v={mp.nstr(v,20)} "
                  f"mh={mp.nstr(mh,20)} vh={mp.nstr(vh,20)} alpha={mp.nstr(a,20)}")

# Library Adam defaults (m0=v0=alpha0=0.01), constant g=1, two steps
for placement in ("inside", "outside"):
    tr = adam_trace(mpf(1), 2, placement, a0=mpf("0.01"), m0=mpf("0.01"), v0=mpf("0.01"))
    for t, (m, v, mh, vh, a) in enumerate(tr, 1):
        print(f"adam-init {placement} t={t}: alpha={mp.nstr(a,20)}")

# Friedman / Iman-Davenport / Nemenyi
R = [mpf("2.5294"), mpf("3.8888"), mpf("2"), mpf("1.2777")]
D, p = 18, 4
chi2 = mpf(12 * D) / (p * (p + 1)) * (sum(r * r for r in R) - mpf(p * (p + 1) ** 2) / 4)
ff = (D - 1) * chi2 / (D * (p - 1) - chi2)
cd = mpf("2.569") * sqrt(mpf(p * (p + 1)) / (6 * D))
print("chi2", mp.nstr(chi2, 12), "FF", mp.nstr(ff, 12), "CD", mp.nstr(cd, 12))
Rex = [mpf(43) / 17, mpf(70) / 18, mpf(2), mpf(23) / 18]
chi2x = mpf(12 * D) / (p * (p + 1)) * (sum(r * r for r in Rex) - mpf(p * (p + 1) ** 2) / 4)
print("chi2 from exact average ranks", mp.nstr(chi2x, 12))
