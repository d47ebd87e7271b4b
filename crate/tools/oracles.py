"""Reproduces the frozen reference values used by the Rust test suites.

Run with `python3 tools/oracles.py`; needs mpmath only.
"""
import mpmath as mp

mp.mp.dps = 50
C0 = mp.mpf("0.299792458")  # um/fs


def n_mgslt(lam_um, temp_k):
    # Dolev et al. (2009), 0.5 mol% MgO:SLT, extraordinary index.
    a = [mp.mpf(x) for x in ("4.5615", "0.08488", "0.1927", "5.5832", "8.3067", "0.021696")]
    b = [mp.mpf(x) for x in ("4.782e-7", "3.0913e-8", "2.7326e-8", "1.4837e-5", "1.3647e-7")]
    t = mp.mpf(temp_k) - mp.mpf("273.15")
    t0 = mp.mpf("24.5")
    f = (t - t0) * (t + t0 + 2 * mp.mpf("273.16"))
    l2 = mp.mpf(lam_um) ** 2
    n2 = (a[0] + b[0] * f
          + (a[1] + b[1] * f) / (l2 - (a[2] + b[2] * f) ** 2)
          + (a[3] + b[3] * f) / (l2 - (a[4] + b[4] * f) ** 2)
          - a[5] * l2)
    return mp.sqrt(n2)


def n_nsf14(lam_um):
    bs = [mp.mpf(x) for x in ("1.69022361", "0.288870052", "1.7045187")]
    cs = [mp.mpf(x) for x in ("0.0130512113", "0.061369188", "149.517689")]
    l2 = mp.mpf(lam_um) ** 2
    return mp.sqrt(1 + sum(b * l2 / (l2 - c) for b, c in zip(bs, cs)))


def erfi(z):
    return mp.erfi(mp.mpc(z))


print("n_e MgSLT 1.064 um 293 K  =", mp.nstr(n_mgslt("1.064", 293), 20))
print("n_e MgSLT 0.532 um 293 K  =", mp.nstr(n_mgslt("0.532", 293), 20))
for z in ("1", "0.5+0.5j", "2-3j", "4.5+1j", "-3+5.5j", "(5.9+0.1j)", "10+10j"):
    v = erfi(mp.mpc(complex(z)))
    print("erfi(%s) =" % z, mp.nstr(v.real, 20), mp.nstr(v.imag, 20))

# Separation term of a Brewster prism pair traversed once: GDD = -(2 l lam^3 / (pi c^2)) (dn/dlam)^2.
lam = mp.mpf("1.064")
dn = mp.diff(n_nsf14, lam)
for passes in (1, 2):
    l_um = mp.mpf(500e3)
    gdd = -passes * 2 * l_um * lam ** 3 / (mp.pi * C0 ** 2) * dn ** 2
    print("prism N-SF14 l=500mm passes=%d GDD fs^2 =" % passes, mp.nstr(gdd, 12))
print("N-SF14 dn/dlam at 1.064 um =", mp.nstr(dn, 15))

print("SNSPD 900 nm log-linear =", mp.nstr(mp.sqrt(mp.mpf("0.166") * mp.mpf("0.103")), 20))
