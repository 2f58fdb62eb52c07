"""Writes co2_model.wfn: a linear O=C=O density built from single-Gaussian
shells, soft enough to be resolved by a 25-point spherical product grid.

Geometry: C at the origin, O at +/-2.185 bohr on z. Eleven doubly occupied
orbitals: C 1s, C 2s, C 2pz, O 1s (x2), O 2s sigma_g/sigma_u, O 2px/2py (x2).
"""
import math

L1 = 2.185
nuclei = [("C", 0.0, 6.0), ("O", L1, 8.0), ("O", -L1, 8.0)]
# (centre, type, exponent)
prims = [
    (1, 1, 2.5), (1, 1, 0.45), (1, 4, 0.55),
    (2, 1, 2.0), (2, 1, 0.8), (2, 2, 0.9), (2, 3, 0.9),
    (3, 1, 2.0), (3, 1, 0.8), (3, 2, 0.9), (3, 3, 0.9),
]


def norm(t, z):
    n = (2 * z / math.pi) ** 0.75
    return n if t == 1 else n * 2 * math.sqrt(z)


def s_overlap(z, d):
    return math.exp(-z * d * d / 2)


nprim = len(prims)
mos = []


def single(i, e):
    c = [0.0] * nprim
    c[i] = norm(prims[i][1], prims[i][2])
    mos.append((e, c))


single(3, -20.70)
single(7, -20.70)
single(0, -11.45)
S = s_overlap(0.8, 2 * L1)
for sign, e in ((1.0, -1.52), (-1.0, -1.47)):
    c = [0.0] * nprim
    n = norm(1, 0.8) / math.sqrt(2 * (1 + sign * S))
    c[4], c[8] = n, sign * n
    mos.append((e, c))
single(1, -0.80)
single(2, -0.72)
for i, e in ((5, -0.51), (6, -0.51), (9, -0.51), (10, -0.51)):
    single(i, e)


def d(x, w, p):
    if x == 0.0:
        m, ex = 0.0, 0
    else:
        ex = math.floor(math.log10(abs(x))) + 1
        m = x / 10 ** ex
        if abs(round(m, p)) >= 1.0:
            m /= 10
            ex += 1
    s = f"{m:.{p}f}"
    return f"{s}D{ex:+03d}".rjust(w)


out = [" CO2 model density (single-Gaussian shells)"]
out.append(f"GAUSSIAN{len(mos):15d} MOL ORBITALS{nprim:7d} PRIMITIVES{len(nuclei):9d} NUCLEI")
for j, (lab, z, q) in enumerate(nuclei, 1):
    out.append(f"  {lab:<2}{j:4d}    (CENTRE{j:3d}) {0.0:12.8f}{0.0:12.8f}{z:12.8f}  CHARGE ={q:5.1f}")
for k in range(0, nprim, 20):
    out.append("CENTRE ASSIGNMENTS  " + "".join(f"{p[0]:3d}" for p in prims[k:k + 20]))
for k in range(0, nprim, 20):
    out.append("TYPE ASSIGNMENTS    " + "".join(f"{p[1]:3d}" for p in prims[k:k + 20]))
for k in range(0, nprim, 5):
    out.append("EXPONENTS " + "".join(d(p[2], 14, 7) for p in prims[k:k + 5]))
for i, (e, c) in enumerate(mos, 1):
    out.append(f"MO{i:5d}     MO 0.0        OCC NO = {2.0:12.7f}  ORB. ENERGY ={e:12.6f}")
    for k in range(0, nprim, 5):
        out.append("".join(d(v, 16, 8) for v in c[k:k + 5]))
out.append("END DATA")
out.append(" THE  HF ENERGY =   -186.500000000000 THE VIRIAL(-V/T)=   2.00000000")
open("co2_model.wfn", "w").write("\n".join(out) + "\n")
