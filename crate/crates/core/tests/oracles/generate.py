"""Extended-precision reference values for the core test suite.

Run with `python3 generate.py > ../common/frozen.rs`; needs mpmath.
"""
from mpmath import mp, mpf, rgamma, rf, factorial, gamma, pi, sign, nstr

mp.dps = 60
AL, GA, DE = mpf(0.8), mpf(0.3), mpf(0.5)


def prabhakar(a, b, g, z, terms=200):
    return sum(rf(g, k) / factorial(k) * rgamma(a * k + b) * z**k for k in range(terms))


def columns(inst, beta, y, n_max, m_max=80):
    """C_n(y) for one kernel instantiation with the Pochhammer fold."""
    b1, g1 = beta / 2, GA / 2
    a2, d2, d3 = {
        "green": (-b1, b1, g1),
        "initial": (-b1, 1 - b1, -g1),
        "omega": (-b1, mpf(0), mpf(0)),
    }[inst]
    out = []
    for n in range(n_max):
        row = sum(rf(d3 - g1 * n, m) * y**m / factorial(m) * rgamma(a2 * n + AL * m + d2) for m in range(m_max))
        out.append(row / factorial(n))
    return out


def profile(cols, z):
    return sum(c * (-z) ** n for n, c in enumerate(cols))


# Images beyond this distance (in profile units) are below 1e-18 and are
# dropped; the columns below converge up to it.
FAR = 30
N_COLS = 400


def image(cols, z):
    return mpf(0) if z > FAR else profile(cols, z)


def e12_brute(inst, beta, x, y, n_max=120, m_max=80):
    return profile(columns(inst, beta, y, n_max, m_max), -x)


def emit(name, value, note):
    print(f"/// {note}")
    print(f"pub const {name}: f64 = {nstr(value, 17, min_fixed=-1, max_fixed=1)};")


print("// Generated by tests/oracles/generate.py; do not edit.")
print("#![allow(dead_code, clippy::excessive_precision)]")
print()

emit("PRABHAKAR_08_09_03_AT_05", prabhakar(AL, mpf("0.9"), GA, mpf("0.5")),
     "E^0.3_{0.8,0.9}(0.5), 200-term partial sum.")
emit("W_EXAMPLE_AT_1", prabhakar(AL, mpf("1.5"), -GA, DE),
     "W(1) at alpha 0.8, beta 0.5, gamma 0.3, delta 0.5.")

beta = mpf("0.5")
emit("E12_OMEGA_M07_02", e12_brute("omega", beta, mpf("-0.7"), mpf("0.2")),
     "E12 at the omega instantiation, (x, y) = (-0.7, 0.2), beta 0.5, brute-force double sum.")
emit("E12_GREEN_Y0_M05", sum(mpf("-0.5") ** n * rgamma(beta / 2 * (1 - n)) / factorial(n) for n in range(120)),
     "E12 at the Green instantiation, (x, y) = (-0.5, 0), single series.")

# Prabhakar integral of g(s) = s and g = 1 at t = 1, order (0.8, 0.5, 0.3, 0.5), termwise.
bp = mpf("0.5")
c = [rf(GA, k) / factorial(k) * rgamma(AL * k + bp) * DE**k for k in range(200)]
emit("INTEGRAL_OF_S_AT_1", sum(ck / ((AL * k + bp) * (AL * k + bp + 1)) for k, ck in enumerate(c)),
     "Prabhakar integral of s at t = 1, order (0.8, 0.5, 0.3, 0.5), termwise.")
emit("INTEGRAL_OF_ONE_AT_1", sum(ck / (AL * k + bp) for k, ck in enumerate(c)),
     "Prabhakar integral of 1 at t = 1, order (0.8, 0.5, 0.3, 0.5), termwise.")

# Boundary kernels at t = 1, eta = 0.3, x = pi/2, a = pi, beta = 0.5 with 30 images.
mp.dps = 100
sigma, x, a = mpf("0.7"), pi / 2, pi
w = sigma ** (beta / 2)
cols = columns("omega", beta, DE * sigma**AL, N_COLS)
left = right = mpf(0)
for n in range(-30, 31):
    for side, cn in (("left", x + 2 * n * a), ("right", x + (2 * n - 1) * a)):
        v = sign(cn) * image(cols, abs(cn) / w) / sigma
        if side == "left":
            left += v
        else:
            right += v
mp.dps = 60
emit("GXI_LEFT_REF", left, "Left-wall kernel at t = 1, eta = 0.3, x = pi/2, a = pi, beta 0.5, 30 images.")
emit("GXI_RIGHT_REF", right, "Right-wall kernel at the same point.")

# Dirichlet kernels at beta = 0.5.
mp.dps = 100
t, x, xi = mpf("0.5"), mpf("1.2"), mpf("1.9")
cols = columns("initial", beta, DE * t**AL, N_COLS)
tot = sum(image(cols, abs(x - xi + 2 * a * n) / t ** (beta / 2)) - image(cols, abs(x + xi + 2 * a * n) / t ** (beta / 2))
          for n in range(-3, 4))
emit("G_TILDE_REF", t ** (-beta / 2) / 2 * tot, "G~(0.5, 1.2, 0, 1.9), a = pi, beta 0.5.")
s, x, xi = mpf("0.8"), mpf("1.0"), mpf("2.0")
cols = columns("green", beta, DE * s**AL, N_COLS)
tot = sum(image(cols, abs(x - xi + 2 * a * n) / s ** (beta / 2)) - image(cols, abs(x + xi + 2 * a * n) / s ** (beta / 2))
          for n in range(-3, 4))
mp.dps = 60
emit("G_REF", s ** (beta / 2 - 1) / 2 * tot, "G(1, 1.0, 0.2, 2.0), a = pi, beta 0.5.")
