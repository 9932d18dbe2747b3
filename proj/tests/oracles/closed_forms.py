"""High-precision reference values for the frozen expectations in the C++ tests.

Everything here is evaluated with mpmath at 50 digits directly from the
closed-form mode map E = exp(i*od*G / (2*(delta - i*G))), independently of
the C++ code paths (eigen-decomposition, Fock-space channel, dilation).
Run: python3 tests/oracles/closed_forms.py
"""
import mpmath as mp

mp.mp.dps = 50
I = mp.mpc(0, 1)


def mode_map(od, delta, theta=0, gamma=1):
    e = mp.exp(I * od * gamma / (2 * (delta - I * gamma)))
    a = (1 + e) / 2
    b = (1 - e) / 2 * mp.exp(-I * theta)
    c = (1 - e) / 2 * mp.exp(I * theta)
    return a, b, c, a, e


def closed_loss(od, delta, gamma=1):
    r = od * gamma**2 / (2 * (gamma**2 + delta**2))
    return (1 - mp.exp(-2 * r)) / 2


def coherent_tp(od, delta, u, phi_r):
    a, b, c, d, _ = mode_map(od, delta)
    bp = mp.conj(b)  # theta = 0
    return abs(mp.conj(a) + u * bp * mp.exp(-I * phi_r)) ** 2


def qubit(od, delta, u, phi_r):
    a, b, c, d, _ = mode_map(od, delta)
    p10 = abs(mp.conj(a) + u * mp.conj(b) * mp.exp(-I * phi_r)) ** 2 / (1 + u * u)
    p01 = abs(mp.conj(c) * mp.exp(I * phi_r) + u * mp.conj(d)) ** 2 / (1 + u * u)
    return p10, p01


def hom(od, delta, theta=0):
    a, b, c, d, _ = mode_map(od, delta, theta)
    p20 = 2 * abs(a * b) ** 2
    p02 = 2 * abs(c * d) ** 2
    p11 = abs(mp.conj(a) * mp.conj(d) + mp.conj(b) * mp.conj(c)) ** 2
    return p20, p02, p11


def swap(od, delta):
    a, b, c, d, _ = mode_map(od, delta)
    f = [mp.mpf(1), abs(c), abs(b),
         abs(mp.conj(a) * mp.conj(d) + mp.conj(b) * mp.conj(c))]
    mean = sum(f) / 4
    std = mp.sqrt(sum((x - mean) ** 2 for x in f) / 4)
    succ = sum(x * x for x in f) / 4
    return mean, std, succ


def show(label, *vals):
    print(label, " ".join(mp.nstr(v, 15) for v in vals))


if __name__ == "__main__":
    pi = mp.pi
    a, b, c, d, e = mode_map(200, 200 / pi)
    show("tm od200 hadamard a b |a|^2:", a, b, abs(a) ** 2)
    a, b, c, d, e = mode_map(50, 13)
    show("tm od50 d13 a b:", a, b)
    show("lambda od200:", (mp.mpf(200) / 4) / (1 + I * 200 / pi))
    show("closed loss od200 hadamard:", closed_loss(200, 200 / pi))
    show("closed loss od100 d0:", closed_loss(100, 0))
    show("Tp pi/2, 3pi/2 od50 d13:", coherent_tp(50, 13, 1, pi / 2), coherent_tp(50, 13, 1, 3 * pi / 2))
    show("qubit od200 hadamard pi/2:", *qubit(200, 200 / pi, 1, pi / 2))
    show("qubit od200 hadamard 3pi/2:", *qubit(200, 200 / pi, 1, 3 * pi / 2))
    show("sqrt P10:", mp.sqrt(qubit(200, 200 / pi, 1, pi / 2)[0]))
    show("hom od200 dip:", *hom(200, 200 / pi))
    show("hom od200 swap:", *hom(200, 100 / pi))
    p20, p02, p11 = hom(200, 200 / pi)
    show("hom od200 dip loss:", 1 - p20 - p02 - p11)
    a, b, c, d, e = mode_map(500, 500 / pi)
    show("noon od500 linear sqrt:", 4 * abs(a * b) ** 2, 2 * abs(a * b))
    for od in [50, 100, 200, 500, 1000, 2000]:
        a, b, c, d, e = mode_map(od, od / pi)
        show(f"noon sqrt od{od}:", 2 * abs(a * b))
    for od in [50, 100, 200, 500, 1000, 2000]:
        show(f"swap od{od} mean std succ:", *swap(od, od / (2 * pi)))
    a, b, c, d, e = mode_map(1000, 500 / pi)
    show("swap od1000 |C|^2 P11:", abs(c) ** 2, hom(1000, 500 / pi)[2])
    # |2_p 0_s> input: two-photon binomial loss on the (A, C) column
    a, b, c, d, e = mode_map(200, 200 / pi)
    show("2p0s input -> P20 P11 P02:", abs(a) ** 4, 2 * abs(a * c) ** 2, abs(c) ** 4)
