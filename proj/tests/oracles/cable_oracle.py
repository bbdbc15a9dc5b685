"""Arbitrary-precision reference values for the cable model tests.

Run with `python3 tests/oracles/cable_oracle.py`; the printed numbers are
frozen into tests/test_cable_model.cpp and tests/test_power_flow.cpp.
"""
import mpmath as mp

mp.mp.dps = 40

R = mp.mpf("0.048")
L = mp.mpf("0.37e-3")
C = mp.mpf("0.18e-6")
G = mp.mpf("0")
omega = 2 * mp.pi * 50


def wave_params(r=R, l=L, c=C, g=G):
    z = r + 1j * omega * l
    y = g + 1j * omega * c
    return z, y, mp.sqrt(z / y), mp.sqrt(z * y)


def two_port(length, r=R, l=L, c=C, g=G):
    _, _, zc, gamma = wave_params(r, l, c, g)
    gl = gamma * length
    return mp.cosh(gl) / (mp.sinh(gl) * zc), -1 / (zc * mp.sinh(gl))


def show(name, value):
    value = mp.mpc(value)
    print(f"{name}: {mp.nstr(value.real, 17)} {mp.nstr(value.imag, 17)}")


if __name__ == "__main__":
    z, y, zc, gamma = wave_params()
    show("Z", z)
    show("Y", y)
    show("Zc", zc)
    show("gamma", gamma)
    a, b = two_port(200)
    show("a(200km)", a)
    show("b(200km)", b)
    a, b = two_port(400)
    show("a(400km)", a)
    show("b(400km)", b)
    # efficiency at the stated optimum scaling of the 200 km cable
    a, b = two_port(200)
    for alpha, beta_deg in [("1.025", "4.25"), ("1", "3")]:
        xi = mp.mpf(alpha) * mp.expj(mp.radians(mp.mpf(beta_deg)))
        farm = (xi * mp.conj(a * xi + b)).real
        grid = -(b * xi + a).real
        print(f"eta(alpha={alpha}, beta={beta_deg}deg): {mp.nstr(grid / farm, 17)}")
        print(f"farm coefficient W/pu^2: {mp.nstr(farm * mp.mpf(220e3) ** 2, 17)}")
