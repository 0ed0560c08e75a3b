"""High-precision Mittag-Leffler series oracle.

Sums E_{a,b}(z) = sum_k z^k / Gamma(a k + b) with mpmath at a working
precision large enough to absorb the cancellation of the alternating
series, then prints values that are frozen into the C++ unit tests.
"""
import sys
import mpmath as mp


def ml(a, b, z, dps=None):
    a = mp.mpf(a); b = mp.mpf(b); z = mp.mpf(z)
    # digits lost to cancellation ~ log10(max term) ~ |z|^(1/a)/ln(10)
    loss = float(abs(z)) ** (1.0 / float(a)) / 2.3 if z != 0 else 0
    with mp.workdps(int(40 + loss * 1.2) if dps is None else dps):
        s = mp.mpf(0)
        k = 0
        small = 0
        while True:
            g = a * k + b
            term = mp.mpf(0) if (g <= 0 and g == mp.floor(g)) else z**k * mp.rgamma(g)
            s += term
            if k > 10 and abs(term) < mp.mpf(10) ** (-60) * max(abs(s), mp.mpf(10) ** -300):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            k += 1
        return s


if __name__ == "__main__":
    cases = [
        (0.4, 0.4, -2.0),
        (0.5, 1.0, -1.0),
        (1.0, 2.0, -1.0),
        (0.7, 1.0, -0.3),
        (1.5, 1.0, -3.0),
        (1.9, 1.3, -4.5),
        (0.3, 0.5, -5.0),
        (0.8, 0.8, -4.0),
        (1.3, 2.0, -6.0),
        (0.6, 1.6, -5.5),
        (1.2, 0.5, -2.5),
        (1.5, 2.5, -20.0),
        (0.5, 1.0, -30.0),
        (1.8, 1.0, -50.0),
    ]
    for a, b, z in cases:
        print(f"{{{a}, {b}, {z}, {mp.nstr(ml(a, b, z), 20)}}},")
    sys.stdout.flush()
