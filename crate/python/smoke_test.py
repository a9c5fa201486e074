"""Smoke test for the harmsum Python extension.

Usage:
    cargo build -p harmsum-py
    python3 python/smoke_test.py [path/to/libharmsum_py.so]

Without an argument the library is looked up under target/{release,debug}.
It is copied to a temporary directory as harmsum.so and imported from there.
"""

import importlib
import shutil
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_library():
    if len(sys.argv) > 1:
        return Path(sys.argv[1])
    for profile in ("release", "debug"):
        for name in ("libharmsum_py.so", "libharmsum_py.dylib"):
            candidate = ROOT / "target" / profile / name
            if candidate.exists():
                return candidate
    sys.exit("libharmsum_py not found; run `cargo build -p harmsum-py` first")


def load():
    lib = locate_library()
    tmp = Path(tempfile.mkdtemp(prefix="harmsum-"))
    shutil.copy(lib, tmp / "harmsum.so")
    sys.path.insert(0, str(tmp))
    return importlib.import_module("harmsum")


def brute_mhs(n, comp):
    """H_n(comp) by direct nested summation."""
    if not comp:
        return Fraction(1)
    head, tail = comp[0], comp[1:]
    return sum(
        (Fraction(1, m ** head) if head > 0 else Fraction(m ** -head)) * brute_mhs(m - 1, tail)
        for m in range(1, n + 1)
    )


def main():
    hs = load()

    assert hs.bernoulli(1) == Fraction(1, 2)
    assert hs.bernoulli(1, "minus") == Fraction(-1, 2)
    assert hs.bernoulli(12) == Fraction(-691, 2730)
    assert hs.harmonic(4) == Fraction(25, 12)
    assert hs.mhs_eval(6, [-2, 1, 2]) == brute_mhs(6, (-2, 1, 2))

    f = hs.Polynomial("3*m^2 + m")
    assert f.coeffs() == [0, 1, 3] and f.degree == 2
    assert f(Fraction(1, 2)) == Fraction(5, 4)
    assert f == "m + 3*n^2"
    assert str(hs.faulhaber(2)) == "1/3*n^3 + 1/2*n^2 + 1/6*n"

    cf = hs.reduce(1, [2, 1], method="both")
    assert cf.eval_range(12) == [brute_mhs(n, (-1, 2, 1)) for n in range(13)]
    assert hs.ClosedForm.from_json(cf.to_json()) == cf
    assert "H_n(2,1)" in cf.render("latex")

    square = hs.sum_power("1", 2)
    assert str(square) == "2*n - (2*n + 1)*H(1) + n*H(2) + 2*n*H(1,1)"
    assert square == hs.sum_product(hs.Polynomial("1"), [(1, 2)])
    shifted = hs.sum_power("3*m^2+m", 4, shifted=True)
    assert shifted(7) == sum((3 * m * m + m) * hs.harmonic(m) ** 4 for m in range(8))

    s = hs.spiess_form("hn4", "3*m^2-5*m+2")
    assert s.c21 == 0 and s.c3 == 0
    assert s.to_closed() == hs.sum_power("3*m^2-5*m+2", 4)
    assert str(hs.spiess_form("hn2", "1")) == "n*H^2 - (2*n + 1)*H + 2*n"
    assert hs.spiess_form("hn3", "m", shifted=True).c2 == hs.Polynomial([Fraction(-1, 4)])

    report = hs.structure_check("m^3 - 2", 4)
    assert report["passes"] and report["offending_terms"] == []
    assert hs.expand_power(1, 2) == [((2,), 1), ((1, 1), 2)]
    assert hs.check_two_bs("2*m + 1") == (True, True)
    assert hs.umbral_eval("2*m - 1") == 0
    assert hs.d_umbral(1, [0]) == Fraction(7, 8)
    assert hs.c_poly(1, [0]) == hs.Polynomial("n^2/4 + 3*n/4")

    for bad in (lambda: hs.reduce(1, [0, 1]), lambda: hs.Polynomial("3*k"),
                lambda: hs.bernoulli(2, "sideways"), lambda: hs.mhs_eval(3, [1, -1])):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
