"""Smoke test for the winv Python extension.

Run after `cargo build -p winv-py --release --features extension-module`, or
with the module installed through maturin.
"""

import importlib.machinery
import importlib.util
import pathlib
import sys


def load_winv():
    try:
        import winv

        return winv
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        for name in ("libwinv.so", "libwinv.dylib", "winv.dll"):
            path = root / "target" / profile / name
            if path.exists():
                loader = importlib.machinery.ExtensionFileLoader("winv", str(path))
                spec = importlib.util.spec_from_file_location("winv", path, loader=loader)
                module = importlib.util.module_from_spec(spec)
                loader.exec_module(module)
                sys.modules["winv"] = module
                return module
    sys.exit("winv extension not found; build crates/py with --features extension-module")


def close(x, y, eps=1e-10):
    return all(abs(a - b) <= eps for ra, rb in zip(x, y) for a, b in zip(ra, rb))


def main():
    winv = load_winv()

    # A = [[0,0],[1,1]] has no weighted {1',2',3'} inverse under W = e1 e1*; B = [[1,1],[0,0]] does.
    a = [[0, 0], [1, 1]]
    b = [[1, 1], [0, 0]]
    w = [[1, 0], [0, 0]]
    assert winv.existence(a, w)["exists_w123"] is False
    assert winv.existence(b, w)["exists_w123"] is True
    try:
        winv.family("w123", a, w)
    except winv.ExistenceFailure:
        pass
    else:
        raise AssertionError("expected ExistenceFailure")

    fam = winv.family("w123", b, w)
    assert fam.param_shape == (2, 2)
    assert close(fam.base(), [[1, 0], [0, 0]])
    assert close(fam.member([[0, 0], [-1.5, 0]]), [[1, 0], [-1.5, 0]])

    # row/column pair: X = [0 1] is the unique {1',2',3',1^1'} inverse
    ar, wr = [[0, 1]], [[0], [1]]
    x = winv.w1231k_particular(ar, wr)
    assert close(x, [[0, 1]])
    assert close(winv.weighted_core(ar, wr), x)
    report = winv.check_membership("w123-1k", ar, x, w=wr)
    assert report.passed and report.k == 1, report

    tol = winv.Tolerance(eq_rel=1e-9)
    a, w = winv.cn_construct(5, 4, 2, 2, seed=42)
    assert winv.weighted_index(a, w) == 2
    for s in ("w123-1k", "w124-k1"):
        f = winv.family(s, a, w, tol=tol)
        for i in range(5):
            r = winv.check_membership(s, a, f.sample(seed=7, index=i), w=w, tol=tol)
            assert r.passed, r.to_json()
    try:
        winv.w1231k_particular(a, w, k=1)
    except winv.IndexOutOfRange:
        pass
    else:
        raise AssertionError("expected IndexOutOfRange")

    m = [[1, 2j], [0, 0]]
    assert winv.check_membership("mp", m, winv.pinv(m)).passed
    d = winv.drazin([[0, 1], [0, 0]])
    assert close(d, [[0, 0], [0, 0]])
    wd = winv.w_drazin(a, w)
    assert len(wd) == 5 and len(wd[0]) == 4
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
