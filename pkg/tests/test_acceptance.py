"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import subprocess
import sys
import time

import pytest

from esplib import acceptance as acc

# (criterion function, runtime bound in seconds)
BOUNDS = {
    1: (acc.c1_product_identity, 120),
    2: (acc.c2_suslin_identities, 300),
    3: (acc.c3_det_formula, 60),
    4: (acc.c4_j_forms, 30),
    5: (acc.c5_sigma, 30),
    6: (acc.c6_orbits, 120),
    7: (acc.c7_relative, 600),
    8: (acc.c8_transvections, 120),
    9: (acc.c9_peel, 300),
    10: (acc.c10_lifts, 120),
    11: (acc.c11_reduce, 120),
}


def _report(k, ok, elapsed, limit):
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s, limit {limit}s)")


@pytest.mark.parametrize("k", sorted(BOUNDS))
def test_criterion(k):
    f, limit = BOUNDS[k]
    t0 = time.perf_counter()
    res = f(0)
    elapsed = time.perf_counter() - t0
    ok = res["passed"] and elapsed < limit
    _report(k, ok, elapsed, limit)
    assert res["passed"], res["details"]
    assert elapsed < limit


def test_criterion_12_selftest_is_byte_identical():
    cmd = [sys.executable, "-m", "esplib", "selftest", "--seed", "0"]
    t0 = time.perf_counter()
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    elapsed = time.perf_counter() - t0
    ok = a.returncode == 0 and b.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    print(f"criterion 12: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s)")
    assert a.returncode == 0, a.stderr.decode()
    assert a.stdout == b.stdout
