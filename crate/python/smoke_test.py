#!/usr/bin/env python3
"""Smoke test for the modone_py extension module.

Builds the cdylib with cargo, loads it, and exercises one representative
call from every binding group: generators, counting statistics, reference
laws, Diophantine estimation, lattice-space bounds, and the verification
suites. Run from anywhere:

    python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_and_import():
    subprocess.run(
        ["cargo", "build", "-p", "modone-py", "--quiet"],
        cwd=REPO,
        check=True,
    )
    candidates = [
        REPO / "target" / "debug" / "libmodone_py.so",
        REPO / "target" / "debug" / "libmodone_py.dylib",
        REPO / "target" / "debug" / "modone_py.dll",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("extension library not found after cargo build")
    stage = Path(tempfile.mkdtemp(prefix="modone-py-"))
    shutil.copy2(built, stage / "modone_py.so")
    sys.path.insert(0, str(stage))
    import modone_py

    return modone_py


def ok(label):
    print(f"ok: {label}")


def main():
    m = build_and_import()
    ok("module imports")

    # generators ---------------------------------------------------------
    sqrt_seq = m.sqrt_sequence(20000)
    assert len(sqrt_seq) == 20000 - math.isqrt(20000)
    assert all(0.0 <= p < 1.0 for p in sqrt_seq.points())
    assert sqrt_seq.descriptor()["kind"] == "sqrt"
    ok("sqrt sequence: size, range, descriptor")

    uniform = m.iud_sequence(20000, seed=7)
    again = m.iud_sequence(20000, seed=7)
    assert uniform.points() == again.points()
    ok("uniform sequence: deterministic regeneration")

    golden = (1 + math.sqrt(5)) / 2
    lin = m.arithmetic_sequence("linear", golden, 5000)
    assert len(lin) == 5000
    ok("arithmetic sequence: linear orbit")

    dirs = m.direction_sequence((0.2, 0.3), 150.0)
    area = math.pi * 150.0**2
    assert abs(len(dirs) - area) / area < 0.02
    ok("direction sequence: count tracks disc area")

    wrapped = m.external_sequence([0.1, 0.5, 0.9], label="by-hand")
    assert wrapped.points() == [0.1, 0.5, 0.9]
    ok("external points wrap round-trip")

    # counting statistics --------------------------------------------------
    n = len(uniform)
    x = 0.2
    count = m.count_stat(uniform, x, [(0.0, 2.0)])
    brute = sum(1 for p in uniform.points() if 0.0 <= ((p - x) % 1.0) * n < 2.0)
    assert count == brute, (count, brute)
    ok("count_stat agrees with a direct recount")

    measure = 1.5
    first = m.moments(uniform, [[(-0.3, 1.2)]], [1.0])
    assert abs(first - measure) < 1e-10
    ok("exact first moment equals the window measure")

    second = m.moments(uniform, [[(0.0, 1.0)]], [2.0])
    assert abs(second - 2.0) < 0.2, second
    ok("second moment near the Poisson value 2")

    dist = m.counting_distribution(uniform, [[(0.0, 1.0)]])
    total = sum(dist.values())
    assert abs(total - 1.0) < 1e-9
    p0 = dist.get((0,), 0.0)
    assert abs(p0 - math.exp(-1)) < 0.05, p0
    ok("count distribution: mass 1, empty-window mass near 1/e")

    gaps = m.scaled_gaps(uniform)
    assert len(gaps) == n and abs(sum(gaps) - n) < 1e-9 * n
    ok("scaled gaps close the circle")

    grid = [i * 0.05 for i in range(101)]
    cdf = m.gap_cdf(uniform, grid)
    sup = max(abs(c - m.exponential_gap_cdf(a)) for a, c in zip(grid, cdf))
    assert sup < 0.05, sup
    assert m.neighbor_spacing_cdf(1, 0.7) == m.exponential_gap_cdf(0.7)
    ok("uniform gaps follow the exponential law")

    pair = m.pair_correlation(uniform, center=1.0, halfwidth=0.5)
    ref = m.poisson_pair_value(center=1.0, halfwidth=0.5)
    assert abs(pair - ref) < 0.05, (pair, ref)
    hist = m.pair_correlation_histogram(uniform, 0.0, 4.0, 16)
    assert len(hist["edges"]) == 17 and len(hist["density"]) == 16
    assert max(abs(d - 1.0) for d in hist["density"]) < 0.2
    ok("pair correlation matches the Poisson reference")

    total = sum(m.poisson_pmf(r, 1.0) for r in range(50))
    assert abs(total - 1.0) < 1e-12
    sym = m.poisson_mixed_second([(0.0, 1.0)], [(0.5, 2.0)])
    assert abs(sym - m.poisson_mixed_second([(0.5, 2.0)], [(0.0, 1.0)])) < 1e-12
    ok("Poisson reference laws: pmf mass and mixed-moment symmetry")

    # diophantine ----------------------------------------------------------
    rep = m.scalar_type_estimate(math.sqrt(2), 20000)
    assert 0.9 < rep["kappa_estimate"] < 1.1, rep
    assert rep["worst_witness"]["kind"] == "scalar"
    k = rep["worst_witness"]["k"]
    ell = rep["worst_witness"]["ell"]
    assert abs(abs(k * math.sqrt(2) + ell) - rep["min_distance"]) < 1e-12
    ok("sqrt(2) has Diophantine type near 1 with an honest witness")

    vec = m.vector_type_estimate((math.sqrt(2), math.sqrt(3)), 200)
    assert vec["kappa_estimate"] > 0.0
    line = m.rational_line_check((0.5, 1.0 / 3.0), 10)
    assert line is not None
    ok("vector estimate runs; rational line found for (1/2, 1/3)")

    # lattice space --------------------------------------------------------
    u, v, phi = m.iwasawa_coordinates([1.0, 0.0, 0.0, 1.0])
    assert abs(u) < 1e-12 and abs(v - 1.0) < 1e-12
    count = m.lattice_count_disc(2.5)
    brute = sum(
        1
        for a in range(-3, 4)
        for b in range(-3, 4)
        if a * a + b * b <= 2.5**2
    )
    assert count == brute, (count, brute)
    ok("Iwasawa identity and disc lattice count")

    cone = m.cone_bound(
        (0.3, 0.4), x=0.2, interval=(-0.5, 0.5), t=2 * math.log(120.0)
    )
    assert cone["holds"] and cone["lhs"] <= cone["rhs"]
    ok("cone bound holds at T = 120")

    crude = m.sqrt_bound(0.07, (-2.0, -0.5), 10000)
    assert crude["holds"] and crude["lhs"] <= crude["rhs"]
    tiny = m.sqrt_bound(0.001, (-1.0, 1.0), 10000)
    assert tiny["zero_window"] and tiny["lhs"] == 0
    ok("sqrt crude bound holds; exclusion window is empty")

    cusp = m.cusp_bound([4.0, 0.0, 0.0, 0.25], (0.3, 0.7), radius=0.5)
    assert cusp["holds"]
    if cusp["power"] is not None:
        assert cusp["power"]["holds"]
    ok("cusp bound holds on an anisotropic lattice")

    # verification ---------------------------------------------------------
    names = m.suite_names()
    assert len(names) == 12 and "diophantine" in names
    report = m.run_suite("diophantine")
    assert all(c["passed"] for c in report["checks"]), report
    ok("verification suite 'diophantine' passes")

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
