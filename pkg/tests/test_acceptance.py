"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import sys
import time
from fractions import Fraction as Fr
from pathlib import Path

import pytest

from hnlab.cli import main as cli_main
from hnlab.exact import GF, QQ
from hnlab.hn import HNType, NewtonSlopes, bundle_of_pdiv
from hnlab.local_model import roundtrip_trials
from hnlab.multilinear import minor_trials, trace_trials
from hnlab.p1 import sample_experiment
from hnlab.rng import SplitMix64
from hnlab.rz import RZDatum, enumerate_profiles, rz_table, tangent_rank_degree
from hnlab.tor import tor_trials

sys.path.insert(0, str(Path(__file__).parent))
from rz_oracle import brute_force_profiles  # noqa: E402

F101 = GF(101)
SEED = 20240611


def labels(ts):
    return sorted(t.label() for t in ts)


def c1_lubin_tate_n2():
    import io
    import json
    from contextlib import redirect_stdout
    buf = io.StringIO()
    t0 = time.perf_counter()
    with redirect_stdout(buf):
        code = cli_main(["rz", "enumerate", "--height", "2", "--dim", "1", "--json"])
    dt = time.perf_counter() - t0
    profs = {p["label"]: p for p in json.loads(buf.getvalue())["result"]["profiles"]}
    ok = (code == 0 and set(profs) == {"1/3", "1/2,0"}
          and profs["1/3"]["smooth"] and not profs["1/3"]["special"]
          and profs["1/2,0"]["special"] and not profs["1/2,0"]["smooth"] and dt < 1)
    return ok, f"profiles {sorted(profs)}, exit {code}, {dt:.3f}s"


def c2_lubin_tate_n3():
    t0 = time.perf_counter()
    table = rz_table(RZDatum(3, 1))
    dt = time.perf_counter() - t0
    cands = labels(table.candidates)
    kept = {tp.hn.label(): tp for tp in table.admissible}
    ok = (cands == sorted(["1/4,1/4", "1/3,1/5", "1/3,1/3,0,0", "2/7,0", "1/3,1/4,0"])
          and set(kept) == {"1/4,1/4", "1/3,1/5", "1/3,1/3,0,0"}
          and kept["1/3,1/3,0,0"].dim_Ax == 3 and not table.consistency_failures() and dt < 1)
    return ok, f"{len(cands)} candidates, kept {sorted(kept)}, {dt:.3f}s"


def c3_tangent_rank_degree():
    got = [tangent_rank_degree(RZDatum(n, 1)) for n in range(2, 9)]
    want = [(n * n - 1, n - 1) for n in range(2, 9)]
    return got == want, f"{got}"


def _jacobian_sample(field):
    return sample_experiment(3, 1, 4, field, 500, SEED, keep_reports=True, redraw=True)


_SAMPLES = {}


def _sample(field):
    if field.name() not in _SAMPLES:
        t0 = time.perf_counter()
        res = _jacobian_sample(field)
        _SAMPLES[field.name()] = (res, time.perf_counter() - t0)
    return _SAMPLES[field.name()]


def c4_jacobian_example():
    details, ok = [], True
    for F in (F101, QQ):
        res, dt = _sample(F)
        good = 0
        for rep in res.reports:
            k = tuple(rep.kernel.to_json())
            good += (rep.hom_dim == 12 and rep.kernel.rank == 2 and rep.kernel.degree == -1
                     and k in ((0, -1), (1, -2)) and (rep.h0_kernel == 1) == (k == (0, -1)))
        ok &= good == len(res.reports) == 500 and dt < 30
        details.append(f"{F.name()}: {good}/{len(res.reports)} ({res.rejected} redrawn) {dt:.1f}s")
    return ok, "; ".join(details)


def c5_genericity():
    details, ok = [], True
    for F in (F101, QQ):
        res, _ = _sample(F)
        a, b = res.count((0, -1)), res.count((1, -2))
        ok &= a > 0 and b > 0 and a > b and a + b == 500
        details.append(f"{F.name()}: {{0,-1}} x{a}, {{1,-2}} x{b}")
    return ok, "; ".join(details)


def c6_minor_lemma():
    details, ok = [], True
    for F in (F101, QQ):
        t0 = time.perf_counter()
        s = minor_trials(500, SEED, F, max_n=5)
        dt = time.perf_counter() - t0
        dims_ok = all(d == n * n - (n - r) ** 2 for (n, r, d), _ in s.dims)
        ok &= s.ok and dims_ok and dt < 30
        details.append(f"{F.name()}: {s.passed}/{s.trials} {dt:.1f}s")
    return ok, "; ".join(details)


def c7_trace_wedge():
    s = trace_trials(500, SEED, QQ, max_n=5)
    return s.ok, f"{s.passed}/{s.trials}"


def c8_tor_lemma():
    # the swapped-order rerun is exercised in test_tor; here only the three claims
    details, ok = [], True
    for F in (F101, QQ):
        s = tor_trials(300, SEED, F, check_symmetry=False)
        ok &= s.ok
        details.append(f"{F.name()}: {s.passed}/{s.trials}")
    return ok, "; ".join(details)


def c9_local_model():
    details, ok = [], True
    for F in (F101, QQ):
        s = roundtrip_trials(300, SEED, F)
        ok &= s.ok
        details.append(f"{F.name()}: roundtrip {s.roundtrip}, det Q unit {s.det_Q_unit} of {s.trials}")
    return ok, "; ".join(details)


def c10_slope_dictionary():
    rng = SplitMix64(SEED)
    good = 0
    for _ in range(200):
        summands = []
        for _ in range(rng.randint(1, 4)):
            h = rng.randint(1, 8)
            summands.append((Fr(rng.randint(0, h), h), rng.randint(1, 3)))
        H = NewtonSlopes(summands)
        good += bundle_of_pdiv(H).summands == H.summands
    lt = all(bundle_of_pdiv(NewtonSlopes([(Fr(1, n), 1)])) == HNType([(Fr(1, n), 1)])
             for n in range(1, 9))
    return good == 200 and lt, f"{good}/200 random types, Lubin-Tate 1/n for n<=8: {lt}"


FAREY = sorted({Fr(a, b) for b in range(1, 9) for a in range(-b, b + 1)})


def c11_enumerator_oracle():
    """Every (rank <= 12, |degree| <= 6, lo <= hi in the Farey grid of order 8 on [-1, 1]).

    The oracle runs once per (rank, degree) on [-1, 1].  For a sub-range the
    oracle's answer is the subset with all slopes inside it, so the
    enumerator's list must (a) consist of oracle profiles inside the range,
    (b) be duplicate-free and canonically ordered, and (c) have the size of
    that subset, counted for all ranges at once by 2-d prefix sums.
    """
    N = len(FAREY)
    index = {f: i for i, f in enumerate(FAREY)}
    checked = mismatches = direct = 0
    for r in range(1, 13):
        for d in range(-6, 7):
            wide = brute_force_profiles(r, d, -1, 1)
            if enumerate_profiles(r, d, -1, 1) != wide:
                mismatches += 1
            members = set(wide)
            # grid[i][j]: profiles whose slopes fit in [FAREY[i], FAREY[j]]
            grid = [[0] * N for _ in range(N)]
            for t in wide:
                a = max(i for i, f in enumerate(FAREY) if f <= t.summands[-1][0])
                b = min(j for j, f in enumerate(FAREY) if f >= t.summands[0][0])
                grid[a][b] += 1
            for i in range(N - 2, -1, -1):
                for j in range(N):
                    grid[i][j] += grid[i + 1][j]
            for i in range(N):
                for j in range(1, N):
                    grid[i][j] += grid[i][j - 1]
            for lo in FAREY:
                i = index[lo]
                for hi in FAREY[i:]:
                    got = enumerate_profiles(r, d, lo, hi)
                    checked += 1
                    ok = len(got) == grid[i][index[hi]] and len(set(got)) == len(got)
                    if ok:
                        for x, y in zip(got, got[1:]):
                            if not x.summands > y.summands:
                                ok = False
                                break
                    if ok:
                        for t in got:
                            if t not in members or t.summands[-1][0] < lo or t.summands[0][0] > hi:
                                ok = False
                                break
                    if ok and checked % 97 == 0:
                        # direct list comparison on a deterministic subsample
                        ok = got == brute_force_profiles(r, d, lo, hi)
                        direct += 1
                    mismatches += not ok
    return mismatches == 0, (f"{checked} (rank, degree, bounds) cases, {direct} also compared "
                             f"list-for-list, {mismatches} mismatches")


CRITERIA = [
    ("1", "Lubin-Tate n=2 table", c1_lubin_tate_n2),
    ("2", "Lubin-Tate n=3 table", c2_lubin_tate_n3),
    ("3", "tangent rank/degree", c3_tangent_rank_degree),
    ("4", "Jacobian example reproduction", c4_jacobian_example),
    ("5", "genericity of {0,-1}", c5_genericity),
    ("6", "minor-map kernel lemma", c6_minor_lemma),
    ("7", "trace-wedge identity", c7_trace_wedge),
    ("8", "Tor lemma", c8_tor_lemma),
    ("9", "local model round-trip", c9_local_model),
    ("10", "slope dictionary", c10_slope_dictionary),
    ("11", "enumerator oracle equivalence", c11_enumerator_oracle),
]


def _run(num, name, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {name} -- {detail} ({time.perf_counter() - t0:.1f}s)"
    return ok, line


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, capsys):
    ok, line = _run(num, name, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_run(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
