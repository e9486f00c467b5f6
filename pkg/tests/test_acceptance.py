"""Acceptance criteria 1 to 10 at the default configuration.

Each test prints one line "criterion k: PASS|FAIL ..." and the lines are
repeated in the terminal summary.
"""

import pytest

from prismkit.cli import dumps
from prismkit.suites import RunConfig, build_envelope, run_suites

CFG = RunConfig(primes=[2, 3], N=6, M=8, Q=16, seed=0)


@pytest.fixture(scope="module")
def report():
    return run_suites(CFG, None)


def _select(report, prefix):
    return [c for c in report["checks"] if c["id"].startswith(prefix)]


def _record(log, k, title, ok, detail=""):
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    log[k] = line
    print(line)
    assert ok, line


def _all_pass(checks, samples=None):
    if not checks:
        return False
    if samples is not None and any(c.get("samples") != samples for c in checks):
        return False
    return all(c["pass"] for c in checks)


def test_criterion_01_ghost_homomorphism(report, acceptance_log):
    cs = _select(report, "witt.ghost_hom")
    ok = len(cs) == 8 and _all_pass(cs, 200)
    _record(acceptance_log, 1, "Witt sum/product agree with ghost components", ok, f"{len(cs)} (p, length) pairs x 200")


def test_criterion_02_delta_axioms(report, acceptance_log):
    laws = _select(report, "delta.laws")
    ok = _all_pass(laws, 200)
    ok = ok and _all_pass(_select(report, "delta.delta_p")) and _all_pass(_select(report, "delta.delta_E"))
    _record(acceptance_log, 2, "delta laws, delta(p) = 1 - p^(p-1), delta(u-2) = 2u - 3", ok, f"{len(laws)} rings x 200")


def test_criterion_03_pth_root_lemma(report, acceptance_log):
    cs = _select(report, "delta.pth_root_lemma_rank1")
    ok = _all_pass(cs, 20) and _all_pass(_select(report, "delta.pth_root_lemma_general"))
    _record(acceptance_log, 3, "val(delta(x^(p^n))) >= n for rank-1 x, n <= 4", ok, f"{len(cs)} rings x 20")


def test_criterion_04_qlog(report, acceptance_log):
    ok = _all_pass(_select(report, "qlog.log_one")) and _all_pass(_select(report, "qlog.log_q"))
    eig = _select(report, "qlog.eigen_relation")
    ok = ok and len(eig) == 2 and _all_pass(eig, 50)
    _record(acceptance_log, 4, "log_q(1) = 0, log_q(q) = q - 1, phi(log_q x) = [p]_q log_q x", ok, "50 x per p")


def test_criterion_05_envelope(report, acceptance_log):
    literal, details = True, []
    for p in CFG.primes:
        env = build_envelope(CFG, p)
        lhs = env.y(1).delta()
        rhs = env.y(2) * env.prism.delta(env.prism.d)
        literal = literal and lhs == rhs
        details.append(f"p={p}: delta(y1) == delta(d)y2 {lhs == rhs}, == -delta(d)y2 {lhs == -rhs}")
    general = _all_pass(_select(report, "envelope.delta_table_generators"))
    general = general and _all_pass(_select(report, "envelope.phi_delta_consistency"))
    trace = _all_pass(_select(report, "envelope.nilpotence_bound"))
    ok = literal and general and trace
    detail = "; ".join(details) + f"; general formula {general}; nilpotence trace {trace}"
    _record(acceptance_log, 5, "envelope delta(y1) = delta(d) y2, delta table, nilpotence", ok, detail)


def test_criterion_06_windows(report, acceptance_log):
    ok = _all_pass(_select(report, "window.axioms"), 50)
    ok = ok and _all_pass(_select(report, "window.bk_roundtrip"), 100)
    ok = ok and _all_pass(_select(report, "window.normal_decomposition_roundtrip"))
    ok = ok and _all_pass(_select(report, "window.unit_window"))
    _record(acceptance_log, 6, "window axioms, BK round trip, normal decomposition round trip", ok)


def test_criterion_07_lifting(report, acceptance_log):
    cs = _select(report, "lift.")
    ok = len(cs) == 3 and _all_pass(cs)
    _record(acceptance_log, 7, "phi-invariant and window-hom lifts over the envelope (p=2, K=3)", ok)


def test_criterion_08_dieudonne(report, acceptance_log):
    cs = _select(report, "dm.")
    ok = _all_pass(cs)
    _record(acceptance_log, 8, "Dieudonne module checks, duality, cokernels, refill", ok, f"{len(cs)} checks")


def test_criterion_09_ext(report, acceptance_log):
    ok = _all_pass(_select(report, "ext.ext"))
    ok = ok and _all_pass(_select(report, "ext.d2_d1_zero"), 100)
    ok = ok and _all_pass(_select(report, "ext.primitives"))
    _record(acceptance_log, 9, "Ext^1(Z/p^a, Z/p^b) = Z/p^min(a,b), d2 d1 = 0, primitives", ok)


def test_criterion_10_determinism(report, acceptance_log):
    again = run_suites(CFG, None)
    ok = dumps(report).encode() == dumps(again).encode()
    _record(acceptance_log, 10, "byte-identical reports for the same config", ok)
