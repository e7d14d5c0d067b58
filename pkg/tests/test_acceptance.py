"""Acceptance criteria 1-12, each checked at its stated tolerance and sample count.

Every test records one PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""

import time

import numpy as np

from e3real import verify
from e3real.dynamics import IntegratorConfig, convergence_exponent, fixed_step_solution, integrate
from e3real.e3 import GyrostatParams, e3_flat_field
from e3real.scenarios import (
    DEFAULT_PARAMS,
    build_flow,
    build_system,
    monopole_from_e3,
    sphere_from_e3,
    twistor_from_e3,
)
from e3real.verify import SuiteConfig, run_suite

SEED = 42
SAMPLES = 100


def timed(suite, samples=SAMPLES):
    t0 = time.perf_counter()
    report = run_suite(SuiteConfig(suite, samples=samples, seed=SEED))
    return report, time.perf_counter() - t0


def worst(results):
    r = max(results, key=lambda c: c.residual / c.threshold)
    return f"worst {r.check} {r.residual:.2e} < {r.threshold:g}"


def test_criterion_01_bracket_tables(criterion_line):
    t0 = time.perf_counter()
    cfg = SuiteConfig("brackets", samples=SAMPLES, seed=SEED)
    results = [verify.bracket_table_check(space, cfg) for space in ("e3", "e3a2", "monopole")]
    elapsed = time.perf_counter() - t0
    ok = all(r.passed for r in results) and elapsed < 5.0
    assert criterion_line(1, ok, f"bracket tables e3, e3+a2, monopole: {worst(results)}; {elapsed:.2f} s < 5 s")


def test_criterion_02_jacobi(criterion_line):
    t0 = time.perf_counter()
    cfg = SuiteConfig("jacobi", samples=SAMPLES, seed=SEED)
    results = [verify.jacobi_check(space, cfg) for space in ("e3", "twistor", "monopole")]
    elapsed = time.perf_counter() - t0
    mono = next(r for r in results if r.check == "jacobi.monopole")
    ok = all(r.passed for r in results) and elapsed < 10.0 and mono.samples == 3 * SAMPLES
    assert criterion_line(2, ok, f"Jacobi on e3, twistor, monopole (mu in {verify.MONOPOLE_MUS}): "
                                 f"{worst(results)}; {elapsed:.2f} s < 10 s")


def test_criterion_03_poisson_maps(criterion_line):
    cfg = SuiteConfig("poisson-maps", samples=SAMPLES, seed=SEED)
    results = [verify.poisson_map_check(m, cfg) for m in ("J_e", "J_e_mu", "J_e_nu")]
    ok = all(r.passed and r.samples >= 200 for r in results)
    assert criterion_line(3, ok, f"J_e, J_e_mu, J_e_nu over 15 pairs at 200 points: {worst(results)}")


def test_criterion_04_dual_pair(criterion_line):
    report, _ = timed("dual-pair")
    ok = report.passed and all(r.samples >= 200 for r in report.results)
    assert criterion_line(4, ok, f"dual pair J_a / J_e at 200 points: {worst(report.results)}")


def test_criterion_05_equivariance(criterion_line):
    report, _ = timed("equivariance")
    je = report.result("equivariance.J_e")
    hom = report.result("equivariance.su2_homomorphism")
    ok = je.passed and hom.passed and je.threshold <= 1e-10 and hom.threshold <= 1e-12
    assert criterion_line(5, ok, f"J_e equivariance {je.residual:.2e} < 1e-10; "
                                 f"SU(2) homomorphism {hom.residual:.2e} < 1e-12")


def test_criterion_06_image_conditions(criterion_line):
    r = verify.image_conditions_check(SuiteConfig("poisson-maps", samples=SAMPLES, seed=SEED))
    ok = r.passed and r.samples >= 1000
    assert criterion_line(6, ok, f"image conditions at {r.samples} states: relative {r.residual:.2e} < {r.threshold:g}")


# Criterion 7 ---------------------------------------------------------------

J0 = np.array([0.3, 0.2, 0.5])
G0 = np.array([0.4, 0.1, 0.9])
CONSERVATION_SCENARIOS = ("euler", "kovalevskaya", "zhukovskii", "clebsch", "lmg")


def lifted_start(realization):
    if realization == "e3":
        return np.r_[J0, G0], None, None
    if realization == "twistor":
        return twistor_from_e3(J0, G0).as_real(), None, None
    if realization == "monopole":
        mu, p, y = monopole_from_e3(J0, G0)
        return np.r_[p, y], mu, None
    nu, y, p = sphere_from_e3(J0, G0)
    return np.r_[y, p], None, nu


def test_criterion_07_conservation(criterion_line):
    cfg = IntegratorConfig(method="rk4", dt=1e-3, t_max=10.0, record_stride=100)
    t0 = time.perf_counter()
    drift, failures = {}, []
    for name in CONSERVATION_SCENARIOS:
        system = build_system(name, DEFAULT_PARAMS[name])
        for realization in ("e3", "twistor", "monopole", "sphere"):
            x0, mu, nu = lifted_start(realization)
            rf = build_flow(system, realization, mu=mu, nu=nu)
            traj, rep = integrate(rf.flow, x0, cfg, rf.invariants)
            d = max(rep.max_rel.values())
            drift[(name, realization)] = d
            if traj.terminated_early or not d < 1e-6:
                failures.append(f"{name}/{realization}")
    elapsed = time.perf_counter() - t0
    key = max(drift, key=drift.get)
    ok = not failures and elapsed < 60.0
    text = (f"{len(drift)} scenario/realization runs, max relative drift {drift[key]:.2e} "
            f"({key[0]}/{key[1]}) < 1e-6; {elapsed:.1f} s < 60 s")
    if failures:
        text += f"; failing {', '.join(failures)}"
    assert criterion_line(7, ok, text)


def test_criterion_08_relatedness(criterion_line):
    report, elapsed = timed("relatedness")
    covered = {r.check.split(".")[2] for r in report.results}
    ok = report.passed and covered >= {"twistor", "monopole", "sphere"}
    assert criterion_line(8, ok, f"projected vs e(3)* trajectories, t in [0, 5], dt 1e-4: "
                                 f"{worst(report.results)}; {elapsed:.1f} s")


# Criterion 9 ---------------------------------------------------------------


def fd_gradient(f, x, rel=1e-3):
    """Five-point central differences with a step scaled to |x_i|."""
    g = np.zeros_like(x)
    for i in range(x.size):
        h = rel * max(1.0, abs(x[i]))
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (8 * (f(x + e) - f(x - e)) - (f(x + 2 * e) - f(x - 2 * e))) / (12 * h)
    return g


def fd_involution(scenario, realization, samples):
    cfg = SuiteConfig("involution", samples=samples, seed=SEED)
    system = build_system(scenario, DEFAULT_PARAMS[scenario])
    rf = build_flow(system, realization, mu=verify.REDUCED_MU, nu=verify.REDUCED_NU)
    smp = verify.Sampler(cfg, 71)
    draw = {"e3": smp.e3, "twistor": smp.twistor_real, "monopole": smp.monopole, "sphere": smp.moser}[realization]
    res = 0.0
    for _ in range(samples):
        x = draw()
        _, P = verify._declared(system, realization, x)
        pnorm = np.linalg.norm(P, 2)
        grads = [fd_gradient(f, x) for _, f in rf.invariants]
        for i, a in enumerate(grads):
            for b in grads[i + 1:]:
                res = max(res, abs(a @ P @ b) / max(1.0, np.linalg.norm(a) * pnorm * np.linalg.norm(b)))
    return res


def test_criterion_09_involution(criterion_line):
    report, _ = timed("involution")
    fd = {(s, r): fd_involution(s, r, SAMPLES)
          for s in verify.INVOLUTION_SCENARIOS for r in verify.INVOLUTION_REALIZATIONS}
    key = max(fd, key=fd.get)
    ok = report.passed and fd[key] < 1e-8
    assert criterion_line(9, ok, f"{len(fd)} integral sets; finite-difference worst {fd[key]:.2e} "
                                 f"({key[0]}/{key[1]}) < 1e-8; analytic {worst(report.results)}")


def test_criterion_10_charts(criterion_line):
    report, _ = timed("charts")
    free = report.result("charts.embedded_drift_free")
    proj = report.result("charts.embedded_drift_projected")
    trips = [r for r in report.results if r.check.endswith("roundtrip")]
    ok = report.passed
    assert criterion_line(10, ok, f"round trips {worst(trips)}; embedded drift free {free.residual:.2e} < 1e-8, "
                                  f"projected {proj.residual:.2e} < 1e-12")


def test_criterion_11_regression(criterion_line):
    report, _ = timed("regression")
    summary = report.result("regression.allowlist")
    table = {e["row"]: e for e in summary.details["deviation_table"]}
    deviating = [e for e in table.values() if e["observed"] == "deviates"]
    ok = (summary.passed and len(table) > 0
          and table["real.Gamma0"]["deviation"] < 1e-12
          and table["monopole.zhukovskii"]["deviation"] < 1e-12
          and all(e["citation"].strip() for e in deviating))
    assert criterion_line(11, ok, f"{len(table)} rows, {len(deviating)} deviating (all cited); Gamma0(q, pi) "
                                  f"{table['real.Gamma0']['deviation']:.1e}, monopole Zhukovskii "
                                  f"{table['monopole.zhukovskii']['deviation']:.1e}; allowlist mismatches "
                                  f"{int(summary.residual)}")


def test_criterion_12_rk4_order(criterion_line):
    f = e3_flat_field(GyrostatParams.euler((1.0, 2.0, 3.0)))
    x0 = np.r_[J0, G0]
    dts = [1 / 16, 1 / 32, 1 / 64, 1 / 128]
    ref = fixed_step_solution(f, x0, 2.0, 1 / 4096)
    slope, _ = convergence_exponent(f, x0, 2.0, dts, ref)
    assert criterion_line(12, 3.7 <= slope <= 4.3, f"RK4 exponent on the Euler top {slope:.3f} in [3.7, 4.3]")
