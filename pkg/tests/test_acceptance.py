"""Acceptance suite: one recorded PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py``; the verdicts are printed in the
"acceptance criteria" section of the terminal summary.
"""

import math
import time

import numpy as np

from qwalk2d import (
    HADAMARD,
    Alternate,
    CoinParams,
    CoinState2,
    Grover,
    calibrate_convention,
    convergence_report,
    density_moment,
    density_normalization,
    distribution_distance,
    grover_equivalent_init,
    limit_moment,
    new_state,
    probability_grid,
    random_state,
    recurrence_oracle_alternate,
    recurrence_oracle_grover,
    theorem1_residual,
    verify_pairing,
)
from qwalk2d.entanglement import REFERENCE_T10, entanglement_sweep, phi_grid, theta_grid, walk_negativity
from qwalk2d.walks import trajectory

TOL = 1e-12
ORDERS = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_criterion_01_hadamard_equivalence(verdict):
    start = time.perf_counter()
    alt = trajectory(new_state(CoinState2.symmetric(), 50), Alternate(), 50)
    gro = trajectory(new_state(grover_equivalent_init(HADAMARD, 0), 50), Grover(), 50)
    dist = amp = 0.0
    for a, g in zip(alt, gro):
        dist = max(dist, distribution_distance(probability_grid(a), probability_grid(g)))
        amp = max(amp, theorem1_residual(a, g))
    elapsed = time.perf_counter() - start
    ok = dist <= TOL and elapsed < 5.0
    verdict(1, ok, f"max|dP|={dist:.2e} amplitude={amp:.2e} runtime={elapsed:.2f}s")
    assert dist <= TOL
    assert elapsed < 5.0


def test_criterion_02_generalized_equivalence(verdict):
    dist = amp = 0.0
    for gamma in (math.pi / 6, math.pi / 3, 1.0):
        for xi in (0, 1):
            for kappa in (0, 1):
                rep = verify_pairing(CoinParams(gamma), xi, kappa, t_max=20)
                dist = max(dist, rep["distribution"].max_abs)
                amp = max(amp, rep["mapping"].max_abs)
    ok = dist <= TOL and amp <= TOL
    verdict(2, ok, f"distribution={dist:.2e} mapping={amp:.2e}")
    assert ok


def test_criterion_03_lemma_identities(verdict):
    worst = {}
    for gamma in (math.pi / 4, math.pi / 6, math.pi / 3, 1.0):
        for xi in (0, 1):
            rep = verify_pairing(CoinParams(gamma), xi, 0, t_max=25)
            worst[gamma] = max(worst.get(gamma, 0.0), rep["lemma1"].max_abs)
    res = max(worst.values())
    verdict(3, res <= TOL, f"unweighted={worst[math.pi / 4]:.2e} weighted={max(v for g, v in worst.items() if g != math.pi / 4):.2e}")
    assert res <= TOL


def test_criterion_04_negativity_reproduction(verdict):
    cal = calibrate_convention(t=10, tol=5e-4)
    conv = cal["chosen"]
    vals = cal["values"]
    raw = ", ".join(f"{k}: support={v['support']:.6f} window={v['window']:.6f}" for k, v in vals.items())
    if conv is not None:
        ok = all(abs(vals[k][conv] - REFERENCE_T10[k]) <= 5e-4 for k in REFERENCE_T10)
        detail = f"convention={conv} ({raw})"
    else:
        ratio = vals["symmetric"]["support"] / vals["ket1"]["support"]
        ok = abs(ratio - REFERENCE_T10["symmetric"] / REFERENCE_T10["ket1"]) <= 1e-3
        detail = f"no convention matched, ratio={ratio:.6f} ({raw})"
    verdict(4, ok, detail)
    assert ok


def test_criterion_05_entanglement_ordering(verdict):
    # t=1 leaves both walks in product states, so both negativities are 0 and
    # the strict inequality cannot hold there; the check is kept strict.
    failing = []
    rows = []
    for t in range(1, 21):
        alt = walk_negativity(Alternate(), CoinState2(0, 1), t).value
        gro = walk_negativity(Grover(), grover_equivalent_init(HADAMARD, 0), t).value
        rows.append((t, alt, gro))
        if not alt > gro:
            failing.append(t)
    ok = not failing
    sample = "; ".join(f"t={t}: {a:.5f}>{g:.5f}" for t, a, g in rows if t in (1, 2, 10, 20))
    verdict(5, ok, f"failing t={failing or 'none'} ({sample})")
    assert ok, f"strict ordering fails at t={failing}: " + str([r for r in rows if r[0] in failing])


def test_criterion_06_sweep_structure(verdict):
    thetas, phis = theta_grid(20), phi_grid(20)
    rows = entanglement_sweep(thetas, phis, 10)
    surface = rows[:, 2].reshape(len(phis), len(thetas))
    best = surface.max()
    dist = (thetas[None, :] - math.pi / 2) ** 2 + (phis[:, None] - math.pi / 2) ** 2
    nearest = dist <= dist.min() + 1e-12
    argmax_ok = bool(np.all(surface[nearest] >= best - 1e-9))
    half = len(phis) // 2
    period = float(np.abs(surface - np.roll(surface, -half, axis=0)).max())
    ok = argmax_ok and period <= 1e-9
    verdict(6, ok, f"max={best:.7f} nearest-point values={np.round(surface[nearest], 9).tolist()} |N(phi)-N(phi+pi)|={period:.1e}")
    assert ok


def test_criterion_07_conservation_and_parity(verdict):
    worst_norm = worst_parity = 0.0
    support_ok = True
    cases = [
        (Alternate(), CoinState2.symmetric()),
        (Alternate(), CoinState2(0, 1)),
        (Alternate(CoinParams(1.0)), CoinState2.from_bloch(0.7, 2.1)),
        (Grover(), grover_equivalent_init(HADAMARD, 0)),
        (Grover(CoinParams(1.0)), grover_equivalent_init(CoinParams(1.0), 1)),
    ]
    for kind, init in cases:
        for state in trajectory(new_state(init, 100), kind, 100):
            worst_norm = max(worst_norm, abs(state.norm() - 1.0))
            x = y = state.coords
            prob = np.sum(np.abs(state.amps) ** 2, axis=2)
            off = ((x[:, None] + state.t) % 2 == 1) | ((y[None, :] + state.t) % 2 == 1)
            worst_parity = max(worst_parity, float(np.abs(state.amps[off]).max(initial=0.0)))
            outside = (np.abs(x)[:, None] > state.t) | (np.abs(y)[None, :] > state.t)
            support_ok &= not np.any(prob[outside] != 0)
    ok = worst_norm <= TOL and worst_parity == 0.0 and support_ok
    verdict(7, ok, f"norm={worst_norm:.2e} off-parity max={worst_parity} support ok={support_ok}")
    assert ok


def test_criterion_08_mirror_symmetries(verdict):
    h = 1 / math.sqrt(2)
    walk = Alternate()
    runs = {
        name: trajectory(new_state(init, 25), walk, 25)
        for name, init in {
            "ket0": CoinState2(1, 0),
            "ket1": CoinState2(0, 1),
            "psi2": CoinState2(h, -h),
            "psi2_orth": CoinState2(h, h),
            "sym": CoinState2.symmetric(),
        }.items()
    }
    flip_y = flip_x = sym = 0.0
    for states in zip(*runs.values()):
        p = {name: probability_grid(s).values for name, s in zip(runs, states)}
        flip_y = max(flip_y, float(np.abs(p["ket0"] - p["ket1"][:, ::-1]).max()))
        flip_x = max(flip_x, float(np.abs(p["psi2"] - p["psi2_orth"][::-1, :]).max()))
        sym = max(sym, float(np.abs(p["sym"] - p["sym"][::-1, :]).max()), float(np.abs(p["sym"] - p["sym"][:, ::-1]).max()))
    ok = max(flip_y, flip_x, sym) <= TOL
    verdict(8, ok, f"|0>/|1> y-mirror={flip_y:.2e} psi2 x-mirror={flip_x:.2e} symmetric init={sym:.2e}")
    assert ok


def test_criterion_09_limit_law(verdict):
    start = time.perf_counter()
    norm = density_normalization(HADAMARD, CoinState2.symmetric())
    side_gap = 0.0
    inits = {"symmetric": CoinState2.symmetric(), "ket1": CoinState2(0, 1)}
    for init in inits.values():
        for r1, r2 in ORDERS:
            side_gap = max(side_gap, abs(limit_moment(r1, r2, HADAMARD, init) - density_moment(r1, r2, HADAMARD, init)))
    gap400 = 0.0
    not_closer = []
    for name, init in inits.items():
        rows = convergence_report(HADAMARD, init, t_list=(100, 400))
        by = {(r["t"], r["r1"], r["r2"]): r["gap"] for r in rows}
        for r1, r2 in {(r["r1"], r["r2"]) for r in rows}:
            g100, g400 = by[(100, r1, r2)], by[(400, r1, r2)]
            gap400 = max(gap400, g400)
            # moments that vanish by symmetry sit at rounding level at every t
            if g100 > 1e-12 and not g400 < g100:
                not_closer.append((name, r1, r2))
    elapsed = time.perf_counter() - start
    ok = abs(norm - 1) <= 1e-3 and side_gap <= 1e-3 and gap400 <= 0.02 and not not_closer and elapsed < 60
    verdict(
        9,
        ok,
        f"|int f - 1|={abs(norm - 1):.1e} fourier/density={side_gap:.1e} gap(t=400)={gap400:.1e} "
        f"not-closer={not_closer or 'none'} runtime={elapsed:.1f}s",
    )
    assert ok


def test_criterion_10_oracle_equivalence(verdict):
    rng = np.random.default_rng(7)
    worst = {"alternate": 0.0, "grover": 0.0}
    for _ in range(50):
        gamma = rng.uniform(0.1, 1.4)
        t = int(rng.integers(0, 8))
        window = t + int(rng.integers(1, 4))
        a = random_state(2, t, window, rng)
        walk = Alternate(CoinParams(gamma))
        worst["alternate"] = max(
            worst["alternate"], float(np.abs(walk.step(a).amps - recurrence_oracle_alternate(a, walk.coin()).amps).max())
        )
        g = random_state(4, t, window, rng)
        gwalk = Grover(CoinParams(gamma))
        worst["grover"] = max(
            worst["grover"], float(np.abs(gwalk.step(g).amps - recurrence_oracle_grover(g, gwalk.coin()).amps).max())
        )
    ok = max(worst.values()) <= 1e-13
    verdict(10, ok, f"alternate={worst['alternate']:.1e} grover={worst['grover']:.1e} over 50 states each")
    assert ok
