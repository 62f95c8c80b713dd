"""Acceptance criteria, one test per criterion, each reporting PASS/FAIL."""

import math
import subprocess
import sys

import numpy as np
import pytest

from epdyn.evolution import ep_energy, evolve_at_ep, evolve_auto, evolve_closed
from epdyn.jordan import (
    ep_jordan_form,
    evolve_jordan,
    evolve_model_jordan,
    jordan_matrix,
    schrodinger_generator,
)
from epdyn.model import StateVector, rotated_hamiltonian
from epdyn.numerics import expm_apply
from epdyn.spectral import (
    critical_lambda,
    discriminant_coefficient,
    eigenvalues,
    eigenvectors,
    exceptional_points,
)
from epdyn.sweep import (
    T_MAX_CRITICAL,
    T_MAX_SEPARATED,
    beat_maxima,
    envelope_fit,
    time_series,
    width_and_beat,
)

N_DRAWS = 1000


def rel(a, b):
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) / np.linalg.norm(b)


def test_1_discriminant_factorization(rng, draws, criterion):
    worst = 0.0
    for _ in range(N_DRAWS):
        p = draws.params(rng)
        eps = exceptional_points(p)
        lam = rng.uniform(0, 1, N_DRAWS) + 1j * rng.uniform(-0.02, 0.02, N_DRAWS)
        detune = p.omega1 - p.omega2 + lam * (p.epsilon1 - p.epsilon2)
        coupling = 2 * lam * p.delta
        exact = detune**2 + coupling**2
        factored = discriminant_coefficient(p) * (lam - eps.ep1) * (lam - eps.ep2)
        scale = np.abs(detune) ** 2 + np.abs(coupling) ** 2
        worst = max(worst, float(np.max(np.abs(factored - exact) / scale)))
    criterion("1 discriminant factorization", worst <= 1e-12, f"max rel {worst:.2e}, tol 1e-12")


def test_2_oracle_equivalence(rng, draws, paper, criterion):
    worst = 0.0
    for _ in range(N_DRAWS):
        p, lam = draws.params(rng), draws.lam(rng)
        s = StateVector.from_array(draws.state(rng))
        t = rng.uniform(0, 600)
        ref = expm_apply(-1j * rotated_hamiltonian(p, lam), s.as_array(), t)
        worst = max(worst, rel(evolve_closed(p, lam, s, t).as_array(), ref))
    worst_paper = 0.0
    for lam in (0.53, 0.563, 0.59):
        for _ in range(50):
            s = StateVector.from_array(draws.state(rng))
            t = rng.uniform(0, 600)
            ref = expm_apply(-1j * rotated_hamiltonian(paper, lam), s.as_array(), t)
            worst_paper = max(worst_paper, rel(evolve_closed(paper, lam, s, t).as_array(), ref))
    ok = worst <= 1e-10 and worst_paper <= 1e-10
    criterion(
        "2 closed form vs matrix exponential",
        ok,
        f"random max rel {worst:.2e}, preset max rel {worst_paper:.2e}, tol 1e-10",
    )


def test_3_linear_in_time_at_eps(paper, criterion):
    eps = exceptional_points(paper)
    energies = {"EP1": ep_energy(paper), "EP2": ep_energy(paper.flipped())}
    worst = 0.0
    for branch in ("EP1", "EP2"):
        lam, e = eps[branch], energies[branch]
        for psi0 in (StateVector(0, 1), StateVector(1, 0)):
            for evolve in (
                lambda t: evolve_auto(paper, lam, psi0, t).state,
                lambda t: evolve_closed(paper, lam, psi0, t),
            ):
                for h in (0.1, 1.0, 10.0):
                    for t in np.linspace(h, 300.0, 25):
                        g = [evolve(x).as_array() * np.exp(1j * e * x) for x in (t - h, t, t + h)]
                        scale = max(np.abs(v).max() for v in g)
                        worst = max(worst, np.abs(g[0] - 2 * g[1] + g[2]).max() / scale)
    criterion("3 linear-in-t amplitudes at both EPs", worst <= 1e-10, f"max {worst:.2e}, tol 1e-10")


def test_4_jordan_consistency(rng, paper, criterion):
    eps = exceptional_points(paper)
    worst_path = worst_recon = worst_assoc = 0.0
    for branch in ("EP1", "EP2"):
        jf = ep_jordan_form(paper, branch)
        o = schrodinger_generator(rotated_hamiltonian(paper, eps[branch]))
        norm = np.linalg.norm(o, 2)
        worst_recon = max(
            worst_recon, np.linalg.norm(jf.s @ jf.j @ np.linalg.inv(jf.s) - o, 2) / norm
        )
        resid = (o - jf.e_ep * np.eye(2)) @ jf.phi_assoc - jf.phi_ep
        worst_assoc = max(worst_assoc, np.linalg.norm(resid) / (norm * np.linalg.norm(jf.phi_assoc)))
        for _ in range(100):
            s = StateVector.from_array(rng.normal(size=2) + 1j * rng.normal(size=2))
            t = rng.uniform(0, 300)
            worst_path = max(
                worst_path,
                rel(evolve_model_jordan(paper, branch, s, t).as_array(),
                    evolve_at_ep(paper, branch, s, t).as_array()),
            )

    worst_kfold = 0.0
    largest = 0
    for trial in range(300):
        n = 6 if trial % 3 == 0 else int(rng.integers(1, 7))
        blocks, left = [], n
        if trial % 3 == 0:
            blocks.append((complex(rng.uniform(-1, 0.2), rng.uniform(-2, 2)), 4))
            left -= 4
        while left:
            k = int(rng.integers(1, min(4, left) + 1))
            blocks.append((complex(rng.uniform(-1, 0.2), rng.uniform(-2, 2)), k))
            left -= k
        largest = max(largest, max(k for _, k in blocks))
        while True:
            s = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            if np.linalg.cond(s) < 1e3:
                break
        o = s @ jordan_matrix(blocks) @ np.linalg.inv(s)
        c0 = rng.normal(size=n) + 1j * rng.normal(size=n)
        t = rng.uniform(0, 3)
        worst_kfold = max(worst_kfold, rel(evolve_jordan(blocks, s, c0, t), expm_apply(o, c0, t)))

    ok = (
        worst_path <= 1e-9
        and worst_recon <= 1e-10
        and worst_assoc <= 1e-10
        and worst_kfold <= 1e-10
        and largest == 4
    )
    criterion(
        "4 Jordan consistency",
        ok,
        f"path {worst_path:.1e}, reconstruction {worst_recon:.1e}, "
        f"associate {worst_assoc:.1e}, k-fold {worst_kfold:.1e}",
    )


def test_5_paper_numbers(paper, criterion):
    lam_c = critical_lambda(paper, 0.53, 0.59)
    wb = width_and_beat(eigenvalues(paper, 0.53))
    wc = width_and_beat(eigenvalues(paper, lam_c))
    eps = exceptional_points(paper)
    checks = {
        "lambda_c": abs(lam_c - 0.563) <= 0.001,
        "delta_e": abs(wb.delta_e / 0.025 - 1) <= 0.15,
        "gamma1": abs(wb.gamma1 / 0.007 - 1) <= 0.15,
        "gamma2": abs(wb.gamma2 / 0.007 - 1) <= 0.15,
        "gamma_top": abs(wc.top / 0.0005 - 1) <= 0.20,
        "gamma_bot": abs(wc.bottom / 0.013 - 1) <= 0.20,
        "eps": all(0.53 < ep.real < 0.59 and -0.005 < ep.imag < 0 for ep in (eps.ep1, eps.ep2)),
    }
    failed = [k for k, v in checks.items() if not v]
    criterion(
        "5 preset numbers",
        not failed,
        f"lambda_c {lam_c:.5f}, dE {wb.delta_e:.4f}, widths {wb.gamma1:.5f}/{wb.gamma2:.5f}, "
        f"top/bot {wc.top:.5f}/{wc.bottom:.5f}" + (f", failed {failed}" if failed else ""),
    )


def test_6_beats_and_takeover(paper, criterion):
    wb = width_and_beat(eigenvalues(paper, 0.53))
    period = 2 * math.pi / wb.delta_e
    sep = time_series(paper, 0.53, StateVector(0, 1), T_MAX_SEPARATED)
    # maxima of |z2| (the t=0 start included) while it is still above 0.1
    peaks = beat_maxima(sep, "z2", floor=0.1, include_start=True)
    spacing = np.diff(peaks)
    beats_ok = peaks.size >= 2 and bool(np.all(np.abs(spacing / period - 1) <= 0.05))

    lam_c = critical_lambda(paper, 0.53, 0.59)
    crit = time_series(paper, lam_c, StateVector(0, 1), T_MAX_CRITICAL)
    no_beat = beat_maxima(crit, "z2").size == 0

    lead = time_series(paper, lam_c, StateVector(1, 0), T_MAX_SEPARATED)
    a1, a2 = np.abs(lead.component("z1")), np.abs(lead.component("z2"))
    ahead = np.flatnonzero(a2 > a1)
    takeover = ahead.size > 0 and bool(np.all(a2[ahead[0]:] > a1[ahead[0]:]))
    gamma_after = envelope_fit(lead.after(lead.times[ahead[0]]), "z2") if takeover else float("nan")
    wc_top = width_and_beat(eigenvalues(paper, lam_c)).top
    takeover = takeover and abs(gamma_after - wc_top) <= 0.0002
    t_star = lead.times[ahead[0]] if ahead.size else float("nan")

    criterion(
        "6 beats, beat loss and takeover",
        beats_ok and no_beat and takeover,
        f"maxima at {np.round(peaks, 1).tolist()} vs period {period:.1f}; "
        f"critical beat maxima {beat_maxima(crit, 'z2').size}; "
        f"t* {t_star:.1f}, width after {gamma_after:.5f} vs {wc_top:.5f}",
    )


def _norm_slope(params, ep, direction, lo, hi):
    dist = np.logspace(lo, hi, 25)
    norms = [abs(eigenvectors(params, ep + r * direction).n1) for r in dist]
    return np.polyfit(np.log(dist), np.log(norms), 1)[0]


def test_7_norm_collapse(paper, criterion):
    ep1 = exceptional_points(paper).ep1
    # the ray lambda = ep1 * (1 + r), with |lambda - ep1| over [1e-6, 1e-3]
    ray = _norm_slope(paper, ep1, ep1 / abs(ep1), -6, -3)
    # closer in, the leading exponent must not depend on the approach direction
    near = [
        _norm_slope(paper, ep1, np.exp(1j * phase), -7, -5)
        for phase in np.linspace(0, 2 * math.pi, 16, endpoint=False)
    ]
    worst_near = max(abs(x - 0.25) for x in near)
    criterion(
        "7 c-norm collapse exponent",
        abs(ray - 0.25) <= 0.02 and worst_near <= 0.02,
        f"ray slope {ray:.4f}; 16 directions near EP within {worst_near:.4f} of 1/4",
    )


SUBCOMMANDS = [
    ["spectrum", "--lambda", "0.53"],
    ["eps"],
    ["evolve", "--lambda", "0.563", "--psi0", "0,1", "--tmax", "300", "--steps", "2000"],
    ["sweep", "--from", "0.53", "--to", "0.59", "--n", "400"],
    ["critical", "--from", "0.53", "--to", "0.59"],
    ["jordan", "--ep", "1"],
    ["jordan", "--ep", "2"],
]


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_8_cli_determinism(criterion, fmt):
    differing = []
    for argv in SUBCOMMANDS:
        cmd = [sys.executable, "-m", "epdyn", *argv, "--preset", "paper", "--format", fmt]
        outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
        if outs[0] != outs[1] or not outs[0]:
            differing.append(argv[0])
    criterion(
        f"8 CLI byte-identical reruns ({fmt})",
        not differing,
        f"{len(SUBCOMMANDS)} subcommands" + (f", differing {differing}" if differing else ""),
    )
