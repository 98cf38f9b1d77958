"""Closed-form error budgets: photon loss, QND deviation, memory crossover,
and quenched-anyon contrast, each against its independent check.

Run:  python demos/error_budgets.py
"""

import math

import numpy as np

from anyonsim import analytics as an
from anyonsim import lattice as lat
from anyonsim import oracle

# 1. Photon loss of a controlled string on N spins through a cavity with
#    Purcell factor P: minimized over the detuning.
params = an.CavityParams(g=1.0, kappa=1e-3, gamma=1e-3)
n = 16
print(f"Purcell factor P = {params.purcell:.0f}")
print(f"optimal detuning = {an.optimal_detuning(params, n):.3f}")
print(f"single-photon loss = {an.min_photon_loss(n, params.purcell):.5f} "
      f"(= 2 pi sqrt(N/P))")
print(f"geometric-gate loss at |alpha|^2 = pi/2: "
      f"{an.geometric_gate_loss(n, params.purcell, math.pi / 2):.5f}")
check, = oracle.budget_minimization_suite(n_draws=20, seed=0)
print(f"numeric minimization cross-check: "
      f"{'ok' if check.passed else 'BROKEN'} ({check.detail})")

# 2. QND deviation with composite-pulse suppression.
print(f"\nQND error, N=10, theta=pi/2, delta=1%: "
      f"{an.qnd_error(10, math.pi / 2, 0.01):.4f}; "
      f"k=3 composite pulses ({an.qnd_pulse_count(3):.0f} pulses): "
      f"{an.qnd_error(10, math.pi / 2, 0.01, 3):.2e}")

# 3. When does the protected memory beat a bare spin?
budget = an.MemoryBudget(delta_h=0.1, coupling_j=1.0, n_length=5, q=1e-3,
                         purcell=1e6, epsilon=1e-4)
t_star = an.crossover_time(budget)
print(f"\nmemory budget: access cost {an.memory_error(budget, 0):.5f}, "
      f"protection factor {budget.protection:.1e}")
print(f"crossover storage time t* = {t_star:.1f} "
      f"(beyond this the encoded qubit wins)")

# 4. Quenched anyons left by imperfect initialization reduce the braiding
#    contrast by the pair-straddling probability of the loops.
n_lat = 4
for m in (0, 2, 8):
    print(f"q_m for m={m} on torus({n_lat}): "
          f"{an.quenched_phase_prob(n_lat, m):.4f} "
          f"(enumeration: "
          f"{an.quenched_enumeration_oracle(n_lat, set(range(m))):.4f})")
model = an.QuenchedModel(n=4, m=4, m_prime=2, p=0.2)
print(f"contrast with p=0.2, loops enclosing (4 faces, 2 vertices): "
      f"{an.quenched_contrast(model):.4f}; diffusive limit "
      f"{an.quenched_contrast(model, diffusive=True):.4f}")
print("planted-pair interferometry on torus(4):",
      f"{oracle.quenched_contrast_mc(lat.torus(4), 0.2, 800, 5).mean:.4f}")

# 5. Both loop-error laws at once: string errors cost per edge (length law),
#    initialization errors per enclosed cell (area law).
report = an.contrast_vs_loop(perimeter=14, eps_s=0.01, model=model)
print(f"\nperimeter 14 at 1% edge error: string factor "
      f"{report.string_factor:.4f}, init factor {report.init_factor:.4f}, "
      f"combined {report.combined:.4f}")
mc = oracle.perimeter_law_mc(lat.torus(4), eps=0.05, n_trials=2000, seed=1)
print(f"Monte Carlo length-law slope {mc.slope:.5f} vs ln(1-eps) = "
      f"{mc.predicted_slope:.5f}")
