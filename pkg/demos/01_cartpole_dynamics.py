#!/usr/bin/env python3
"""Tour of the cart-pole plant: equilibria, integration accuracy, linearization.

Run from anywhere after `pip install -e .`:

    python demos/01_cartpole_dynamics.py
"""

import math

import numpy as np

from wncs import PlantParams, PlantState, derivative, linearize, step, total_energy

params = PlantParams()
print("plant:", params)

# The upright position is an equilibrium: zero rates, and it is exactly zero
# because sin(0) == 0 in floating point. Hanging straight down is one too,
# up to the roundoff of sin(pi).
print("\nrates at upright rest:", derivative(PlantState(), 0.0, params))
print("rates at hanging rest:", derivative(PlantState(theta=math.pi), 0.0, params))

# Push the cart with 1 N from upright: the cart accelerates at F/M and the
# pendulum, attached above the cart, tips backward.
frictionless = PlantParams(cart_friction=0.0)
print("rates with F=1 N, no friction:", derivative(PlantState(), 1.0, frictionless))

# RK4 order check: integrate a free swing for one second at two step sizes
# and compare against a much finer run. Halving the step should shrink the
# endpoint error by roughly 2^4.
free = PlantParams(cart_friction=0.0, force_limit=None)


def endpoint(dt: float) -> np.ndarray:
    state = PlantState(theta=0.1)
    for _ in range(round(1.0 / dt)):
        state = step(state, 0.0, dt, free)
    return np.array(state.as_tuple())


reference = endpoint(1.0 / 16000)
for dt in (4e-3, 2e-3, 1e-3):
    err = np.max(np.abs(endpoint(dt) - reference))
    print(f"dt={dt:.0e}  endpoint error vs fine run: {err:.3e}")

# Energy bookkeeping: without friction and force, total energy is conserved
# to ~1e-11 relative over ten seconds of swinging.
state = PlantState(theta=0.1)
e0 = total_energy(state, free)
for _ in range(10_000):
    state = step(state, 0.0, 1e-3, free)
print(f"\nenergy drift over 10 s: {abs(total_energy(state, free) - e0):.3e} J")

# The linearization about upright feeds the controller design. Cross-check
# one entry against its closed form (M+m)g/(Ml).
model = linearize(params)
print("\nA =\n", model.a)
print("B =", model.b.ravel())
expected = (params.cart_mass + params.pole_mass) * params.gravity / (
    params.cart_mass * params.pole_length
)
print("A[3,1] matches (M+m)g/(Ml):", math.isclose(model.a[3, 1], expected))
