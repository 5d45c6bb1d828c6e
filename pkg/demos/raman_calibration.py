"""From physical beam parameters to the normalized model inputs.

Everything in the dynamics modules is expressed in units of the sideband
coupling g.  This script walks the physics route to those numbers for a
9Be+ ion: Raman beam couplings and geometry give the effective g, the
ground-state size x0 and the Lamb-Dicke parameter; a measured base
decoherence rate then becomes the dimensionless gamma0_tilde.
"""

import math

import ionjc

# 9Be+ in an 11.2 MHz trap, counter-propagating Raman beams near 313 nm
inputs = ionjc.RamanInputs(
    g01=2 * math.pi * 30e6,
    g02=2 * math.pi * 30e6,
    Delta=2 * math.pi * 12e9,
    k1x=2 * math.pi / 313e-9,
    k2x=-2 * math.pi / 313e-9,
    mass=1.496e-26,
    omega_x=2 * math.pi * 11.2e6,
)
out = ionjc.raman_coupling(inputs)

print(f"ground-state size       x0  = {out.x0 * 1e9:.2f} nm")
print(f"Lamb-Dicke parameter    eta = {out.eta:.3f}")
print(f"light shifts            Delta_1/2pi = {out.delta_1 / (2 * math.pi) / 1e3:.1f} kHz, "
      f"Delta_2/2pi = {out.delta_2 / (2 * math.pi) / 1e3:.1f} kHz")
print(f"sideband coupling       |g|/2pi = {abs(out.g) / (2 * math.pi) / 1e3:.1f} kHz")

# the reference experiment: g/2pi = 94 kHz and a measured base rate of
# 11.9 kHz for the slowest component
g = 2 * math.pi * 94e3
gamma0 = 11.9e3
gamma0_tilde = ionjc.normalized_rate(gamma0, g)
print(f"\nreference point: g/2pi = 94 kHz, gamma0 = 11.9 kHz")
print(f"normalized gamma0_tilde = {gamma0_tilde:.6f} = {gamma0_tilde * 2 * math.pi:.4f}/2pi")

# first few dressed splittings in physical units
params = ionjc.SystemParams(g=g, omega_x=inputs.omega_x)
for n in range(4):
    print(f"Omega_{n}/2pi = {ionjc.rabi_freq(n, params) / (2 * math.pi) / 1e3:.1f} kHz")
