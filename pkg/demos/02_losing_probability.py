"""
How often hybrid NOMA fails to beat OMA
=======================================

Exact probability (closed form plus one quadrature), its high-SNR
approximation and a Monte Carlo estimate, for rho_n = rho_m and eta = 0.8.
The three agree where they should: simulation everywhere, the
approximation only at high SNR.
"""

from hybrid_noma import McConfig, SystemParams, estimate_p_wn, p_breakdown, p_wn_asymptotic, p_wn_exact

cfg = McConfig(samples=200_000, seed=1)

print(f"{'rho dB':>6} {'exact':>12} {'approx':>12} {'monte carlo':>12} {'z':>6}")
for db in range(0, 45, 5):
    p = SystemParams.from_db(db, db, eta=0.8, r0=1.0)
    exact = p_wn_exact(p)
    mc = estimate_p_wn(p, cfg)
    z = (mc.mean - exact) / mc.std_err if mc.std_err else float("nan")
    print(f"{db:6d} {exact:12.4e} {p_wn_asymptotic(p):12.4e} {mc.mean:12.4e} {z:6.2f}")

# The exact value is the sum of five region probabilities
bd = p_breakdown(SystemParams.from_db(20, 20, eta=0.8, r0=1.0))
print("\nregions at 20 dB:", {k: f"{v:.3e}" for k, v in bd.components().items()}, f"sum {bd.total:.6e}")
