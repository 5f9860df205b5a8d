"""
Optimal power split for one channel realization
===============================================

U_n may spend part of its power in U_m's slot, as long as the base station
can still decode U_m first. This walks through one realization: the
interference budget, the closed-form split, a brute-force check, and
whether the hybrid scheme beats full-power OMA while using less energy.
"""

from hybrid_noma import ChannelGains, SystemParams, compare, grid_oracle, optimal_split, tau_m

# 10 dB for both users, 80% of the OMA energy budget, U_m needs 1 bit/use
params = SystemParams.from_db(10, 10, eta=0.8, r0=1.0)

for g_m, g_n in [(0.05, 1.0), (1.0, 1.0), (0.3, 1.0), (1.0, 0.02)]:
    gains = ChannelGains(g_m, g_n)
    split = optimal_split(params, gains)
    oracle_split, oracle_rate = grid_oracle(params, gains, 10**5)
    out = compare(params, gains)
    print(f"g_m={g_m:<5} g_n={g_n:<5} tau_m={tau_m(params, g_m):6.3f}  "
          f"beta=({split.beta1:.4f}, {split.beta2:.4f})  grid beta1={oracle_split.beta1:.4f}")
    print(f"    hybrid {out.hybrid_rate:.4f} BPCU (grid {oracle_rate:.4f})  OMA {out.oma_rate:.4f} BPCU  "
          f"wins={out.hybrid_wins}  energy {out.energy_hybrid:.1f} vs {out.energy_oma:.1f}")

# With no interference budget (first row) U_n stays in its own slot and, at
# eta < 1, loses to OMA. With a budget it always takes some of U_m's slot.
