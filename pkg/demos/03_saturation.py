"""
Raising only one transmit power is not enough
=============================================

With rho_n fixed the losing probability levels off as rho_m grows, and
vice versa. The floors have simple closed forms.
"""

from hybrid_noma import SystemParams, p_wn_exact, p_wn_limit_fixed_rho_m, p_wn_limit_fixed_rho_n

eta, r0 = 0.8, 1.0

print("rho_n fixed, rho_m growing")
for db_n in (10, 20, 30):
    row = [p_wn_exact(SystemParams.from_db(db_n, db_m, eta, r0)) for db_m in (10, 20, 40, 60)]
    floor = p_wn_limit_fixed_rho_n(SystemParams.from_db(db_n, 0, eta, r0))
    print(f"  rho_n={db_n} dB: " + "  ".join(f"{v:.3e}" for v in row) + f"  -> floor {floor:.3e}")

print("rho_m fixed, rho_n growing")
for db_m in (10, 20, 30):
    row = [p_wn_exact(SystemParams.from_db(db_n, db_m, eta, r0)) for db_n in (10, 20, 40, 60)]
    floor = p_wn_limit_fixed_rho_m(SystemParams.from_db(0, db_m, eta, r0))
    print(f"  rho_m={db_m} dB: " + "  ".join(f"{v:.3e}" for v in row) + f"  -> floor {floor:.3e}")
