import numpy as np
from hybrid_noma.model import ChannelGains, SystemParams, db_to_linear


# filled by tests/test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_instances(n, seed=12345, etas=(0.5, 0.8, 1.0), r0s=(0.5, 1.0, 2.0)):
    """Random (params, gains) pairs: powers uniform in dB over [0, 40], gains ~ exp(1)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        rho_n, rho_m = db_to_linear(rng.uniform(0, 40, size=2))
        params = SystemParams(float(rho_n), float(rho_m), float(rng.choice(etas)), float(rng.choice(r0s)))
        gains = ChannelGains(float(rng.exponential()), float(rng.exponential()))
        out.append((params, gains))
    return out
