# Copyright 2026 The deco Authors
# SPDX-License-Identifier: Apache-2.0
"""Smoke test for the `deco` Python module.

Build and install the extension first, e.g.

    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/deco-*.whl

then run `python python/smoke_test.py` from the repository root.
"""

import json
import math
import pathlib

import deco

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "crates" / "cli" / "fixtures"

SZ = [[1, 0], [0, -1]]
PLUS = [[0.5, 0.5], [0.5, 0.5]]


def close(a, b, tol):
    return abs(a - b) <= tol


def check_kernels():
    assert close(deco.fdr_kernel(0.0, 2.0), 4.0, 1e-12)
    hot = deco.ThermalReservoir("drude", 1.0, 8.0, 4.0)
    cold = deco.ThermalReservoir("drude", 0.5, 4.0, 1.0)
    assert hot.correlation(1.0) > cold.correlation(1.0)
    k = deco.Kernel.thermal(hot)
    assert k.channels == 1
    assert k.check_positive()["is_psd"]
    result = deco.compare_environments(k, deco.Kernel.thermal(cold))
    assert result["verdict"] == "StrictlyGreater", result
    lutz = deco.lutz_compare(0.5, 6.0, 2.0, 3.0, 0.5)
    assert lutz["verdict"] == "StrictlyGreater", lutz
    t_star, residual = deco.fdr_fit([hot])
    assert close(t_star, 4.0, 1e-6) and residual < 1e-6, (t_star, residual)


def check_dephasing():
    c, t = 0.5, 2.0
    free = deco.System([[0, 0], [0, 0]], [(SZ, 0)])
    noise = deco.Kernel.white_noise(c)
    delta = deco.algebraic_dissipator(free, noise, t)
    assert len(delta) == 4 and len(delta[0]) == 4
    assert close(sum(delta[i][i].real for i in range(4)), 2 * c * t, 1e-9), delta
    rho = deco.magnus_propagate(free, noise, t, PLUS)
    assert close(abs(rho[0][1]), 0.5 * math.exp(-2 * c * t), 1e-6), rho
    times, states = deco.master_equation_evolve(free, noise, 1.0, 0.05, PLUS)
    assert close(times[-1], 1.0, 1e-12)
    assert close(abs(states[-1][0][1]), 0.5 * math.exp(-2 * c), 1e-6)
    assert close(deco.trace_distance(PLUS, PLUS), 0.0, 1e-15)
    assert close(deco.trace_distance([[1, 0], [0, 0]], [[0, 0], [0, 1]]), 1.0, 1e-12)


def check_run():
    text = (FIXTURES / "strong_hot.json").read_text()
    other = (FIXTURES / "weak_cold.json").read_text()
    report = json.loads(deco.run("compare", text, scenario_b=other))
    assert report["command"] == "compare"
    assert report["outputs"]["verdict"] == "StrictlyGreater", report
    assert report["inputs_digest"].startswith("sha256:")
    csv = deco.run("compare", text, scenario_b=other, format="csv")
    assert csv.splitlines()[0].startswith("verdict")
    try:
        deco.run("kernels", "{")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed scenario accepted")


def main():
    check_kernels()
    check_dephasing()
    check_run()
    print(f"deco {deco.__version__}: python smoke test passed")


if __name__ == "__main__":
    main()
