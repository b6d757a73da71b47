"""Synthetic run directories following the solver's file contracts.

Built from literal strings on purpose: the reporter must work from the
documented contract alone, without importing the solver.
"""

import json

import pytest

CONFIG_TEXT = """\
[grid]
n = 16
box_side = 25.132741228718345

[recipe]
epsilon = 0.2
profile = exp-smoothstep
v0_amplitude = 0.0
c0_amplitude = 0.0

[params]
mu = 1.0
nu = 1.0
alpha = 1.0

[scheme]
dt = 0.01
auto_cfl = false
T = 0.05
cfl_advect = 0.4
cfl_hall = 0.25
dt_cap = 0.1
blowup_factor = 1000000.0
eta = none

[condition]
constant_C = 1.0
delta = 0.01

[io]
output_path = out
observer_stride = 1
checkpoint_stride = 0
seed = 11
jobs = 1
"""

SERIES_HEADER = ("t,v_h3,c_h3,v_diss,c_diss,energy_residual,hall_cancel,"
                 "I_1,I_2,I_3,I_4,I_5,I_6,I_7,I_8,I_9,I_10")


def _series_row(t, v, c):
    tail = ",".join(["0"] * 10)
    return f"{t},{v},{c},{1.1 * v},{1.2 * c},1e-12,1e-13,{tail}"


VERDICTS = {
    "all_pass": True,
    "checks": {
        "fft_roundtrip": {"value": 2.2e-16, "threshold": 1e-13, "pass": True},
        "leray_projection": {"value": 2.1e-16, "threshold": 1e-12, "pass": True},
        "hall_energy_neutrality": {"value": 3.4e-18, "threshold": 1e-11, "pass": True},
        "energy_rate_identity": {"value": 2.6e-16, "threshold": 1e-9, "pass": True},
        "split_consistency": {"value": 1.9e-16, "threshold": 1e-10, "pass": True},
    },
}

NORMS = {
    "epsilon": 0.2,
    "l1_hat": 15.31,
    "l2": 122.19,
    "linf_first": 9.19,
    "h3": 367.98,
    "div_res": 1.75e-17,
    "beltrami_res": 1.05e-16,
    "ratio_l1": 22.19,
    "ratio_l2": 79.21,
}

META = {
    "kind": "perturbation",
    "n_steps": 5,
    "final_t": 0.05,
    "eta": 0.02,
    "bootstrap_held": False,
    "gamma_estimate": 0.01,
    "max_energy": 21.58,
    "fd_rate_deviation": 3.2e-3,
}


def make_run_dir(root, n_rows=6, with_verdicts=True):
    root.mkdir(parents=True, exist_ok=True)
    (root / "resolved_config.ini").write_text(CONFIG_TEXT)
    rows = [SERIES_HEADER]
    for i in range(n_rows):
        t = 0.01 * i
        rows.append(_series_row(t, 0.7 * (1 + i), 0.69 * (1 + i)))
    (root / "series.csv").write_text("\n".join(rows) + "\n")
    (root / "norms.json").write_text(json.dumps(NORMS, indent=2))
    (root / "run_meta.json").write_text(json.dumps(META, indent=2))
    if with_verdicts:
        (root / "verdicts.json").write_text(json.dumps(VERDICTS, indent=2))
    return root


def make_sweep_dir(root, epsilons=(0.28, 0.2, 0.12)):
    root.mkdir(parents=True, exist_ok=True)
    (root / "resolved_config.ini").write_text(CONFIG_TEXT)
    rows = []
    for i, eps in enumerate(epsilons):
        rows.append({
            "epsilon": eps,
            "l1_hat": 10.75 + 4.0 * i,
            "l2": 100.0 + 10.0 * i,
            "linf_first": 6.45 + 2.2 * i,
            "h3": 300.0 + 30.0 * i,
            "div_res": 1e-16,
            "beltrami_res": 1e-16,
            "ratio_l1": 21.9 - 0.4 * i,
            "ratio_l2": 79.4 - 1.2 * i,
            "condition_lhs": float("inf"),
            "condition_log_lhs": 500.0 + 60.0 * i,
            "condition_pass": False,
            "n": 48,
            "box_side": 8.0 * 3.141592653589793 / eps,
        })
    (root / "sweep_summary.json").write_text(json.dumps(
        {"epsilons": list(epsilons), "rows": rows}, indent=2))
    return root


@pytest.fixture
def run_dir(tmp_path):
    return make_run_dir(tmp_path / "run")


@pytest.fixture
def sweep_dir(tmp_path):
    return make_sweep_dir(tmp_path / "sweep")
