import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


LABELS = {
    "test_criterion_01_linear_oracle": "1  linear-case oracle",
    "test_criterion_02_qubit_coherence": "2  qubit coherence",
    "test_criterion_03_operator_identity": "3  quartic operator identity",
    "test_criterion_04_rwa_agreement": "4  RWA agreement and enhancement",
    "test_criterion_05_stabilization_plateau": "5  stabilization plateau",
    "test_criterion_06_plateau_scaling": "6  plateau width scaling",
    "test_criterion_07_ladder_comparison": "7  ladder comparison",
    "test_criterion_08_squeezing": "8  squeezing",
    "test_criterion_09a_vacuum_value": "9a Wigner vacuum W(0,0) = 1/pi",
    "test_criterion_09b_integral_and_purity": "9b Wigner integral and purity",
    "test_criterion_09c_wp_grid_vs_exact": "9c w_p grid vs exact",
    "test_criterion_09d_wp_trend": "9d w_p drop by 5x from 2pi to 15pi",
    "test_criterion_10_open_system": "10 open system",
    "test_criterion_11_determinism": "11 determinism",
    "test_long_horizon_strong_never_disentangles": "-- long horizon, k=0.5 delta=1/100",
    "test_long_horizon_weak_never_disentangles": "-- long horizon, k=1/100 delta=1/1000",
}
_outcomes = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if name not in LABELS:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[name] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in LABELS.items():
        if name in _outcomes:
            outcome, dur = _outcomes[name]
            flag = "PASS" if outcome == "passed" else "FAIL"
            terminalreporter.write_line(f"{flag}  criterion {label}  ({dur:.1f} s)")
