"""Named run bundles, one per reference plot.

Each preset pins the parameters of its reference plot; anything those
leave out (horizon, sampling, cutoff) is chosen here and written
into ``notes`` so it travels with the output.
"""
from __future__ import annotations

from dataclasses import dataclass

from .config import RunConfig

PI_TIMES_CYCLE = (0.0, 0.5, 1.0, 1.5, 2.0)


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    runs: tuple[RunConfig, ...]


def _fig1():
    runs = tuple(
        RunConfig(
            name=f"k{k:g}", model="full", k=k, delta=0.0, t_end_pi=2.0,
            observables=("negativity", "coherence"),
            notes="numerical run; linear-analytic gives the same curve in closed form",
        )
        for k in (0.1, 0.25, 0.5)
    )
    return Preset("fig1", "negativity without nonlinearity, k in {0.1, 0.25, 0.5}", runs)


def _fig2():
    run = RunConfig(
        name="bloch", model="linear-analytic", k=0.5, delta=0.0, t_end_pi=2.0,
        observables=("bloch", "coherence"),
        notes="one cycle; the trajectory is closed and repeats",
    )
    return Preset("fig2", "qubit Bloch vector, k=0.5, delta=0", (run,))


def _fig3():
    run = RunConfig(
        name="wigner", model="linear-analytic", k=0.5, delta=0.0, t_end_pi=2.0,
        observables=("negativity", "wigner"), wigner_times_pi=PI_TIMES_CYCLE,
        notes="k=0.5 and snapshot times are free choices, picked to show the split and merge",
    )
    return Preset("fig3", "reduced oscillator Wigner function over one cycle, delta=0", (run,))


_SMALL = dict(k=0.01, delta=0.001, alpha=2.0)


def _fig4a():
    runs = (
        RunConfig(name="rwa_analytic", model="rwa-analytic", t_end_pi=8.0, **_SMALL),
        RunConfig(name="full", model="full", t_end_pi=8.0, observables=("negativity", "mean_n"),
                  **_SMALL),
        RunConfig(name="linear", model="linear-analytic", k=0.01, delta=0.0, t_end_pi=8.0),
    )
    return Preset("fig4a", "weak coupling: analytic RWA vs full numerics vs delta=0", runs)


def _fig4b():
    note = "horizon 120 pi, 100 samples per cycle"
    runs = (
        RunConfig(name="rwa_analytic", model="rwa-analytic", t_end_pi=120.0, samples=100,
                  notes=note, **_SMALL),
        RunConfig(name="full", model="full", t_end_pi=120.0, samples=100,
                  observables=("negativity", "plateau"), plateau_threshold=0.03,
                  plateau_relative=True, notes=note, **_SMALL),
    )
    return Preset("fig4b", "weak coupling, long horizon", runs)


def _fig5():
    runs = (
        RunConfig(name="rwa_analytic", model="rwa-analytic", t_end_pi=2.0,
                  observables=("squeezing", "wigner"), wigner_times_pi=PI_TIMES_CYCLE,
                  **_SMALL),
        RunConfig(name="full", model="full", t_end_pi=2.0, observables=("squeezing",), **_SMALL),
    )
    return Preset("fig5", "first-cycle quadrature squeezing in the weak-coupling regime", runs)


# delta = 1/100 with alpha = 2 and k = 0.5 spreads over ~100 Fock levels
_STRONG_CUTOFF = 140


def _fig6():
    runs = [
        RunConfig(name=f"delta{d:g}", model="full", k=0.5, delta=d, t_end_pi=20.0,
                  n_max=_STRONG_CUTOFF, observables=("negativity", "mean_n", "plateau"),
                  notes="horizon 20 pi chosen")
        for d in (0.01, 0.001)
    ]
    runs.append(RunConfig(name="linear", model="linear-analytic", k=0.5, t_end_pi=20.0))
    for model in ("ladder-full", "ns", "two"):
        runs.append(RunConfig(
            name=f"ladder_{model}", model=model, k=0.5, delta=0.01, t_end_pi=20.0,
            n_max=_STRONG_CUTOFF, certify=model != "two",
            notes="the two-phonon truncation is unbounded below; no cutoff certifies it"
            if model == "two" else "",
        ))
    return Preset("fig6", "strong coupling with a quartic term, plus the ladder comparison", tuple(runs))


def _fig7():
    run = RunConfig(
        name="conditioned", model="full", k=0.5, delta=0.01, t_end_pi=15.0, samples=100,
        n_max=_STRONG_CUTOFF, observables=("negativity", "conditioned_wigner"),
        wigner_times_pi=(2.0, 4.0, 6.0, 10.0, 15.0),
    )
    return Preset("fig7", "qubit-conditioned Wigner functions and their overlap w_p", (run,))


def _fig8():
    run = RunConfig(
        name="bloch", model="full", k=0.5, delta=0.01, t_end_pi=4.0, n_max=_STRONG_CUTOFF,
        observables=("bloch", "negativity"),
        notes="k, alpha and delta chosen to match the strong-coupling regime",
    )
    return Preset("fig8", "qubit Bloch vector over two cycles with the quartic term", (run,))


def _fig9():
    runs = []
    for d, n_max in ((0.01, 60), (0.001, 40)):
        for g in (0.0, 0.001, 0.01):
            runs.append(RunConfig(
                name=f"delta{d:g}_gamma{g:g}", model="full", k=0.5, delta=d, gamma=g,
                t_end_pi=10.0, samples=100, n_max=n_max, tail_tol=1e-4,
                observables=("negativity", "plateau"),
                notes="gamma values and horizon are free choices; dense master equation "
                "at a reduced cutoff with a looser guard band",
            ))
    return Preset("fig9", "damped oscillator, gamma sweep", tuple(runs))


_BUILDERS = {
    "fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4a": _fig4a, "fig4b": _fig4b,
    "fig5": _fig5, "fig6": _fig6, "fig7": _fig7, "fig8": _fig8, "fig9": _fig9,
}


def preset_registry() -> dict[str, Preset]:
    return {name: build() for name, build in _BUILDERS.items()}


def get_preset(name: str) -> Preset:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"no preset {name!r}; known: {', '.join(_BUILDERS)}") from None
