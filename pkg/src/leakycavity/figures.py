"""Figure rendering for the CLI report path.

Every command that emits a CSV can also render PNG figures next to it:
decay rates vs time, populations vs time, and sweep summaries.  The CSV is
the machine contract; the figures are the human-readable report.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_TIME_LABEL = r"$t\;[(2\Omega)^{-1}]$"
_RATE_LABEL = r"$\gamma\;[2\Omega]$"


def _save(fig, path):
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
    return path


def render_rates(cols, stem):
    """Rates figure <stem>.rates.png from a column dict with t,
    gamma_minus, gamma_plus."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(cols["t"], cols["gamma_minus"], "-", label=r"$\gamma(\omega_0-\Omega,t)$")
    ax.plot(cols["t"], cols["gamma_plus"], "--", label=r"$\gamma(\omega_0+\Omega,t)$")
    ax.set_xlabel(_TIME_LABEL)
    ax.set_ylabel(_RATE_LABEL)
    ax.grid(True, alpha=0.4)
    ax.legend()
    return _save(fig, f"{stem}.rates.png")


def render_populations(cols, stem):
    """Populations figure <stem>.populations.png: ground-state filling and
    the bare-basis excited populations."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(cols["t"], cols["P_0g"], "-", label=r"$P_{0,g}$")
    ax.plot(cols["t"], cols["P_0e"], "--", label=r"$P_{0,e}$")
    ax.plot(cols["t"], cols["P_1g"], ":", label=r"$P_{1,g}$")
    ax.set_xlabel(_TIME_LABEL)
    ax.set_ylabel("population")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.4)
    ax.legend()
    return _save(fig, f"{stem}.populations.png")


def render_timeseries(cols, stem):
    """Standard run report: rates + populations figures."""
    paths = [render_rates(cols, stem)]
    if "P_0g" in cols:
        paths.append(render_populations(cols, stem))
    return paths


def render_sweep(values, summaries, param, stem):
    """Sweep report <stem>.summary.png: stationary rates and the trapping
    plateau against the swept parameter."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    gm = [s["gamma_minus_inf"] for s in summaries]
    gp = [s["gamma_plus_inf"] for s in summaries]
    plateau = [s["plateau_P_0e"] for s in summaries]
    ax1.plot(values, gm, "o-", label=r"$\gamma(\omega_0-\Omega,\infty)$")
    ax1.plot(values, gp, "s--", label=r"$\gamma(\omega_0+\Omega,\infty)$")
    if len(values) > 1 and min(values) > 0 and max(values) / min(values) > 30:
        ax1.set_xscale("log")
        ax2.set_xscale("log")
    ax1.set_xlabel(param)
    ax1.set_ylabel(_RATE_LABEL)
    ax1.grid(True, alpha=0.4)
    ax1.legend()
    ax2.plot(values, plateau, "d-", color="tab:green")
    ax2.set_xlabel(param)
    ax2.set_ylabel(r"plateau $P_{0,e}$")
    ax2.grid(True, alpha=0.4)
    fig.tight_layout()
    return _save(fig, f"{stem}.summary.png")
