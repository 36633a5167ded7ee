"""Reproduction datasets for the headline figures and tables.

Each builder returns (header, rows) of a tidy CSV, one row per data point,
so any plotting tool can re-draw the figures.  `render` additionally draws
a ready-made matplotlib rendering next to the CSV for the figure targets.

Configurations (station count, code parameters, error rates) are the fixed
benchmark settings used throughout: f_T = 0.05, f_G = 0.001, f_M = 0.01,
f_S = 0.0001 unless a sweep says otherwise.
"""

from __future__ import annotations

import numpy as np

from . import entanglement as ent
from . import repeater
from .modarith import is_prime

BENCH_RATES = dict(f_T=0.05, f_G=0.001, f_M=0.01, f_S=0.0001)

TARGETS = ("fig4", "fig5", "fig6", "table1", "table2")

_FIG4 = dict(D=5, n=5, d=3, N_max=400)
_FIG5 = dict(D=13, n=13, d=7, N=2, k_values=(0, 1, 2, 3, 4))
_FIG6 = dict(N=50, D_max=100, dim_cap_log10=70.0)
_TABLE1_D = range(2, 24)


def _coset_class(r: int, s: int) -> str:
    if r == 0 and s == 0:
        return "identity"
    if s == 0:
        return "x"
    if r == 0:
        return "z"
    return "xz"


def fig4_dataset():
    """Coset probabilities of the benchmark ququint repeater vs. length."""
    cfg = _FIG4
    rows = []
    for N in range(2, cfg["N_max"] + 1, 2):
        scenario = repeater.RepeaterScenario(
            D=cfg["D"], N=N, encoding=repeater.Encoding(cfg["n"], cfg["d"]), **BENCH_RATES
        )
        table = repeater.encoded_final_statistics(scenario).table
        for r in range(cfg["D"]):
            for s in range(cfg["D"]):
                rows.append((N, r, s, _coset_class(r, s), f"{table[r, s]:.17g}"))
    return ["N", "r", "s", "class", "probability"], rows


def fig5_dataset(f_step: float = 0.005):
    """Fidelity and distribution probability vs. loss/transmission rate."""
    cfg = _FIG5
    rates = {k: v for k, v in BENCH_RATES.items() if k != "f_T"}
    alphas = {
        k: repeater.count_accepted_configurations(cfg["N"], cfg["n"], k)
        for k in cfg["k_values"]
    }
    rows = []
    total = cfg["N"] * cfg["n"]
    for i in range(int(round(0.5 / f_step)) + 1):
        f = round(i * f_step, 10)
        unencoded = repeater.RepeaterScenario(D=cfg["D"], N=cfg["N"], f_T=f, **rates)
        fid = np.sqrt(repeater.unencoded_final_statistics(unencoded).p00)
        rows.append((f"{f:.10g}", "unencoded", f"{fid:.17g}", ""))
        for k in cfg["k_values"]:
            scenario = repeater.RepeaterScenario(
                D=cfg["D"], N=cfg["N"], f_T=f,
                encoding=repeater.Encoding(cfg["n"], cfg["d"], k_max=k, f_abs=f), **rates
            )
            fid = np.sqrt(repeater.encoded_final_statistics(scenario).p00)
            p_distr = sum(
                int(a) * f ** m * (1.0 - f) ** (total - m)
                for m, a in enumerate(alphas[k]) if a
            )
            rows.append((f"{f:.10g}", f"kmax{k}", f"{fid:.17g}", f"{p_distr:.17g}"))
    return ["f", "series", "fidelity", "p_distr"], rows


def fig6_grid():
    """(D, d) pairs with the logical qudit's ambient dimension under the cap."""
    cfg = _FIG6
    out = []
    for D in range(2, cfg["D_max"] + 1):
        d = 1
        while (2 * d - 1) * np.log10(D) <= cfg["dim_cap_log10"]:
            out.append((D, d))
            d += 1
    return out


def fig6_dataset():
    """Distributed entanglement over the whole (D, d) code grid."""
    cfg = _FIG6
    rows = []
    for D, d in fig6_grid():
        scenario = repeater.RepeaterScenario(
            D=D, N=cfg["N"], encoding=repeater.Encoding(2 * d - 1, d), **BENCH_RATES
        )
        stats = repeater.encoded_final_statistics(scenario)
        logneg = ent.log_negativity(ent.BellDiagonalState.from_cosets(stats))
        has_code = is_prime(D) and 1 <= d <= (D + 1) // 2
        rows.append((
            D, d, 2 * d - 1,
            f"{(2 * d - 1) * np.log10(D):.12g}",
            f"{logneg:.17g}",
            int(has_code),
        ))
    return ["D", "d", "n", "dim_log10", "log_negativity", "polynomial_code"], rows


def table1_dataset(threshold: float = 0.99, d_limit: int = 40):
    """Smallest code distance reaching `threshold` of the ideal entanglement."""
    rows = []
    for D in _TABLE1_D:
        bar = threshold * np.log2(D)
        d_min = None
        for d in range(1, d_limit + 1):
            scenario = repeater.RepeaterScenario(
                D=D, N=_FIG6["N"], encoding=repeater.Encoding(2 * d - 1, d), **BENCH_RATES
            )
            stats = repeater.encoded_final_statistics(scenario)
            if ent.log_negativity(ent.BellDiagonalState.from_cosets(stats)) > bar:
                d_min = d
                break
        rows.append((D, d_min if d_min is not None else ""))
    return ["D", "d_min"], rows


def table2_dataset():
    """Accepted-loss-configuration counts for the two-station 13-digit block."""
    rows = []
    for k_max in _FIG5["k_values"]:
        alpha = repeater.count_accepted_configurations(2, _FIG5["n"], k_max)
        for m in range(10):
            rows.append((k_max, m, int(alpha[m])))
    return ["k_max", "m", "count"], rows


def build_dataset(target: str):
    if target == "fig4":
        return fig4_dataset()
    if target == "fig5":
        return fig5_dataset()
    if target == "fig6":
        return fig6_dataset()
    if target == "table1":
        return table1_dataset()
    if target == "table2":
        return table2_dataset()
    raise ValueError(f"unknown target {target!r}; choose from {TARGETS}")


def write_csv(header, rows, stream) -> None:
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(str(v) for v in row) + "\n")


# -- matplotlib renderings -------------------------------------------------------

def render(target: str, header, rows, png_path: str) -> None:
    """Draw a figure target to a PNG file next to its CSV."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if target == "fig4":
        _render_fig4(rows, plt)
    elif target == "fig5":
        _render_fig5(rows, plt)
    elif target == "fig6":
        _render_fig6(rows, plt)
    else:
        raise ValueError(f"no rendering for {target!r}")
    plt.savefig(png_path, dpi=150)
    plt.close("all")


def _render_fig4(rows, plt):
    by_class: dict[tuple[str, int, int], tuple[list, list]] = {}
    diff: dict[int, float] = {}
    for N, r, s, cls, p in rows:
        xs, ys = by_class.setdefault((cls, int(r), int(s)), ([], []))
        xs.append(int(N))
        ys.append(float(p))
    for (cls, r, s), (xs, ys) in by_class.items():
        if cls == "x" and s == 0:
            for x, y in zip(xs, ys):
                diff[x] = diff.get(x, 0.0) + y / 4
        if cls == "z" and r == 0:
            for x, y in zip(xs, ys):
                diff[x] = diff.get(x, 0.0) - y / 4
    colors = {"identity": "tab:green", "x": "tab:red", "z": "tab:blue", "xz": "0.6"}
    fig, ax = plt.subplots(figsize=(7, 4.5))
    seen = set()
    for (cls, r, s), (xs, ys) in sorted(by_class.items()):
        label = {"identity": "no error", "x": "X class", "z": "Z class", "xz": "XZ class"}[cls]
        ax.plot(xs, ys, color=colors[cls], lw=1.2, label=label if cls not in seen else None)
        seen.add(cls)
    ds = sorted(diff.items())
    ax.plot([x for x, _ in ds], [y for _, y in ds], color="magenta", lw=1.0, label="X - Z")
    ax.axhline(0.04, color="k", ls=":", lw=0.8)
    ax.set_xlabel("number of stations N")
    ax.set_ylabel("coset probability")
    ax.legend(loc="center right", fontsize=8)
    fig.tight_layout()


def _render_fig5(rows, plt):
    series: dict[str, tuple[list, list, list]] = {}
    for f, name, fid, p_distr in rows:
        xs, fids, ps = series.setdefault(name, ([], [], []))
        xs.append(float(f))
        fids.append(float(fid))
        ps.append(float(p_distr) if p_distr != "" else None)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    for name, (xs, fids, ps) in sorted(series.items()):
        style = dict(ls=":", color="0.4") if name == "unencoded" else {}
        ax1.plot(xs, fids, label=name, **style)
        if any(p is not None for p in ps):
            ax2.plot(xs, ps, label=name)
    ax1.set_ylabel("fidelity")
    ax2.set_ylabel("distribution probability")
    ax2.set_xlabel("f (transmission and absorption rate)")
    ax1.legend(fontsize=8)
    ax2.legend(fontsize=8)
    fig.tight_layout()


def _render_fig6(rows, plt):
    fig, ax = plt.subplots(figsize=(9, 4.5))
    xs = [float(row[3]) for row in rows]
    ys = [int(row[0]) for row in rows]
    cs = [float(row[4]) for row in rows]
    sc = ax.scatter(xs, ys, c=cs, s=8, cmap="viridis")
    dots = [(float(r[3]), int(r[0])) for r in rows if int(r[5])]
    ax.scatter([x for x, _ in dots], [y for _, y in dots],
               facecolors="none", edgecolors="k", s=14, linewidths=0.3)
    ax.set_xlabel("log10 dim of a logical qudit's ambient space")
    ax.set_ylabel("D")
    fig.colorbar(sc, ax=ax, label="log-negativity")
    fig.tight_layout()
