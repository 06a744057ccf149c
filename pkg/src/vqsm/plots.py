"""Figure rendering for the experiment drivers.

Each renderer takes (rows, spec, path) and writes a PNG next to the CSV.
Backend is forced to Agg so the CLI works headless.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

CHEMICAL_ACCURACY = 1.6e-3  # Hartree


def _new_axes(xlabel, ylabel, title):
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=10)
    return fig, ax


def _finish(fig, ax, path, log=False):
    if log:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_dissociation(rows, spec, path):
    d = [r["d"] for r in rows]
    fig, ax = _new_axes("d (Angstrom)", "Energy (Hartree)",
                        f"{spec.algorithm.upper()} dissociation, {spec.geometry} H{spec.n_atoms}")
    ax.plot(d, [r["E_HF"] for r in rows], "k--", label="HF")
    ax.plot(d, [r["E_FCI"] for r in rows], "k-", label="FCI")
    for key in rows[0]:
        if key.startswith("E0_n") and key != "E0_n0":
            ax.plot(d, [r[key] for r in rows], marker="o", ms=3,
                    label=key.replace("E0_n", "n="))
    _finish(fig, ax, path)


def render_layer_scan(rows, spec, path):
    fig, ax = _new_axes("HEA layers", "|dE| (Hartree)",
                        f"First-iteration error vs depth, cost={spec.cost}")
    distances = sorted({r["d"] for r in rows})
    for d in distances:
        sub = [r for r in rows if r["d"] == d]
        ax.plot([r["n_layers"] for r in sub], [abs(r["dE"]) for r in sub],
                marker="s", ms=4, label=f"d={d}")
    ax.axhline(CHEMICAL_ACCURACY, color="g", ls="-.", lw=1, label="chemical accuracy")
    _finish(fig, ax, path, log=True)


def render_iteration_scan(rows, spec, path):
    fig, ax = _new_axes("iteration n", "dE (Hartree)",
                        f"{spec.algorithm.upper()} convergence, cost={spec.cost}")
    distances = sorted({r["d"] for r in rows})
    for d in distances:
        sub = [r for r in rows if r["d"] == d]
        ax.plot([r["n"] for r in sub], [max(r["dE"], 1e-12) for r in sub],
                marker="o", ms=4, label=f"d={d}")
        if sub and sub[0].get("dE_lanczos") not in ("", None):
            ax.plot([r["n"] for r in sub],
                    [max(r["dE_lanczos"], 1e-12) for r in sub if r["dE_lanczos"] != ""],
                    color="0.2", ls=":", lw=1)
    ax.axhline(CHEMICAL_ACCURACY, color="g", ls="-.", lw=1, label="chemical accuracy")
    _finish(fig, ax, path, log=True)


def render_stochastic(rows, spec, path):
    fig, ax = _new_axes("HEA layers", "C(theta*) - C_min (Hartree)",
                        f"Optimization outcomes, cost={spec.cost}, d={rows[0]['d']}")
    layers = [r["n_layers"] for r in rows]
    for q, style in (("q10", "s"), ("q25", "o"), ("q50", "^"), ("q75", "v")):
        ax.plot(layers, [max(r[q], 1e-12) for r in rows], marker=style, ms=4, label=q)
    ax.plot(layers, [max(r["best_gap"], 1e-12) for r in rows], "k--", label="best")
    _finish(fig, ax, path, log=True)


def render_gap(rows, spec, path):
    label = "charge gap" if spec.kind == "charge-gap" else "singlet-triplet gap"
    fig, ax = _new_axes("d (Angstrom)", f"{label} (Hartree)",
                        f"{label}, {spec.geometry} H{spec.n_atoms}")
    d = [r["d"] for r in rows]
    ax.plot(d, [r["gap_HF"] for r in rows], "k--", label="HF")
    ax.plot(d, [r["gap_FCI"] for r in rows], "k-", label="FCI")
    for key in rows[0]:
        if key.startswith("gap_n"):
            ax.plot(d, [r[key] for r in rows], marker="o", ms=3,
                    label=key.replace("gap_n", "n="))
    ax.axhline(0.0, color="0.6", lw=0.8)
    _finish(fig, ax, path)


RENDERERS = {
    "dissociation": render_dissociation,
    "layer-scan": render_layer_scan,
    "iteration-scan": render_iteration_scan,
    "stochastic": render_stochastic,
    "charge-gap": render_gap,
    "st-gap": render_gap,
}
