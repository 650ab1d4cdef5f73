"""Figures written next to the CSV outputs of the command-line tools."""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
    "savefig.dpi": 150,
}
COLORS = {"DE": "#4c72b0", "MSDE": "#dd8452"}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_cr_sweep(table, path):
    """Mean AFE against crossover rate, one line per algorithm."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for algo in table.algorithms:
            ax.plot(table.cr_values, table.afe[algo], marker="o",
                    color=COLORS.get(algo.value), label=algo.value)
        ax.set_xlabel("CR")
        ax.set_ylabel("AFE")
        ax.set_title("Effect of CR on AFE (" + ", ".join(table.problems) + ")", fontsize=9)
        if len(table.algorithms) > 1:
            ax.legend()
        return _save(fig, path)


def plot_experiment(table, path):
    """AFE and success count side by side for every problem."""
    problems = table.problems()
    algos = list(dict.fromkeys(c.algorithm for c in table))
    x = np.arange(len(problems))
    width = 0.8 / max(len(algos), 1)
    with plt.rc_context(STYLE):
        fig, (ax_afe, ax_sr) = plt.subplots(1, 2, figsize=(10, 3.5))
        for k, algo in enumerate(algos):
            afe = [table[p, algo].afe for p in problems]
            sr = [table[p, algo].sr for p in problems]
            offset = (k - (len(algos) - 1) / 2) * width
            ax_afe.bar(x + offset, afe, width, color=COLORS.get(algo.value), label=algo.value)
            ax_sr.bar(x + offset, sr, width, color=COLORS.get(algo.value), label=algo.value)
        ax_afe.set_yscale("log")
        ax_afe.set_ylabel("AFE")
        ax_sr.set_ylabel("SR (successful runs)")
        for ax in (ax_afe, ax_sr):
            ax.set_xticks(x)
            ax.set_xticklabels(problems)
        ax_sr.legend()
        return _save(fig, path)


def plot_convergence(histories, path, labels=None, optimum=None):
    """Best-so-far objective per generation; each entry of ``histories`` is one run."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for k, h in enumerate(histories):
            y = np.asarray(h, dtype=float)
            if optimum is not None:
                y = np.abs(y - optimum) + 1e-300
            ax.plot(np.arange(len(y)), y, label=labels[k] if labels else None)
        ax.set_yscale("log" if optimum is not None else "linear")
        ax.set_xlabel("generation")
        ax.set_ylabel("|best - optimum|" if optimum is not None else "best objective")
        if labels:
            ax.legend()
        return _save(fig, path)
