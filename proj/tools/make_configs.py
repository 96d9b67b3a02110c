"""Writes the canonical experiment configs: 10 targets x 4 models x 2 architectures.

Budgets are the scaled-down defaults (10 repetitions, 20,000 regression
epochs). Full budgets: `glnlab run --reps 30 --max-epochs 200000`.
"""
import pathlib

REGRESSION = ["ees", "se", "sunspot"]
DEQ_EPOCHS = {"decay": 500, "catenary": 700, "sho": 700, "damped": 1000,
              "laplace": 300, "heat": 300, "ks": 1500}
MODELS = ["gln", "sin", "tanh", "tbn"]
ARCHS = ["one_hidden", "two_hidden"]


def config(target, model, arch):
    task = "regression" if target in REGRESSION else "deq"
    lines = ["[experiment]", f"task = {task}", f"target = {target}", f"model = {model}",
             f"architecture = {arch}", "repetitions = 10", "base_seed = 1", ""]
    if task == "regression":
        lines += ["[data]"]
        if target == "sunspot":
            lines += ["# yearly mean total sunspot numbers (SILSO), supplied by the user",
                      "path = data/sunspot.csv"]
        else:
            lines += ["points = 2000", "lo = -10", "hi = 10"]
        lines += ["", "[train]", "learning_rate = 0.001", "batch_size = 64",
                  "max_epochs = 20000", "patience = 30"]
    else:
        lines += ["[train]", "learning_rate = 0.001", "", "[deq]", "collocation = 32",
                  f"epochs = {DEQ_EPOCHS[target]}", "batch_size = 16"]
    return "\n".join(lines) + "\n"


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "configs"
    out.mkdir(exist_ok=True)
    for target in REGRESSION + list(DEQ_EPOCHS):
        for model in MODELS:
            for arch in ARCHS:
                (out / f"{target}_{model}_{arch}.cfg").write_text(config(target, model, arch))


if __name__ == "__main__":
    main()
