"""Flat ``key = value`` experiment configs and the bundled figure presets.

Example::

    # Condorcet random model, p = 0.3
    model = condorcet
    p = 0.3
    n = 5,10,20:100:10
    trials = 10000
    solutions = COND,TC,UC
    seed = 20190710
    out = figure1b.csv

``n`` accepts comma-separated values and inclusive ``start:stop:step`` ranges.
``model`` may also carry its parameters inline (``condorcet:p=0.3``,
``voters:k=3``) as long as ``p`` is not given twice.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, TournsimError
from .montecarlo import DEFAULT_SEED, DEFAULT_TRIALS, ExperimentPlan
from .models import parse_model
from .solutions import Solution

KEYS = ("model", "p", "n", "trials", "solutions", "seed", "out")
DEFAULT_SOLUTIONS = (Solution.COND, Solution.TC, Solution.UC)


@dataclass(frozen=True)
class Config:
    plan: ExperimentPlan
    out: str | None = None


def parse_n_values(text: str) -> tuple[int, ...]:
    values = []
    for token in text.replace(" ", "").split(","):
        if not token:
            continue
        try:
            if ":" in token:
                start, stop, step = (int(v) for v in token.split(":"))
                if step < 1:
                    raise ValueError
                values.extend(range(start, stop + 1, step))
            else:
                values.append(int(token))
        except ValueError:
            raise ConfigError(f"bad n token {token!r}") from None
    return tuple(values)


def parse_config(text: str, base_dir=None) -> Config:
    entries = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not eq:
            raise ConfigError(f"line {no}: expected key = value, got {raw!r}")
        if key not in KEYS:
            raise ConfigError(f"line {no}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {no}: duplicate key {key!r}")
        entries[key] = value
    if "model" not in entries or "n" not in entries:
        raise ConfigError("config needs at least 'model' and 'n'")
    model_text = entries["model"]
    if "p" in entries:
        sep = "," if ":" in model_text else ":"
        model_text = f"{model_text}{sep}p={entries['p']}"
    try:
        model = parse_model(model_text, base_dir=base_dir)
        solutions = tuple(
            Solution.parse(s) for s in entries.get("solutions", "").split(",") if s.strip()
        ) or DEFAULT_SOLUTIONS
        plan = ExperimentPlan(
            model=model,
            n_values=parse_n_values(entries["n"]),
            solutions=solutions,
            trials=int(entries.get("trials", DEFAULT_TRIALS)),
            root_seed=int(str(entries.get("seed", DEFAULT_SEED)), 0),
        )
    except (TournsimError, ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from None
    return Config(plan, entries.get("out"))


def read_config(path) -> Config:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), base_dir=path.parent)


def render_config(config: Config) -> str:
    plan = config.plan
    model = plan.model
    if model.kind == "explicit":
        lines = [f"model = {model}"]
    else:
        head = f"voters:k={model.k}" if model.kind == "voters" else model.kind
        lines = [f"model = {head}", f"p = {model.p}"]
    lines += [
        f"n = {','.join(str(n) for n in plan.n_values)}",
        f"trials = {plan.trials}",
        f"solutions = {','.join(s.value for s in plan.solutions)}",
        f"seed = {plan.root_seed}",
    ]
    if config.out:
        lines.append(f"out = {config.out}")
    return "\n".join(lines) + "\n"


# --- presets ------------------------------------------------------------------

SMALL_GRID = "5,10:100:10"
DOUBLED_GRID = "10,20:200:20"
LARGE_GRID = "50,100,150,200:1000:100"

_PANELS = {
    "a": ("0.5", "0"),
    "b": ("0.3", "0.3"),
    "c": ("1/n", "1/n"),
    "d": ("1/n^2", "1/n^2"),
    "e": ("sqrt(2*log(n)/n)", "sqrt(2*log(n)/n)"),
    "f": ("0.6*sqrt(log(n)/n)", "0.6*sqrt(log(n)/n)"),
}


def _preset_texts() -> dict[str, str]:
    texts = {}
    for panel, (p_cond, _) in _PANELS.items():
        grid = LARGE_GRID if panel in "ef" else SMALL_GRID
        texts[f"figure1{panel}"] = f"model = condorcet\np = {p_cond}\nn = {grid}\n"
    for panel, (_, p_gap) in _PANELS.items():
        grid = LARGE_GRID if panel in "ef" else DOUBLED_GRID
        texts[f"figure2{panel}"] = f"model = gap\np = {p_gap}\nn = {grid}\n"
    # Majority of three voters near the UC threshold for voter models.
    texts["voters3-uc"] = (
        "model = voters:k=3\np = 1.5*(log(n)/n)^(1/4)\nn = 50,100,200\ntrials = 2000\n"
    )
    return texts


PRESET_DESCRIPTIONS = {
    **{f"figure1{k}": f"Condorcet random model, p={v[0]}" for k, v in _PANELS.items()},
    **{f"figure2{k}": f"gap model, p={v[1]}" for k, v in _PANELS.items()},
    "voters3-uc": "3 voters, Condorcet voter model, p=1.5*(log(n)/n)^(1/4)",
}


def preset_names() -> list[str]:
    return list(_preset_texts())


def preset(name: str) -> Config:
    try:
        text = _preset_texts()[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; see 'tournsim presets'") from None
    return parse_config(text)
