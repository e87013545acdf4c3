"""Plain-text run configuration: flat `key = value` pairs, `#` comments,
comma-separated lists.  Unknown keys are rejected so typos fail loudly."""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import ObservableSchedule
from .errors import ParseError, ValidationError
from .params import SimParams
from .phases import ClassifierOptions

_FLOAT_KEYS = {
    "kick_strength": "kick_strength",
    "lambda": "gain_loss",
    "epsilon": "coupling",
    "hbar_eff": "hbar_eff",
}
_INT_KEYS = {"lattice_size", "n_kicks", "entropy_every", "workers", "seed"}
_LIST_KEYS = {"lambda", "epsilon", "marginal_times"}
_OPTION_KEYS = {"fit_start", "fit_end", "pt_delta", "diffusion_slope_floor",
                "width_ratio", "leak_threshold"}
_MISC_KEYS = {"format", "out_dir"}

_KNOWN = (set(_FLOAT_KEYS) | _INT_KEYS | _LIST_KEYS | _OPTION_KEYS
          | _MISC_KEYS)


@dataclass
class RunConfig:
    """Everything a `run` invocation needs."""

    params: SimParams = field(default_factory=SimParams)
    schedule: ObservableSchedule = field(default_factory=ObservableSchedule)
    classifier: ClassifierOptions = field(default_factory=ClassifierOptions)
    gain_loss_values: tuple = (0.01,)
    coupling_values: tuple = (0.0,)
    fit_start: int | None = None        # None: last half of trajectory
    fit_end: int | None = None
    out_dir: str = "."
    output_format: str = "csv"
    workers: int = 1
    seed: int = 0                        # reserved; dynamics is deterministic

    @property
    def is_sweep(self) -> bool:
        return len(self.gain_loss_values) * len(self.coupling_values) > 1

    @property
    def grid(self) -> list[tuple[float, float]]:
        return sorted((g, e) for g in self.gain_loss_values
                      for e in self.coupling_values)

    def fit_window(self, n_kicks: int) -> tuple[int, int]:
        start = self.fit_start if self.fit_start is not None else n_kicks // 2
        end = self.fit_end if self.fit_end is not None else n_kicks
        return start, end


def _parse_number(raw: str, key: str, line_no: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"{key}: not a number: {raw!r}", line_no) from None


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text; defaults match the baseline
    production run (K=5, hbar_eff=1, lambda=0.01, M=512, 1000 kicks)."""
    values: dict[str, object] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected `key = value`, got {line!r}", line_no)
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in _KNOWN:
            raise ParseError(f"unknown key {key!r}", line_no)
        if not raw:
            raise ParseError(f"{key}: empty value", line_no)
        if key in _LIST_KEYS:
            values[key] = tuple(_parse_number(x.strip(), key, line_no)
                                for x in raw.split(","))
        elif key in _INT_KEYS:
            num = _parse_number(raw, key, line_no)
            if num != int(num):
                raise ParseError(f"{key}: expected an integer", line_no)
            values[key] = int(num)
        elif key in _MISC_KEYS:
            values[key] = raw
        else:
            values[key] = _parse_number(raw, key, line_no)
    return build_config(values)


def build_config(values: dict) -> RunConfig:
    """Assemble a validated RunConfig from a flat key-value mapping."""
    cfg = RunConfig()

    gain_loss = values.get("lambda", (0.01,))
    coupling = values.get("epsilon", (0.0,))
    if not isinstance(gain_loss, tuple):
        gain_loss = (float(gain_loss),)
    if not isinstance(coupling, tuple):
        coupling = (float(coupling),)
    for g in gain_loss:
        if g < 0:
            raise ValidationError(
                "must be >= 0 (negative values map onto positive ones by "
                "momentum reflection)", key="lambda")
    for e in coupling:
        if e < 0:
            raise ValidationError("must be >= 0", key="epsilon")
    cfg.gain_loss_values = gain_loss
    cfg.coupling_values = coupling

    try:
        cfg.params = SimParams(
            kick_strength=float(values.get("kick_strength", 5.0)),
            gain_loss=gain_loss[0],
            coupling=coupling[0],
            hbar_eff=float(values.get("hbar_eff", 1.0)),
            lattice_size=int(values.get("lattice_size", 512)),
            n_kicks=int(values.get("n_kicks", 1000)),
        )
    except ValidationError:
        raise

    entropy_every = int(values.get("entropy_every", 5))
    if entropy_every < 0:
        raise ValidationError("must be >= 0 (0 disables)", key="entropy_every")
    marginal_times = values.get("marginal_times", ())
    marginal_times = tuple(int(t) for t in marginal_times)
    leak_threshold = float(values.get("leak_threshold", 1e-8))
    if leak_threshold <= 0:
        raise ValidationError("must be positive", key="leak_threshold")
    cfg.schedule = ObservableSchedule(entropy_every, marginal_times,
                                      leak_threshold)

    delta = float(values.get("pt_delta", 0.1))
    slope_floor = float(values.get("diffusion_slope_floor", 1.0))
    width_ratio = float(values.get("width_ratio", 1.2))
    for key, val in (("pt_delta", delta),
                     ("diffusion_slope_floor", slope_floor),
                     ("width_ratio", width_ratio)):
        if val <= 0:
            raise ValidationError("must be positive", key=key)
    cfg.classifier = ClassifierOptions(delta, slope_floor, width_ratio)

    if "fit_start" in values:
        cfg.fit_start = int(values["fit_start"])
    if "fit_end" in values:
        cfg.fit_end = int(values["fit_end"])
    if cfg.fit_start is not None and cfg.fit_start < 0:
        raise ValidationError("must be >= 0", key="fit_start")
    if (cfg.fit_start is not None and cfg.fit_end is not None
            and cfg.fit_end <= cfg.fit_start):
        raise ValidationError("must exceed fit_start", key="fit_end")

    cfg.out_dir = str(values.get("out_dir", "."))
    fmt = str(values.get("format", "csv"))
    if fmt not in ("csv", "json"):
        raise ValidationError("must be csv or json", key="format")
    cfg.output_format = fmt
    cfg.workers = int(values.get("workers", 1))
    if cfg.workers < 1:
        raise ValidationError("must be >= 1", key="workers")
    cfg.seed = int(values.get("seed", 0))
    return cfg


def apply_overrides(text: str, overrides: list[str]) -> RunConfig:
    """Parse config text, then apply `key=value` override strings on top."""
    lines = [text]
    for item in overrides:
        if "=" not in item:
            raise ParseError(f"override must be key=value, got {item!r}")
        lines.append(item)
    return parse_config("\n".join(lines))
