"""All tunable defaults in one table, plus the config object the verdict and
CLI layers thread through. Precedence: flags override scenario-file values
override these defaults."""

from __future__ import annotations

from dataclasses import dataclass, field, fields

DEFAULTS: dict[str, object] = {
    # Determinism
    "seed": 1234,
    "workers": 1,
    # Gauge estimation
    "radii": (0.1, 0.03, 0.01, 0.003, 0.001, 0.0003),
    "samples_per_ball": 48,
    "n_max": 400,
    "t_max": 20.0,
    "sample_count": 201,
    "flow_tail_times": (32.0, 64.0, 128.0, 256.0, 512.0, 1024.0),
    # Linear-bound certification
    "epsilon_floor": 1e-3,
    "stability_factor": 1.5,
    # Iterate-family truncation (sup over n)
    "truncation_rel": 1e-3,
    "decay_window": 3,
    "decay_slack": 0.1,
    # Adaptive radius refinement inside the iterate verdict
    "max_radius_extensions": 6,
    "radius_extension_factor": 3.0,
    # Collapse detection
    "collapse_tol": 1e-4,
    "candidate_ball_radius": 0.1,
    "collapse_ball_samples": 20,
    "collapse_max_exp": 10,
    "collapse_extension_max_exp": 40,
    # Grids
    "grid_size": 200,
    # Dense approximating sequences
    "m_max": 10_000,
    "probe_count": 20,
    "density_candidates": 8,
    # Flow verdict
    "cross_check": True,
}


@dataclass(frozen=True)
class VerdictConfig:
    seed: int = DEFAULTS["seed"]
    workers: int = DEFAULTS["workers"]
    radii: tuple[float, ...] = DEFAULTS["radii"]
    samples_per_ball: int = DEFAULTS["samples_per_ball"]
    n_max: int = DEFAULTS["n_max"]
    t_max: float = DEFAULTS["t_max"]
    sample_count: int = DEFAULTS["sample_count"]
    flow_tail_times: tuple[float, ...] = DEFAULTS["flow_tail_times"]
    epsilon_floor: float = DEFAULTS["epsilon_floor"]
    stability_factor: float = DEFAULTS["stability_factor"]
    truncation_rel: float = DEFAULTS["truncation_rel"]
    decay_window: int = DEFAULTS["decay_window"]
    decay_slack: float = DEFAULTS["decay_slack"]
    max_radius_extensions: int = DEFAULTS["max_radius_extensions"]
    radius_extension_factor: float = DEFAULTS["radius_extension_factor"]
    collapse_tol: float = DEFAULTS["collapse_tol"]
    candidate_ball_radius: float = DEFAULTS["candidate_ball_radius"]
    collapse_ball_samples: int = DEFAULTS["collapse_ball_samples"]
    collapse_max_exp: int = DEFAULTS["collapse_max_exp"]
    collapse_extension_max_exp: int = DEFAULTS["collapse_extension_max_exp"]
    grid_size: int = DEFAULTS["grid_size"]
    m_max: int = DEFAULTS["m_max"]
    probe_count: int = DEFAULTS["probe_count"]
    density_candidates: int = DEFAULTS["density_candidates"]
    cross_check: bool = DEFAULTS["cross_check"]
    extra: dict = field(default_factory=dict)

    @classmethod
    def field_names(cls) -> set[str]:
        return {f.name for f in fields(cls) if f.name != "extra"}

    @classmethod
    def from_overrides(cls, *override_layers: dict) -> "VerdictConfig":
        """Build a config from dicts applied left to right (later layers win).
        Unknown keys raise, naming the offending field."""
        merged: dict[str, object] = {}
        for layer in override_layers:
            if not layer:
                continue
            for key, value in layer.items():
                if key not in cls.field_names():
                    raise KeyError(key)
                merged[key] = value
        for key in ("radii", "flow_tail_times"):
            if key in merged:
                merged[key] = tuple(float(v) for v in merged[key])
        return cls(**merged)

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            if f.name == "extra":
                continue
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out
