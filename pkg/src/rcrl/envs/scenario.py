"""Scenario files: pin a navigation world so ablations rerun identical
episodes.

Plain-text key = value lines; `#` starts a comment. Keys:

    half_size = 6.0
    start = x,y,heading
    goal = x,y
    obstacles = cx,cy,r; cx,cy,r; ...   (optional)
    seed = 123                          (recorded provenance only)
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ConfigError


@dataclass
class Scenario:
    half_size: float
    start: tuple  # (x, y, heading)
    goal: tuple  # (x, y)
    obstacles: list = field(default_factory=list)  # [(cx, cy, r), ...]
    seed: int = 0


def _floats(raw: str, n: int, key: str) -> tuple:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != n:
        raise ConfigError(f"scenario key {key!r} needs {n} comma-separated values")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"scenario key {key!r}: {exc}") from exc


def parse_scenario(text: str) -> Scenario:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"scenario line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"scenario line {lineno}: duplicate key {key!r}")
        values[key] = raw
    known = {"half_size", "start", "goal", "obstacles", "seed"}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
    for required in ("half_size", "start", "goal"):
        if required not in values:
            raise ConfigError(f"scenario missing key {required!r}")
    obstacles = []
    raw_obs = values.get("obstacles", "").strip()
    if raw_obs:
        for chunk in raw_obs.split(";"):
            chunk = chunk.strip()
            if chunk:
                obstacles.append(_floats(chunk, 3, "obstacles"))
    return Scenario(
        half_size=float(values["half_size"]),
        start=_floats(values["start"], 3, "start"),
        goal=_floats(values["goal"], 2, "goal"),
        obstacles=obstacles,
        seed=int(values.get("seed", "0")),
    )


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def render_scenario(s: Scenario) -> str:
    lines = [
        f"half_size = {s.half_size!r}",
        f"start = {s.start[0]!r},{s.start[1]!r},{s.start[2]!r}",
        f"goal = {s.goal[0]!r},{s.goal[1]!r}",
    ]
    if s.obstacles:
        chunks = "; ".join(f"{o[0]!r},{o[1]!r},{o[2]!r}" for o in s.obstacles)
        lines.append(f"obstacles = {chunks}")
    lines.append(f"seed = {s.seed}")
    return "\n".join(lines) + "\n"


def save_scenario(s: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_scenario(s))
