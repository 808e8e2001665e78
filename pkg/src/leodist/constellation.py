"""Constellation configuration: shells, observers, presets, JSON config files."""
from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass

from .errors import ConfigError
from .geometry import DEFAULT_EARTH_RADIUS_KM, ShellGeometry

MAX_SATELLITES_PER_SHELL = 1_000_000

_TOP_KEYS = {"name", "earth_radius_km", "shells"}
_SHELL_KEYS = {"altitude_km", "num_satellites"}


@dataclass(frozen=True)
class ShellSpec:
    altitude_km: float
    num_satellites: int

    def __post_init__(self):
        a = self.altitude_km
        if isinstance(a, bool) or not isinstance(a, numbers.Real) or not math.isfinite(a):
            raise ConfigError(f"altitude must be a finite number, got {a!r}")
        if a <= 0:
            raise ConfigError(f"altitude must be positive, got {a}")
        n = self.num_satellites
        if isinstance(n, bool) or not isinstance(n, numbers.Integral):
            raise ConfigError(f"num_satellites must be an integer, got {n!r}")
        if n < 0:
            raise ConfigError(f"num_satellites must be non-negative, got {n}")
        if n > MAX_SATELLITES_PER_SHELL:
            raise ConfigError(
                f"num_satellites={n} exceeds {MAX_SATELLITES_PER_SHELL}; "
                "check that altitude and count are not swapped"
            )
        object.__setattr__(self, "altitude_km", float(a))
        object.__setattr__(self, "num_satellites", int(n))


@dataclass(frozen=True)
class ConstellationSpec:
    """Concentric shells around an Earth sphere.

    Shell order defines the 1-based indices used by :class:`ObservationPoint`.
    Shells need not be sorted or have distinct altitudes.
    """

    shells: tuple[ShellSpec, ...]
    earth_radius_km: float = DEFAULT_EARTH_RADIUS_KM
    name: str = ""

    def __post_init__(self):
        shells = tuple(self.shells)
        if not shells:
            raise ConfigError("constellation needs at least one shell")
        for s in shells:
            if not isinstance(s, ShellSpec):
                raise ConfigError(f"expected ShellSpec, got {type(s).__name__}")
        r_e = self.earth_radius_km
        if isinstance(r_e, bool) or not isinstance(r_e, numbers.Real) or not (math.isfinite(r_e) and r_e > 0):
            raise ConfigError(f"earth_radius_km must be positive, got {r_e!r}")
        object.__setattr__(self, "shells", shells)
        object.__setattr__(self, "earth_radius_km", float(r_e))

    @classmethod
    def from_lists(cls, altitudes, counts, name: str = "",
                   earth_radius_km: float = DEFAULT_EARTH_RADIUS_KM) -> "ConstellationSpec":
        if len(altitudes) != len(counts):
            raise ConfigError("altitudes and counts differ in length")
        shells = tuple(ShellSpec(a, n) for a, n in zip(altitudes, counts))
        return cls(shells, earth_radius_km, name)

    def __len__(self) -> int:
        return len(self.shells)

    @property
    def altitudes(self) -> list[float]:
        return [s.altitude_km for s in self.shells]

    @property
    def counts(self) -> list[int]:
        return [s.num_satellites for s in self.shells]

    @property
    def radii(self) -> list[float]:
        return [self.earth_radius_km + s.altitude_km for s in self.shells]

    def geometry(self, index: int) -> ShellGeometry:
        """Geometry of shell ``index`` (1-based)."""
        self._check_index(index)
        return ShellGeometry(self.shells[index - 1].altitude_km, self.earth_radius_km)

    def shell(self, index: int) -> ShellSpec:
        self._check_index(index)
        return self.shells[index - 1]

    def _check_index(self, index: int) -> None:
        if not 1 <= index <= len(self.shells):
            raise ConfigError(
                f"shell index out of range: {index} (constellation has {len(self.shells)} shells)"
            )

    def to_dict(self) -> dict:
        out: dict = {}
        if self.name:
            out["name"] = self.name
        out["earth_radius_km"] = self.earth_radius_km
        out["shells"] = [
            {"altitude_km": s.altitude_km, "num_satellites": s.num_satellites}
            for s in self.shells
        ]
        return out


@dataclass(frozen=True)
class ObservationPoint:
    """Either a ground observer (``shell is None``) or a process point on shell ``shell``."""

    shell: int | None = None

    @classmethod
    def earth(cls) -> "ObservationPoint":
        return cls(None)

    @classmethod
    def on_shell(cls, index: int) -> "ObservationPoint":
        return cls(int(index))

    @classmethod
    def parse(cls, text: str) -> "ObservationPoint":
        """Parse ``earth`` or ``shell:I``."""
        t = text.strip().lower()
        if t == "earth":
            return cls.earth()
        if t.startswith("shell:"):
            try:
                return cls.on_shell(int(t.split(":", 1)[1]))
            except ValueError:
                pass
        raise ConfigError(f"observer must be 'earth' or 'shell:I', got {text!r}")

    @property
    def is_earth(self) -> bool:
        return self.shell is None

    def validate(self, spec: ConstellationSpec) -> None:
        if self.shell is None:
            return
        spec._check_index(self.shell)
        if spec.shells[self.shell - 1].num_satellites < 1:
            raise ConfigError(f"observer shell {self.shell} has no satellites")

    def radius(self, spec: ConstellationSpec) -> float:
        if self.shell is None:
            return spec.earth_radius_km
        return spec.radii[self.shell - 1]

    def __str__(self) -> str:
        return "earth" if self.shell is None else f"shell:{self.shell}"


def _config_from_obj(obj) -> ConstellationSpec:
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(obj) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "shells" not in obj:
        raise ConfigError("config is missing 'shells'")
    raw_shells = obj["shells"]
    if not isinstance(raw_shells, list) or not raw_shells:
        raise ConfigError("'shells' must be a non-empty list")
    shells = []
    for i, raw in enumerate(raw_shells, start=1):
        if not isinstance(raw, dict):
            raise ConfigError(f"shell {i} must be an object")
        unknown = set(raw) - _SHELL_KEYS
        if unknown:
            raise ConfigError(f"shell {i}: unknown keys {sorted(unknown)}")
        missing = _SHELL_KEYS - set(raw)
        if missing:
            raise ConfigError(f"shell {i}: missing keys {sorted(missing)}")
        try:
            shells.append(ShellSpec(raw["altitude_km"], raw["num_satellites"]))
        except ConfigError as exc:
            raise ConfigError(f"shell {i}: {exc}") from None
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise ConfigError("'name' must be a string")
    r_e = obj.get("earth_radius_km", DEFAULT_EARTH_RADIUS_KM)
    return ConstellationSpec(tuple(shells), r_e, name)


def parse_config(text: bytes | str) -> ConstellationSpec:
    """Parse a JSON constellation config. Unknown keys are rejected."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError(f"config is not valid UTF-8: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return _config_from_obj(obj)


def serialize_config(spec: ConstellationSpec) -> str:
    return json.dumps(spec.to_dict(), indent=2) + "\n"


def load_config(path) -> ConstellationSpec:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(data)


_PRESETS: dict[str, tuple[list[float], list[int]]] = {
    "fig3-circle": ([1110, 1150, 1275, 1325], [50, 40, 25, 15]),
    "fig3-square": ([1110, 1150, 1275, 1325, 1500, 1700], [75, 65, 55, 45, 25, 15]),
    "fig3-diamond": ([1110, 1150, 1275, 1325], [105, 85, 60, 35]),
    "fig4": ([1000, 1325, 1625, 2000], [500, 400, 325, 280]),
    "leosat": ([1400], [100]),
    "oneweb": ([1200], [74]),
    "amazon": ([590, 610, 630], [784, 1296, 1156]),
    "spacex": ([550, 1110, 1130, 1275, 1325], [1584, 1600, 400, 374, 450]),
}

PRESET_NAMES: tuple[str, ...] = tuple(_PRESETS)


def preset(name: str) -> ConstellationSpec:
    try:
        alts, counts = _PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}"
        ) from None
    return ConstellationSpec.from_lists(alts, counts, name=name)
