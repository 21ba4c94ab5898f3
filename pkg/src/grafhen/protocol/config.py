"""Scheme parameters."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..encoding import Encoding, encoding_by_name
from ..errors import ConfigError
from ..rewrite.froidure_pin import FILTERS, FPOptions, STOPS

MODES = ("plain", "sd")


@dataclass(frozen=True)
class SchemeConfig:
    """Everything keygen needs.

    ``d`` is the number of generators per alphabet (the semidirect mode has two
    alphabets of ``d`` letters each).  ``filter``/``k``/``stop``/``max_rules``
    drive the rule enumeration, ``db_size`` and ``combine`` the public zero
    database.
    """

    mode: str = "plain"
    n: int = 9
    d: int = 4
    seed: int = 0
    encoding: str = "s6"
    filter: str = "none"
    k: int = 5
    stop: str = "complete"
    max_rules: int | None = None
    check_floor: int = 50_000
    check_every: int = 10_000
    db_size: int = 256
    combine: int = 8
    auto_reduce: bool = True
    pairwise: bool | None = None
    memory_cap: int = 16 << 30
    generation_attempts: int = 1000
    x_degree: int | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        try:
            enc = encoding_by_name(self.encoding)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.d < 1 or self.d > 26 or (self.mode == "sd" and 2 * self.d > 26):
            raise ConfigError("alphabet must fit in the letters a-z")
        if self.n <= enc.degree:
            raise ConfigError(f"n must exceed {enc.degree} for encoding {self.encoding}")
        if self.n > 255:
            raise ConfigError("n above 255 is not supported")
        if self.mode == "sd" and not 1 <= self.right_degree <= self.n:
            raise ConfigError("x_degree must lie in 1..n")
        if self.filter not in FILTERS:
            raise ConfigError(f"filter must be one of {FILTERS}")
        if self.stop not in STOPS:
            raise ConfigError(f"stop must be one of {STOPS}")
        if self.stop == "max_rules" and not self.max_rules:
            raise ConfigError("stop=max_rules needs max_rules")
        if self.db_size < 2:
            raise ConfigError("db_size must be at least 2")
        if self.combine < 1:
            raise ConfigError("combine must be at least 1")

    def encoding_obj(self) -> Encoding:
        return encoding_by_name(self.encoding)

    def fp_options(self, seed: int) -> FPOptions:
        return FPOptions(filter=self.filter, k=self.k, stop=self.stop,
                         max_rules=self.max_rules, check_floor=self.check_floor,
                         check_every=self.check_every, seed=seed,
                         memory_cap=self.memory_cap)

    @property
    def right_degree(self) -> int:
        """Semidirect mode: the right masking element moves only ``1..right_degree``."""
        return self.n - 3 if self.x_degree is None else self.x_degree

    @property
    def want_pairwise(self) -> bool:
        return self.mode == "sd" if self.pairwise is None else self.pairwise

    def with_(self, **changes) -> "SchemeConfig":
        return replace(self, **changes)
