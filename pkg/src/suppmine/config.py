"""Engine configuration file: catalog paths, threshold, scorer backend.

JSON with keys ``tau``, ``agents``, ``clusters``, ``blocklist``,
``scorer_backend`` ("baseline" | "subprocess" | "http"), ``scorer_model``,
``scorer_cmd`` (argv array), ``scorer_url``, ``batch_size``, ``timeout``.
Relative paths resolve against the config file's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import Catalog, load_catalog
from .classifier.baseline import BaselineModel
from .classifier.external import HttpScorer, SubprocessScorer
from .errors import ValidationError
from .store import SpanBlocklist

_KNOWN_KEYS = {
    "tau",
    "agents",
    "clusters",
    "blocklist",
    "scorer_backend",
    "scorer_model",
    "scorer_cmd",
    "scorer_url",
    "batch_size",
    "timeout",
}

BACKENDS = ("baseline", "subprocess", "http")


@dataclass
class Config:
    tau: float = 0.5
    agents: str | None = None
    clusters: str | None = None
    blocklist: str | None = None
    scorer_backend: str = "baseline"
    scorer_model: str | None = None
    scorer_cmd: list[str] = field(default_factory=list)
    scorer_url: str | None = None
    batch_size: int = 64
    timeout: float = 30.0

    @classmethod
    def load(cls, path) -> "Config":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        unknown = set(obj) - _KNOWN_KEYS
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**obj)
        if cfg.scorer_backend not in BACKENDS:
            raise ValidationError(
                f"scorer_backend must be one of {BACKENDS}, got {cfg.scorer_backend!r}"
            )
        base = path.parent
        for attr in ("agents", "clusters", "blocklist", "scorer_model"):
            val = getattr(cfg, attr)
            if val is not None:
                setattr(cfg, attr, str((base / val).resolve()))
        return cfg

    def load_catalog(self) -> Catalog:
        if not self.agents:
            raise ValidationError("config has no 'agents' catalog path")
        return load_catalog(self.agents, self.clusters)

    def load_blocklist(self) -> SpanBlocklist:
        if not self.blocklist:
            return SpanBlocklist()
        return SpanBlocklist.load(self.blocklist)

    def make_scorer(self):
        if self.scorer_backend == "baseline":
            if not self.scorer_model:
                raise ValidationError("baseline backend needs 'scorer_model'")
            return BaselineModel.load(self.scorer_model)
        if self.scorer_backend == "subprocess":
            if not self.scorer_cmd:
                raise ValidationError("subprocess backend needs 'scorer_cmd'")
            return SubprocessScorer(
                self.scorer_cmd, batch_size=self.batch_size, timeout=self.timeout
            )
        if not self.scorer_url:
            raise ValidationError("http backend needs 'scorer_url'")
        return HttpScorer(self.scorer_url, batch_size=self.batch_size, timeout=self.timeout)
