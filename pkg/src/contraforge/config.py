"""Run configuration: one structured file pins every knob of a run."""

import copy
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import yaml

from .injection import DeltaGate, InjectionPolicy
from .mining import MiningConfig


class ConfigError(Exception):
    pass


DEFAULTS: Dict[str, Any] = {
    "seed": 0,
    "mock_providers": True,
    "providers": {
        "chat": {"base_url": "", "model": "gpt-4o"},
        "embedding": {"base_url": "", "model": "msmarco-distilbert-base-v3"},
        "nli": {"model": "facebook/bart-large-mnli"},
        "logprobs": {"model": "gpt2", "mock_vocab": 18},
        "max_inflight": 8,
    },
    "generation": {
        "ppl_cap": 22.0,
        "max_attempts": 5,
        "paragraph_min": 4,
        "date_window": ["2024-01-01", "2024-12-31"],
        "prompt_overrides": {},
    },
    "injection": {
        "delta_self_max": 0.05,
        "delta_pair_max": 0.075,
        "ppl_cap": 22.0,
        "policy": {},
    },
    "mining": {
        "k": 5,
        "theta_s": 0.55,
        "theta_conf": 0.7,
        "tau": 0.5,
        "min_words": 10,
        "pairing_policy": "same_domain",
    },
    "annotation": {
        "annotators": ["annotator-1", "annotator-2"],
        "sme": "sme-1",
        "adjudication_threshold": 0.9,
        "token": "",
    },
    "corpus": {
        "documents_per_domain": 2,
        "domains": [],  # empty = all domains in the tree
    },
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


@dataclass(frozen=True)
class RunConfig:
    raw: Dict[str, Any] = field(default_factory=lambda: copy.deepcopy(DEFAULTS))

    @property
    def seed(self) -> int:
        return int(self.raw["seed"])

    @property
    def mock_providers(self) -> bool:
        return bool(self.raw["mock_providers"])

    @property
    def generation(self) -> Dict[str, Any]:
        return self.raw["generation"]

    @property
    def mining_config(self) -> MiningConfig:
        m = self.raw["mining"]
        return MiningConfig(
            k=int(m["k"]),
            theta_s=float(m["theta_s"]),
            theta_conf=float(m["theta_conf"]),
            tau=float(m["tau"]),
            min_words=int(m["min_words"]),
        )

    @property
    def pairing_policy(self) -> str:
        return self.raw["mining"]["pairing_policy"]

    @property
    def delta_gate(self) -> DeltaGate:
        inj = self.raw["injection"]
        return DeltaGate(
            delta_self_max=float(inj["delta_self_max"]),
            delta_pair_max=float(inj["delta_pair_max"]),
            ppl_cap=float(inj["ppl_cap"]),
        )

    def injection_policy(self, domains: List[str]) -> InjectionPolicy:
        rules = dict(self.raw["injection"]["policy"])
        for domain in domains:
            rules.setdefault(domain, "none")
        return InjectionPolicy(rules=rules)

    @property
    def annotators(self) -> List[str]:
        return list(self.raw["annotation"]["annotators"])


def load_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must be a mapping")
    merged = _deep_merge(DEFAULTS, data)
    if overrides:
        merged = _deep_merge(merged, overrides)
    cfg = RunConfig(raw=merged)
    try:
        cfg.mining_config
        cfg.delta_gate
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg
