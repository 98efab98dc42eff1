"""
Run configuration: YAML/JSON documents, presets and ``--set`` overrides,
validated into a :class:`RunConfig` before anything is computed.
"""

import copy
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import yaml

from ..analysis import AXES, Experiment, Scheme, Side, TpsSearch
from ..errors import ConfigError, ContractViolation
from ..protocols import ChannelSpec, Conditioning, ProtocolConfig
from ..sources import IntegrationGrid, SourceSpec
from ..utils.serialize import FORMATS
from ..utils.validator import Field, as_bool, as_float, as_int, as_str, list_of, number_or, validate_params
from .presets import PRESETS, Preset

logger = logging.getLogger(__name__)


def _unit(x: float) -> bool:
    return 0.0 <= x <= 1.0


def _open_unit(x: float) -> bool:
    return 0.0 < x <= 1.0


def _non_negative(x: float) -> bool:
    return x >= 0.0


def _positive(x: float) -> bool:
    return x > 0.0


PROTOCOL_FIELDS = {
    "v": Field(as_float, required=True, check=lambda x: x >= 1.0, expect=">= 1"),
    "v_alice": Field(as_float, check=lambda x: x >= 1.0, expect=">= 1"),
    "v_bob": Field(as_float, check=lambda x: x >= 1.0, expect=">= 1"),
    "beta": Field(as_float, required=True, check=_unit, expect="in [0, 1]"),
    "eps": Field(as_float, required=True, check=_non_negative, expect=">= 0"),
    "eps1": Field(as_float, check=_non_negative, expect=">= 0"),
    "eps2": Field(as_float, check=_non_negative, expect=">= 0"),
    "t_a": Field(as_float, default=0.5, check=_unit, expect="in [0, 1]"),
    "distance_km": Field(as_float, check=_non_negative, expect=">= 0"),
    "t1": Field(as_float, check=_open_unit, expect="in (0, 1]"),
    "t2": Field(as_float, check=_open_unit, expect="in (0, 1]"),
    "loss_db_per_km": Field(as_float, default=0.2, check=_non_negative, expect=">= 0"),
    "scheme": Field(as_str),
    "k_alice": Field(as_int, check=lambda k: k >= 0, expect=">= 0"),
    "k_bob": Field(as_int, check=lambda k: k >= 0, expect=">= 0"),
    "t_ps_alice": Field(as_float, check=_open_unit, expect="in (0, 1]"),
    "t_ps_bob": Field(as_float, check=_open_unit, expect="in (0, 1]"),
    "mu": Field(number_or("optimal"), default="optimal"),
    "conditioning": Field(as_str, default="heterodyne", choices=[c.value for c in Conditioning]),
}

SWEEP_FIELDS = {
    "axis": Field(as_str, default="distance-km", choices=list(AXES)),
    "values": Field(list_of(as_float)),
    "start": Field(as_float),
    "stop": Field(as_float),
    "num": Field(as_int, check=lambda n: n >= 1, expect=">= 1"),
    "schemes": Field(list_of(as_str)),
    "side": Field(as_str, default="alice", choices=[s.value for s in Side if s is not Side.NONE]),
    "k": Field(as_int, default=1, check=lambda k: k >= 1, expect=">= 1"),
    "quantity": Field(as_str, default="rate", choices=["rate", "eps_tolerable"]),
}

OPTIMIZER_FIELDS = {
    "grid_points": Field(as_int, default=21, check=lambda n: n >= 3, expect=">= 3"),
    "low": Field(as_float, default=0.01, check=_open_unit, expect="in (0, 1]"),
    "high": Field(as_float, default=1.0, check=_open_unit, expect="in (0, 1]"),
    "tol": Field(as_float, default=1e-4, check=_positive, expect="> 0"),
    "rounds": Field(as_int, default=2, check=lambda n: n >= 1, expect=">= 1"),
    "noise_tol": Field(as_float, default=1e-5, check=_positive, expect="> 0"),
    "noise_optimize": Field(as_bool, default=True),
    "rate_cutoff": Field(as_float, default=1e-8, check=_positive, expect="> 0"),
    "distance_tol_km": Field(as_float, default=0.1, check=_positive, expect="> 0"),
    "max_distance_km": Field(as_float, default=1000.0, check=_positive, expect="> 0"),
}

ORACLE_FIELDS = {
    "variances": Field(list_of(as_float), default=[5.0, 20.0, 40.0]),
    "t_ps_values": Field(list_of(as_float), default=[0.5, 0.8, 0.95, 1.0]),
    "photon_counts": Field(list_of(as_int), default=[0, 1, 2, 3]),
    "fock_tol": Field(as_float, default=1e-8, check=_non_negative, expect=">= 0"),
    "integral_tol": Field(as_float, default=1e-4, check=_non_negative, expect=">= 0"),
    "grid_points": Field(as_int, default=241, check=lambda n: n >= 3, expect=">= 3"),
    "grid_width": Field(as_float, default=10.0, check=_positive, expect="> 0"),
    "fault": Field(as_float, default=0.0),
}

OUTPUT_FIELDS = {
    "format": Field(as_str, default="csv", choices=list(FORMATS)),
    "path": Field(as_str),
    "threads": Field(as_int, default=1, check=lambda n: n >= 1, expect=">= 1"),
}

SECTIONS = {
    "protocol": PROTOCOL_FIELDS,
    "sweep": SWEEP_FIELDS,
    "optimizer": OPTIMIZER_FIELDS,
    "oracle": ORACLE_FIELDS,
    "output": OUTPUT_FIELDS,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated sections plus where they came from"""

    protocol: Dict[str, Any]
    sweep: Dict[str, Any]
    optimizer: Dict[str, Any]
    oracle: Dict[str, Any]
    output: Dict[str, Any]
    source: Optional[str] = None
    preset: Optional[str] = None
    overrides: Dict[str, Any] = field(default_factory=dict)
    lines: Dict[str, int] = field(default_factory=dict)

    def _error(self, message: str, key: str) -> ConfigError:
        return ConfigError(message, key=key, line=self.lines.get(key))

    def base_config(self) -> ProtocolConfig:
        p = self.protocol
        return ProtocolConfig(
            alice_src=SourceSpec(p["v_alice"] if p["v_alice"] is not None else p["v"]),
            bob_src=SourceSpec(p["v_bob"] if p["v_bob"] is not None else p["v"]),
            t_a=p["t_a"],
            beta=p["beta"],
            mu_policy=p["mu"],
            conditioning=Conditioning(p["conditioning"]),
        )

    def search(self) -> TpsSearch:
        o = self.optimizer
        try:
            return TpsSearch(o["grid_points"], o["low"], o["high"], o["tol"], o["rounds"])
        except ContractViolation as exc:
            raise self._error(str(exc), "optimizer.low") from None

    def experiment(self) -> Experiment:
        p = self.protocol
        return Experiment(
            base=self.base_config(),
            eps_forward=p["eps1"] if p["eps1"] is not None else p["eps"],
            eps_backward=p["eps2"] if p["eps2"] is not None else p["eps"],
            loss_db_per_km=p["loss_db_per_km"],
            search=self.search(),
        )

    def scheme(self) -> Scheme:
        """Scheme of the protocol section (name or explicit photon counts) with pinned T_PS"""
        p = self.protocol
        explicit_k = p["k_alice"] is not None or p["k_bob"] is not None
        if p["scheme"] is not None and explicit_k:
            raise self._error("give either 'scheme' or 'k_alice'/'k_bob', not both", "protocol.scheme")
        try:
            if explicit_k:
                scheme = Scheme(k_alice=p["k_alice"] or 0, k_bob=p["k_bob"] or 0)
            else:
                scheme = Scheme.parse(p["scheme"] or "original")
            return scheme.with_t_ps(
                p["t_ps_alice"] if scheme.k_alice else None,
                p["t_ps_bob"] if scheme.k_bob else None,
            )
        except ContractViolation as exc:
            raise self._error(str(exc), "protocol.scheme") from None

    def schemes(self) -> List[Scheme]:
        names = self.sweep["schemes"]
        if not names:
            return [self.scheme()]
        schemes = []
        for name in names:
            try:
                schemes.append(Scheme.parse(name))
            except ContractViolation as exc:
                raise self._error(str(exc), "sweep.schemes") from None
        return schemes

    def distance_km(self, required: bool = True) -> Optional[float]:
        d = self.protocol["distance_km"]
        if d is None and required:
            raise self._error("required for this command", "protocol.distance_km")
        return d

    def channels(self) -> Tuple[ChannelSpec, ChannelSpec]:
        """Channels from explicit t1/t2 or from the distance"""
        p = self.protocol
        experiment = self.experiment()
        has_t = p["t1"] is not None or p["t2"] is not None
        if has_t and p["distance_km"] is not None:
            raise self._error("give either 'distance_km' or 't1'/'t2', not both", "protocol.distance_km")
        if not has_t:
            return experiment.channels(self.distance_km())
        t1 = p["t1"] if p["t1"] is not None else p["t2"]
        t2 = p["t2"] if p["t2"] is not None else p["t1"]
        return ChannelSpec(t1, experiment.eps_forward), ChannelSpec(t2, experiment.eps_backward)

    def sweep_values(self) -> List[float]:
        s = self.sweep
        if s["values"] is not None:
            values = s["values"]
        elif s["start"] is not None and s["stop"] is not None and s["num"] is not None:
            values = [float(x) for x in np.linspace(s["start"], s["stop"], s["num"])]
        else:
            raise self._error("sweep needs 'values' or 'start'/'stop'/'num'", "sweep.values")
        if not values:
            raise self._error("sweep grid is empty", "sweep.values")
        return values

    def integration_grid(self) -> IntegrationGrid:
        return IntegrationGrid(points=self.oracle["grid_points"], width=self.oracle["grid_width"])

    def metadata(self, command: str) -> Dict[str, Any]:
        return {
            "command": command,
            "source": self.source,
            "preset": self.preset,
            "overrides": dict(self.overrides),
        }

    def validate(self) -> "RunConfig":
        """Build every derived object once so errors surface before any computation"""
        try:
            self.base_config()
        except ContractViolation as exc:
            raise self._error(str(exc), "protocol") from None
        self.search()
        self.scheme()
        self.schemes()
        if self.protocol["t1"] is not None or self.protocol["t2"] is not None or self.protocol["distance_km"] is not None:
            self.channels()
        return self


def _collect_lines(node: yaml.Node, prefix: str, out: Dict[str, int]):
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = f"{prefix}.{key_node.value}" if prefix else str(key_node.value)
            out[path] = key_node.start_mark.line + 1
            _collect_lines(value_node, path, out)


def load_document(path: str) -> Tuple[Dict[str, Any], Dict[str, int]]:
    """Parse a YAML (or JSON) file; returns the data and a dotted-key -> line map"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror or exc}") from exc
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"malformed config: {exc}", line=mark.line + 1 if mark else None) from None
    if data is None:
        return {}, {}
    if not isinstance(data, dict):
        raise ConfigError("config document must be a mapping of sections", line=1)
    lines: Dict[str, int] = {}
    _collect_lines(root, "", lines)
    return data, lines


def parse_override(text: str) -> Tuple[str, str, Any]:
    """``section.key=value`` with the value parsed as YAML"""
    if "=" not in text:
        raise ConfigError(f"override must look like section.key=value, got {text!r}")
    dotted, raw = text.split("=", 1)
    dotted = dotted.strip()
    if dotted.count(".") != 1:
        raise ConfigError("override key must be section.key", key=dotted)
    section, key = dotted.split(".")
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse override value {raw!r}: {exc}", key=dotted) from None
    return section, key, value


def _merge(base: Dict[str, Any], extra: Mapping[str, Any]) -> Dict[str, Any]:
    out = copy.deepcopy(base)
    for section, values in extra.items():
        if isinstance(values, Mapping) and isinstance(out.get(section), dict):
            out[section].update(values)
        else:
            out[section] = copy.deepcopy(values)
    return out


def build_run_config(
    document: Mapping[str, Any],
    lines: Optional[Mapping[str, int]] = None,
    source: Optional[str] = None,
    preset: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    lines = dict(lines or {})
    for section in document:
        if section not in SECTIONS:
            raise ConfigError(f"unknown section (allowed: {', '.join(SECTIONS)})", key=str(section), line=lines.get(section))
    sections = {name: validate_params(document.get(name), fields, name, lines) for name, fields in SECTIONS.items()}
    return RunConfig(
        source=source, preset=preset, overrides=dict(overrides or {}), lines=lines, **sections
    ).validate()


def _check_preset_conflicts(preset: str, base: Mapping[str, Any], data: Mapping[str, Any], lines: Mapping[str, int]):
    """A config file may add keys to a preset but not change the preset's own values."""
    for section, values in data.items():
        fixed = base.get(section)
        if not isinstance(values, Mapping) or not isinstance(fixed, Mapping):
            continue
        for key, value in values.items():
            if key in fixed and value != fixed[key]:
                dotted = f"{section}.{key}"
                raise ConfigError(
                    f"changes preset {preset!r} value {fixed[key]!r}; use --set {dotted}=<value>",
                    key=dotted,
                    line=lines.get(dotted),
                )


def load_run_config(
    path: Optional[str] = None,
    preset: Optional[str] = None,
    overrides: Sequence[str] = (),
    output: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """
    Preset, then config file, then ``--set`` overrides.

    A config file may extend a preset; changing one of the preset's values
    needs a ``--set`` override.

    Args:
        path: YAML or JSON config file
        preset: name from :data:`~cvqkdpy.cli.presets.PRESETS`
        overrides: ``section.key=value`` strings
        output: command-line output options, applied last and not recorded as overrides
    """
    document: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r} (available: {', '.join(sorted(PRESETS))})")
        chosen: Preset = PRESETS[preset]
        document = chosen.document()
    if path is not None:
        data, lines = load_document(path)
        if preset is not None:
            _check_preset_conflicts(preset, document, data, lines)
        document = _merge(document, data)

    applied: Dict[str, Any] = {}
    for text in overrides:
        section, key, value = parse_override(text)
        if section not in SECTIONS:
            raise ConfigError("unknown section in override", key=f"{section}.{key}")
        document = _merge(document, {section: {key: value}})
        applied[f"{section}.{key}"] = value
        logger.debug("override %s.%s = %r", section, key, value)
    if output:
        document = _merge(document, {"output": dict(output)})

    return build_run_config(document, lines, source=path, preset=preset, overrides=applied)
