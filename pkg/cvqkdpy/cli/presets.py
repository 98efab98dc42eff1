"""
Frozen run configurations reproducing the published comparison figures.

Every preset uses V = 40, eps = 0.01, beta = 0.95 and t_a = 0.5.
"""

import copy
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

STUDY_PROTOCOL: Dict[str, Any] = {"v": 40.0, "beta": 0.95, "eps": 0.01, "t_a": 0.5}

RATE_DISTANCES = {"start": 0.0, "stop": 250.0, "num": 51}
NOISE_DISTANCES = {"start": 0.0, "stop": 200.0, "num": 21}


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    schemes: Tuple[str, ...]
    sweep: Dict[str, Any] = field(default_factory=dict)
    protocol: Dict[str, Any] = field(default_factory=dict)

    def document(self) -> Dict[str, Any]:
        """Config document equivalent to the preset, safe to modify"""
        protocol = dict(STUDY_PROTOCOL)
        protocol.update(self.protocol)
        sweep = copy.deepcopy(self.sweep)
        sweep["schemes"] = list(self.schemes)
        return {"protocol": protocol, "sweep": sweep}


def _rate(name: str, description: str, *schemes: str) -> Preset:
    return Preset(name, description, schemes, sweep={"axis": "distance-km", **RATE_DISTANCES})


def _noise(name: str, description: str, *schemes: str) -> Preset:
    return Preset(
        name, description, schemes, sweep={"axis": "distance-km", "quantity": "eps_tolerable", **NOISE_DISTANCES}
    )


PRESETS: Dict[str, Preset] = {
    p.name: p
    for p in (
        Preset(
            "fig3a",
            "success probability versus T_PS, k = 1, 2, 3 at Alice",
            ("alice-k1", "alice-k2", "alice-k3"),
            sweep={"axis": "t_ps", "start": 0.01, "stop": 1.0, "num": 100},
            protocol={"distance_km": 0.0},
        ),
        Preset(
            "fig3b",
            "optimal T_PS versus distance, k = 1, 2, 3 at Alice",
            ("alice-k1", "alice-k2", "alice-k3"),
            sweep={"axis": "distance-km", "start": 0.0, "stop": 150.0, "num": 31},
        ),
        _rate("fig3c", "key rate versus distance, k = 1, 2, 3 at Alice", "alice-k1", "alice-k2", "alice-k3"),
        _noise("fig3d", "tolerable excess noise, k = 1, 2, 3 at Alice", "alice-k1", "alice-k2", "alice-k3"),
        _rate(
            "fig4a",
            "key rate: Alice k = 1 against two-way and one-way baselines",
            "alice-k1", "original", "one-way-k1", "gg02",
        ),
        _noise(
            "fig4b",
            "tolerable noise: Alice k = 1 against two-way and one-way baselines",
            "alice-k1", "original", "one-way-k1", "gg02",
        ),
        _rate("fig5a", "key rate versus distance, k = 1, 2, 3 at Bob", "bob-k1", "bob-k2", "bob-k3"),
        _noise("fig5b", "tolerable excess noise, k = 1, 2, 3 at Bob", "bob-k1", "bob-k2", "bob-k3"),
        _rate("fig6a", "key rate: Bob k = 1 against baselines", "bob-k1", "original", "one-way-k1"),
        _noise("fig6b", "tolerable noise: Bob k = 1 against the original two-way protocol", "bob-k1", "original"),
        _rate(
            "fig7a",
            "key rate: subtraction at both sides against single-side schemes",
            "both-k1", "alice-k1", "original", "one-way-k1",
        ),
        _noise(
            "fig7b",
            "tolerable noise: subtraction at both sides against single-side schemes",
            "both-k1", "alice-k1", "original", "one-way-k1",
        ),
    )
}


def preset_names() -> List[str]:
    return sorted(PRESETS)
