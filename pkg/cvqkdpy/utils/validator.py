import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Mapping, Optional, Sequence

from ..errors import ConfigError

Coercer = Callable[[Any], Any]

_MISSING = object()


def as_float(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"expected a number, got {type(value).__name__} {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"expected a finite number, got {value}")
    return value


def as_int(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"expected an integer, got {type(value).__name__} {value!r}")
    return value


def as_bool(value: Any) -> bool:
    if not isinstance(value, bool):
        raise TypeError(f"expected true or false, got {value!r}")
    return value


def as_str(value: Any) -> str:
    if not isinstance(value, str):
        raise TypeError(f"expected a string, got {type(value).__name__} {value!r}")
    return value


def list_of(item: Coercer) -> Coercer:
    def coerce(value: Any) -> list:
        if not isinstance(value, (list, tuple)):
            raise TypeError(f"expected a list, got {type(value).__name__} {value!r}")
        return [item(v) for v in value]

    return coerce


def number_or(*words: str) -> Coercer:
    """Accept a finite number or one of the given keywords"""

    def coerce(value: Any):
        if isinstance(value, str):
            if value not in words:
                raise ValueError(f"expected a number or one of {list(words)}, got {value!r}")
            return value
        return as_float(value)

    return coerce


@dataclass(frozen=True)
class Field:
    """
    Expected shape of one config key.

    Args:
        coerce: converts/type-checks the raw value
        required: missing key is an error
        default: value used when the key is absent
        check: extra predicate on the coerced value
        expect: human-readable description of ``check`` for messages
        choices: allowed values
    """

    coerce: Coercer
    required: bool = False
    default: Any = None
    check: Optional[Callable[[Any], bool]] = None
    expect: str = ""
    choices: Optional[Sequence[Any]] = None


def validate_params(
    params: Optional[Mapping[str, Any]],
    fields: Mapping[str, Field],
    section: str,
    lines: Optional[Mapping[str, int]] = None,
) -> Dict[str, Any]:
    """
    Check a config section against its field table.

    Returns a dict holding every field, defaults filled in. ``lines`` maps
    dotted keys (``section.key``) to source lines for error messages.
    """
    lines = lines or {}
    params = {} if params is None else params
    if not isinstance(params, Mapping):
        raise ConfigError(f"section must be a mapping, got {type(params).__name__}", key=section, line=lines.get(section))

    for key in params:
        if key not in fields:
            dotted = f"{section}.{key}"
            raise ConfigError(f"unknown key (allowed: {', '.join(sorted(fields))})", key=dotted, line=lines.get(dotted))

    out: Dict[str, Any] = {}
    for key, spec in fields.items():
        dotted = f"{section}.{key}"
        raw = params.get(key, _MISSING)
        if raw is _MISSING or raw is None:
            if spec.required:
                raise ConfigError("required key is missing", key=dotted, line=lines.get(section))
            out[key] = spec.default
            continue
        try:
            value = spec.coerce(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), key=dotted, line=lines.get(dotted)) from None
        if spec.choices is not None and value not in spec.choices:
            raise ConfigError(
                f"must be one of {list(spec.choices)}, got {value!r}", key=dotted, line=lines.get(dotted)
            )
        if spec.check is not None and not spec.check(value):
            raise ConfigError(f"must be {spec.expect}, got {value!r}", key=dotted, line=lines.get(dotted))
        out[key] = value
    return out
