from typing import Dict, Optional, Sequence

from core.energies import EnergyBreakdown
from core.errors import ConfigError


def breakdown_row(param: float, b: EnergyBreakdown, ratio: Optional[float] = None,
                  force: Optional[Sequence[float]] = None) -> Dict:
    """CSV row from an energy breakdown; `ratio` overrides b.ratio."""
    row = {
        "param": param,
        "e_london": b.e_london,
        "e_na1": b.e_na1,
        "e_na2": b.e_na2,
        "e_na_total": b.e_na_total,
        "ratio": b.ratio if ratio is None else ratio,
        "terms_used": b.terms_used,
        "converged": b.converged,
    }
    if force is not None:
        row["fx_na"], row["fy_na"], row["fz_na"] = (float(c) for c in force)
    return row


def require_geometry(spec, kinds, command: str):
    """The configured geometry, if it is one of `kinds`."""
    if not isinstance(spec.geometry, kinds):
        names = ", ".join(k.model_fields["kind"].default for k in kinds)
        raise ConfigError(f"[geometry] kind: {command} needs {names}, got {spec.geometry.kind}")
    return spec.geometry


def require_placement(spec, key: str, command: str) -> float:
    if key not in spec.placement:
        raise ConfigError(f"[scan] {key}: missing key, required by {command}")
    return spec.placement[key]
