"""
INI run configuration -> RunConfig.

    [geometry]   kind = capacitor, D = 1 nm
    [coupling]   unit_mode = reduced, lambda = 1, d2 = 1, 1, 1
    [scan]       parameter, start, stop, count, spacing, separations, placements
    [numerics]   rel_tol, n_max, min_terms, base_step, richardson_levels
    [output]     path, precision

Lengths take an optional suffix nm, um or L (bare number = L, or metres in
SI mode). Every error names the section and key it came from.
"""
import configparser
import re
from pathlib import Path
from typing import Tuple

from pydantic import Field, TypeAdapter, ValidationError

from core.errors import ConfigError
from core.model import (
    AtomPolarization,
    FdCtrl,
    Frozen,
    Geometry,
    PairCoupling,
    ScanSpec,
    SeriesCtrl,
    Sweep,
    UnitMode,
)

# sweep parameters measured in length units; the others are ratios or angles
LENGTH_PARAMETERS = {"R_AB", "h", "a"}
ANGLE_KEYS = {"theta"}
SWEEP_KEYS = {"parameter", "start", "stop", "count", "spacing", "separations"}

_LENGTH_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(nm|um|L)?\s*$")

_REDUCED_UNITS = {None: 1.0, "L": 1.0, "nm": 1.0, "um": 1000.0}
_SI_UNITS = {None: 1.0, "nm": 1e-9, "um": 1e-6}


class RunConfig(Frozen):
    scan: ScanSpec
    series: SeriesCtrl = SeriesCtrl()
    fd: FdCtrl = FdCtrl()
    precision: int = Field(12, ge=1, le=17)


def parse_length(raw: str, unit_mode: UnitMode, where: str) -> float:
    """'2 nm' -> 2.0 (reduced) or 2e-9 (SI)."""
    match = _LENGTH_RE.match(raw)
    if not match:
        raise ConfigError(f"{where}: cannot read length {raw!r} (expected a number with optional nm, um or L)")
    value, unit = float(match.group(1)), match.group(2)
    table = _SI_UNITS if unit_mode == UnitMode.SI else _REDUCED_UNITS
    if unit not in table:
        raise ConfigError(f"{where}: unit {unit!r} is not allowed in {unit_mode.value} mode")
    return value * table[unit]


def _parse_float(raw: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {raw!r}")


def _parse_int(raw: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{where}: expected an integer, got {raw!r}")


def _validated(section: str, build):
    try:
        return build()
    except ValidationError as e:
        err = e.errors()[0]
        key = ".".join(str(p) for p in err["loc"]) or "?"
        raise ConfigError(f"[{section}] {key}: {err['msg']}")


# --- Sections ---

def _coupling(parser) -> Tuple[PairCoupling, AtomPolarization]:
    if not parser.has_section("coupling"):
        return PairCoupling(), AtomPolarization()
    sec = parser["coupling"]
    fields = {}
    if "unit_mode" in sec:
        fields["unit_mode"] = sec["unit_mode"].strip().lower()
    if "lambda" in sec:
        fields["lambda_ab"] = _parse_float(sec["lambda"], "[coupling] lambda")
    coupling = _validated("coupling", lambda: PairCoupling(**fields))

    polarization = AtomPolarization()
    if "d2" in sec:
        parts = [p for p in sec["d2"].split(",") if p.strip()]
        if len(parts) != 3:
            raise ConfigError(f"[coupling] d2: expected three comma-separated values, got {sec['d2']!r}")
        d2 = tuple(_parse_float(p, "[coupling] d2") for p in parts)
        polarization = _validated("coupling", lambda: AtomPolarization(d2=d2))
    return coupling, polarization


def _geometry(parser, unit_mode: UnitMode):
    if not parser.has_section("geometry"):
        raise ConfigError("[geometry] section is missing")
    sec = parser["geometry"]
    if "kind" not in sec:
        raise ConfigError("[geometry] kind: missing key")
    fields = {"kind": sec["kind"].strip()}
    for key in ("D", "a"):
        if key in sec:
            fields[key] = parse_length(sec[key], unit_mode, f"[geometry] {key}")
    return _validated("geometry", lambda: TypeAdapter(Geometry).validate_python(fields))


def _scan(parser, unit_mode: UnitMode):
    if not parser.has_section("scan"):
        raise ConfigError("[scan] section is missing")
    sec = parser["scan"]
    for key in ("parameter", "start", "stop", "count"):
        if key not in sec:
            raise ConfigError(f"[scan] {key}: missing key")
    parameter = sec["parameter"].strip()

    def bound(key):
        where = f"[scan] {key}"
        if parameter in LENGTH_PARAMETERS:
            return parse_length(sec[key], unit_mode, where)
        return _parse_float(sec[key], where)

    fields = {
        "parameter": parameter,
        "start": bound("start"),
        "stop": bound("stop"),
        "count": _parse_int(sec["count"], "[scan] count"),
    }
    if "spacing" in sec:
        fields["spacing"] = sec["spacing"].strip()
    sweep = _validated("scan", lambda: Sweep(**fields))

    separations = tuple(
        parse_length(p, unit_mode, "[scan] separations")
        for p in sec.get("separations", "").split(",") if p.strip()
    )
    placement = {}
    for key, raw in sec.items():
        if key in SWEEP_KEYS:
            continue
        where = f"[scan] {key}"
        placement[key] = _parse_float(raw, where) if key in ANGLE_KEYS else parse_length(raw, unit_mode, where)
    return sweep, placement, separations


def _numerics(parser) -> Tuple[SeriesCtrl, FdCtrl]:
    if not parser.has_section("numerics"):
        return SeriesCtrl(), FdCtrl()
    sec = parser["numerics"]
    series, fd = {}, {}
    if "rel_tol" in sec:
        series["rel_tol"] = _parse_float(sec["rel_tol"], "[numerics] rel_tol")
    for key in ("n_max", "min_terms"):
        if key in sec:
            series[key] = _parse_int(sec[key], f"[numerics] {key}")
    if "base_step" in sec:
        fd["base_step"] = _parse_float(sec["base_step"], "[numerics] base_step")
    if "richardson_levels" in sec:
        fd["richardson_levels"] = _parse_int(sec["richardson_levels"], "[numerics] richardson_levels")
    return (
        _validated("numerics", lambda: SeriesCtrl(**series)),
        _validated("numerics", lambda: FdCtrl(**fd)),
    )


# --- Entry points ---

def parse_run_config(text: str, source: str = "<string>") -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keys such as D and R_AB are case-sensitive
    try:
        parser.read_string(text, source=source)
    except configparser.Error as e:
        raise ConfigError(f"{source}: {e}")

    coupling, polarization = _coupling(parser)
    geometry = _geometry(parser, coupling.unit_mode)
    sweep, placement, separations = _scan(parser, coupling.unit_mode)
    series, fd = _numerics(parser)

    output, scan_fields = {}, {}
    if parser.has_section("output"):
        sec = parser["output"]
        if "path" in sec:
            scan_fields["output_path"] = sec["path"].strip()
        if "precision" in sec:
            output["precision"] = _parse_int(sec["precision"], "[output] precision")

    scan = _validated("scan", lambda: ScanSpec(
        geometry=geometry,
        coupling=coupling,
        polarization=polarization,
        sweep=sweep,
        placement=placement,
        separations=separations,
        **scan_fields,
    ))
    return _validated("output", lambda: RunConfig(scan=scan, series=series, fd=fd, **output))


def load_run_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e.strerror}")
    return parse_run_config(text, source=str(path))
