from pathlib import Path
from typing import Optional

import typer

from commands.verify import exit_on_error, run_verification
from core.logger import get_logger
from scans.capacitor import CapacitorForceScan, CapacitorRatioScan
from scans.plane import PlaneScan
from scans.sphere import AxilrodLimitScan, SphereAngleScan, SphereForceScan, SphereIsoVsGroundedScan
from utils.config_parser import load_run_config
from utils.csv_writer import write_result

logger = get_logger("cli")

ConfigOption = typer.Option(..., "--config", "-c", help="INI run configuration")
OutOption = typer.Option(None, "--out", "-o", help="CSV path (stdout when omitted)")
VerifyOption = typer.Option(False, "--verify", help="Run the oracle cross-checks first")


def run_scan(scan_cls, config: Path, out: Optional[Path], verify: bool) -> None:
    with exit_on_error():
        if verify:
            run_verification(stderr=True)
        run_config = load_run_config(config)
        scan = scan_cls(run_config)
        logger.info(f"→ {scan.name}: {run_config.scan.sweep.count} samples of {run_config.scan.sweep.parameter}")
        result = scan.run()
        target = out
        if target is None and run_config.scan.output_path:
            target = Path(run_config.scan.output_path)
        write_result(result, target, run_config.precision)


# --- Subcommands ---

def plane_scan(config: Path = ConfigOption, out: Optional[Path] = OutOption, verify: bool = VerifyOption):
    """Plane: London and non-additive energies over R_AB or height."""
    run_scan(PlaneScan, config, out, verify)


def capacitor_ratio(config: Path = ConfigOption, out: Optional[Path] = OutOption, verify: bool = VerifyOption):
    """Capacitor: E_NA / E_Lon against R_AB/D (companion: asymptotic)."""
    run_scan(CapacitorRatioScan, config, out, verify)


def capacitor_force(config: Path = ConfigOption, out: Optional[Path] = OutOption, verify: bool = VerifyOption):
    """Capacitor: in-plane non-additive over London force (companion: asymptotic)."""
    run_scan(CapacitorForceScan, config, out, verify)


def sphere_force(config: Path = ConfigOption, out: Optional[Path] = OutOption, verify: bool = VerifyOption):
    """Sphere: transverse non-additive over London force against r_B/a."""
    run_scan(SphereForceScan, config, out, verify)


def sphere_iso_vs_grounded(config: Path = ConfigOption, out: Optional[Path] = OutOption,
                           verify: bool = VerifyOption):
    """Sphere: E_NA(isolated) / E_NA(grounded) for a colinear pair against r_A/a."""
    run_scan(SphereIsoVsGroundedScan, config, out, verify)


def axilrod_limit(config: Path = ConfigOption, out: Optional[Path] = OutOption, verify: bool = VerifyOption):
    """Isolated sphere: E_NA R^3 r_A^3 r_B^3 / a^3 as the radius shrinks."""
    run_scan(AxilrodLimitScan, config, out, verify)


def sphere_angle(config: Path = ConfigOption, out: Optional[Path] = OutOption, verify: bool = VerifyOption):
    """Sphere: non-additive energy against the polar angle of B."""
    run_scan(SphereAngleScan, config, out, verify)


def include_commands(app: typer.Typer) -> None:
    app.command("plane-scan")(plane_scan)
    app.command("capacitor-ratio")(capacitor_ratio)
    app.command("capacitor-force")(capacitor_force)
    app.command("sphere-force")(sphere_force)
    app.command("sphere-iso-vs-grounded")(sphere_iso_vs_grounded)
    app.command("axilrod-limit")(axilrod_limit)
    app.command("sphere-angle")(sphere_angle)
