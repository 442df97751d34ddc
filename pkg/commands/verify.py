from contextlib import contextmanager
from typing import Dict

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from core.errors import DispersiaError, VerificationError
from core.logger import get_logger
from scans.verifier import Verifier

logger = get_logger("cli")


@contextmanager
def exit_on_error():
    """Turn dispersia errors into a logged message and the matching exit code."""
    try:
        yield
    except DispersiaError as e:
        logger.error(f"❌ {e.detail}")
        raise typer.Exit(code=e.exit_code)
    except ValidationError as e:
        logger.error(f"❌ Invalid value: {e.errors()[0]['msg']}")
        raise typer.Exit(code=2)


def status(check) -> str:
    if not check.reference_ok:
        return "FAIL (loose reference)"
    return "PASS" if check.passed else "FAIL"


def report(result: Dict) -> Table:
    table = Table(title="dispersia verify")
    table.add_column("check")
    table.add_column("residual", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("status")
    for r in result["results"]:
        table.add_row(r.name, f"{r.residual:.3e}", f"{r.tolerance:.0e}", status(r))
    return table


def run_verification(verifier: Verifier = None, stderr: bool = False) -> Dict:
    """
    Run the oracle suite; raises VerificationError when any check fails.
    stderr=True keeps the report off stdout when CSV goes there.
    """
    verifier = verifier or Verifier()
    logger.info("→ Running oracle cross-checks")
    result = verifier.run()
    Console(stderr=stderr).print(report(result))
    if result["failed"]:
        names = ", ".join(r.name for r in result["failed"])
        raise VerificationError(f"{len(result['failed'])} check(s) failed: {names}")
    logger.info(f"✅ All {len(result['results'])} checks passed")
    return result


def verify():
    """Run the oracle cross-check suite and print residuals per check."""
    with exit_on_error():
        run_verification()


def include_commands(app: typer.Typer) -> None:
    app.command("verify")(verify)
