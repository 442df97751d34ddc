import typer
from dotenv import load_dotenv

from core.logger import setup_logging

load_dotenv()

app = typer.Typer(
    name="dispersia",
    help="Non-retarded dispersion interactions of two atoms near perfect conductors.",
    no_args_is_help=True,
    add_completion=False,
)


@app.callback()
def main(verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging")):
    setup_logging("DEBUG" if verbose else None)


from commands.scans import include_commands as include_scans
from commands.verify import include_commands as include_verify

include_scans(app)
include_verify(app)


if __name__ == "__main__":
    app()
