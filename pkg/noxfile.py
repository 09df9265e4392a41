from __future__ import annotations

import argparse
import shutil
from pathlib import Path

import nox

DIR = Path(__file__).parent.resolve()

nox.options.sessions = ["lint", "pylint", "tests"]


@nox.session
def lint(session: nox.Session) -> None:
    """
    Run ruff and mypy on the package.
    """
    session.install(".", "ruff", "mypy")
    session.run("ruff", "check", "src", "tests", *session.posargs)
    session.run("mypy", "src/jclattice")


@nox.session
def pylint(session: nox.Session) -> None:
    """
    Run PyLint.
    """
    session.install(".", "pylint")
    session.run("pylint", "jclattice", "--fail-under=8", *session.posargs)


@nox.session
def tests(session: nox.Session) -> None:
    """
    Run the test suite, acceptance checks included.
    """
    session.install(".[test]")
    session.run("pytest", *session.posargs)


@nox.session(reuse_venv=True)
def docs(session: nox.Session) -> None:
    """
    Build the docs. Pass "--serve" to rebuild on change.
    """

    parser = argparse.ArgumentParser()
    parser.add_argument("--serve", action="store_true", help="Serve after building")
    args, posargs = parser.parse_known_args(session.posargs)

    session.install("-e.[docs]", *(["sphinx-autobuild"] if args.serve else []))
    session.chdir("docs")
    shared_args = ("-n", "-T", "-b=html", ".", "_build/html", *posargs)
    if args.serve:
        session.run("sphinx-autobuild", *shared_args)
    else:
        session.run("sphinx-build", "--keep-going", *shared_args)


@nox.session
def build(session: nox.Session) -> None:
    """
    Build an SDist and wheel.
    """

    shutil.rmtree(DIR.joinpath("build"), ignore_errors=True)
    session.install("build")
    session.run("python", "-m", "build")


@nox.session
def figures(session: nox.Session) -> None:
    """
    Regenerate the figure data and the design table from the built-in presets.
    """

    session.install(".")
    out = DIR.joinpath("figures")
    for preset in ("fig2", "fig3"):
        session.run("jclattice", "simulate", "--preset", preset, "--out", str(out / preset))
    session.run("jclattice", "report", "--preset", "fig2", "--out", str(out / "fig2-report"))
    session.run("jclattice", "design", "--preset", "design-example", "--out", str(out / "design"))
