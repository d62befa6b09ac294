"""Fixed CLI invocations whose output is frozen under tests/golden."""

from __future__ import annotations

import io
from pathlib import Path

from toricgauge.cli import run

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

CASES = {
    "two_chamber_quotient": ["quotient", "two_chamber.toml"],
    "two_chamber_chambers": ["chambers", "two_chamber.toml", "--compare", "2,1"],
    "two_chamber_inertia": ["inertia", "two_chamber.toml"],
    "two_chamber_quasimap": ["quasimap", "two_chamber_d10.toml"],
    "two_chamber_mundet": ["mundet", "two_chamber_d10.toml", "--rho", "2", "--threshold"],
    "p23_affine": ["affine", "p23.toml"],
    "p23_inertia": ["inertia", "p23.toml"],
    "strata_n3": ["strata", "--n", "3"],
    "splittings_n4": ["strata", "--n", "4", "--splittings"],
}


def argv(name: str, jobs: int = 1) -> list:
    args = list(CASES[name])
    if len(args) > 1 and args[1].endswith(".toml"):
        args[1] = str(DATA / args[1])
    return ["--jobs", str(jobs)] + args


def invoke(name: str, jobs: int = 1) -> tuple:
    buf = io.StringIO()
    code = run(argv(name, jobs), stdout=buf)
    return code, buf.getvalue().encode("utf-8")


def regenerate():
    for name in CASES:
        code, out = invoke(name)
        assert code == 0, name
        (GOLDEN / f"{name}.json").write_bytes(out)


if __name__ == "__main__":
    regenerate()
