"""Rewrite tests/golden/*.svg from the current renderer.  Run only after reviewing a diff."""
from symblowdown import cli
from test_cli import GOLDEN, GOLDEN_JOBS

if __name__ == "__main__":
    for name, job in sorted(GOLDEN_JOBS.items()):
        (GOLDEN / name).write_text(cli.run(job).svg)
        print("wrote", GOLDEN / name)
