"""Regenerate the golden CSV files in tests/golden/ from the bundled presets.

Each preset names its command in a ``# Command: linklab <command> ...``
comment. Rerun after a deliberate numerical change and review the diff.

Usage::

    python scripts/make_golden.py
"""

import re
from pathlib import Path

from linklab.cli import main
from linklab.config import PRESET_DIR

GOLDEN_DIR = Path(__file__).resolve().parents[1] / "tests" / "golden"


def preset_command(path: Path) -> str:
    match = re.search(r"^# Command: linklab (\S+)", path.read_text(), re.MULTILINE)
    if match is None:
        raise SystemExit(f"{path.name} has no '# Command:' line")
    return match.group(1)


def main_() -> None:
    GOLDEN_DIR.mkdir(exist_ok=True)
    for path in sorted(PRESET_DIR.glob("fig*.cfg")):
        out = GOLDEN_DIR / f"{path.stem}.csv"
        status = main([preset_command(path), "--preset", path.stem, "--out", str(out)])
        if status != 0:
            raise SystemExit(f"{path.stem} exited with status {status}")
        print(f"{out.name}: {len(out.read_text().splitlines()) - 1} rows")


if __name__ == "__main__":
    main_()
