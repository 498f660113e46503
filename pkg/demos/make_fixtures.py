"""Regenerate the fixture files shipped in fixtures/ from dhomotopy.corpus."""

import sys
from pathlib import Path

from dhomotopy.corpus import fixture_files


def main(out: str = "fixtures"):
    d = Path(out)
    d.mkdir(exist_ok=True)
    for name, text in sorted(fixture_files().items()):
        (d / name).write_text(text, encoding="utf-8")
        print(d / name)


if __name__ == "__main__":
    main(*sys.argv[1:])
