"""Rewrite the golden files after an intentional output change."""
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from golden_cases import cases  # noqa: E402


def main() -> None:
    target = ROOT / "tests" / "golden"
    target.mkdir(exist_ok=True)
    for name, produce in sorted(cases().items()):
        (target / name).write_text(produce())
        print(target / name)


if __name__ == "__main__":
    main()
