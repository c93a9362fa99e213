"""Regenerate the committed golden sweep CSVs (run from the repo root).

Goldens pin the exact output bytes of every sweep kind at smoke scale; they
only need regenerating when the schema or the physics intentionally changes.
"""
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1]))

from golden_specs import tiny_sweep_spec  # noqa: E402

from mixadc.experiments import SWEEP_KINDS, result_to_csv, run_sweep  # noqa: E402


def main() -> None:
    out_dir = pathlib.Path(__file__).resolve().parent
    for kind in SWEEP_KINDS:
        text = result_to_csv(run_sweep(tiny_sweep_spec(kind)))
        path = out_dir / f"{kind}.csv"
        path.write_text(text, encoding="utf-8", newline="")
        print(f"wrote {path} ({len(text)} bytes)")


if __name__ == "__main__":
    main()
