"""Recompute the committed envelope constants in tests/golden/envelopes.json."""
import json
import sys
from pathlib import Path

from multidyadic.harness.suites import envelope_suites, envelope_values

OUT = Path(__file__).resolve().parents[1] / "tests" / "golden" / "envelopes.json"


def main():
    golden = {}
    for key, cfg in envelope_suites().items():
        golden[key] = envelope_values(cfg)
        print(key, golden[key]["max_ratio"], golden[key]["pass"], file=sys.stderr)
    OUT.write_text(json.dumps(golden, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
