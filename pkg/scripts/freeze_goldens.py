#!/usr/bin/env python3
"""Regenerate the golden CLI transcripts under tests/golden/.

Run after a deliberate output-format change, inspect the diff, and check
the refreshed files in.  The test suite replays every case and compares
stdout byte for byte.
"""

import contextlib
import io
import json
from pathlib import Path

from decomp_embed.cli import main

CUSTOM_DOC = json.dumps(
    {
        "custom": {
            "dimension": 1,
            "indices": [[0], [1]],
            "T": [[[1]], [[2]]],
            "b": [[0], [3]],
            "base_set": {"ball": {"center": [0], "radius": 1}},
        }
    },
    separators=(",", ":"),
)

DECAY_WEIGHT = '{"lattice":{"kind":"N0"},"atoms":[{"exp2":["-1"]}]}'
GROW_WEIGHT = '{"lattice":{"kind":"N0"},"atoms":[{"exp2":["1/2"]}]}'
FLAT_WEIGHT = '{"lattice":{"kind":"N0"}}'

CASES = [
    ("decide_hom_embeds",
     ["decide", "--family", "hom_besov", "--params", '{"d":1,"s":"1/2"}',
      "-p", "1", "-q", "2", "-r", "2", "--oracle-check"]),
    ("decide_hom_gap",
     ["decide", "--family", "hom_besov", "--params", '{"d":1,"s":"2/3"}',
      "-p", "1", "-q", "3", "-r", "2"]),
    ("decide_alpha_sharp",
     ["decide", "--family", "alpha_modulation", "--params",
      '{"d":1,"alpha":0,"s":"1/3"}', "-p", "3", "-q", "3", "-r", "3"]),
    ("decide_shearlet_dne",
     ["decide", "--family", "shearlet_smoothness", "--params", '{"s":"15/8"}',
      "-p", "1", "-q", "2", "-r", "4", "-k", "1"]),
    ("decide_coorbit_bv",
     ["decide", "--family", "shearlet_coorbit", "--params",
      '{"c":"1/2","alpha":"7/4","beta":2}', "--target", "bv",
      "-p", "1", "-r", "1", "-k", "1"]),
    ("decide_diagonal_cb",
     ["decide", "--family", "diagonal", "--params",
      '{"d":1,"alpha":-2,"beta":-3}', "--target", "cb",
      "-p", "1", "-r", "2", "-k", "1"]),
    ("decide_inhom_pretty",
     ["decide", "--family", "inhom_besov", "--params", '{"d":1,"s":"5/3"}',
      "-p", "1", "-q", "3", "-r", "2", "-k", "1", "--pretty"]),
    ("inspect_family",
     ["inspect-covering", "--covering",
      '{"family":"hom_besov","params":{"d":2,"s":0}}',
      "--radius", "4", "--index", "0"]),
    ("inspect_custom",
     ["inspect-covering", "--covering", CUSTOM_DOC, "--radius", "2"]),
    ("check_seq_embeds",
     ["check-sequence", "--u", DECAY_WEIGHT, "--v", FLAT_WEIGHT,
      "-r", "2", "-s", "1", "--oracle"]),
    ("check_seq_fails",
     ["check-sequence", "--u", GROW_WEIGHT, "--v", FLAT_WEIGHT,
      "-r", "2", "-s", "2"]),
    ("verify_inhom",
     ["verify-family", "--family", "inhom_besov", "--params", '{"d":1,"s":1}',
      "--radius", "4"]),
]


def run(argv: list[str]) -> tuple[int, bytes]:
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = main(argv)
    return code, out.getvalue().encode()


def freeze() -> None:
    golden = Path(__file__).resolve().parents[1] / "tests" / "golden"
    golden.mkdir(parents=True, exist_ok=True)
    manifest = []
    for name, argv in CASES:
        code, payload = run(argv)
        (golden / f"{name}.out").write_bytes(payload)
        manifest.append({"name": name, "argv": argv, "exit": code})
        print(f"{name}: exit {code}, {len(payload)} bytes")
    manifest_text = json.dumps(manifest, indent=2) + "\n"
    (golden / "manifest.json").write_text(manifest_text)
    print(f"wrote {len(manifest)} cases to {golden}")


if __name__ == "__main__":
    freeze()
