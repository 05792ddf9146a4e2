"""Regenerate the JSON goldens in tests/golden from the current code.

Only run this after a deliberate change to the tree format; the goldens
exist to catch accidental ones.
"""

from __future__ import annotations

import sys
from pathlib import Path

from lieexp import expansion
from lieexp.chevalley import Covector
from lieexp.root_system import build

GOLDEN = Path(__file__).with_name("golden")


def trees() -> dict:
    e8, d4, d5 = build("E8"), build("D4"), build("D5")
    return {
        "e8_min": expansion.expand_min(e8, range(8), recursive=False),
        "e8_ntm": expansion.expand_ntm_bourbaki(e8),
        "d4_min": expansion.flatten(expansion.expand_min(d4, [0, 2, 3, 1])),
        "d5_fourier_min": expansion.fourier_coeff_ntm(d5, 0, Covector.parse(d5, "a1+a2:1"), enumeration=[4, 3, 2]),
        "d5_fourier_ntm": expansion.fourier_coeff_ntm(d5, 0, Covector.parse(d5, "a1:1,a1+2a2+2a3+a4+a5:1")),
        "d4_fourier_min_a2": expansion.fourier_coeff_ntm(d4, 1, Covector.parse(d4, "a1+a2:1")),
    }


if __name__ == "__main__":
    for name, tree in trees().items():
        (GOLDEN / f"{name}.json").write_text(expansion.render(tree, "json"))
        (GOLDEN / f"{name}.tex").write_text(expansion.render(tree, "latex"))
    sys.stdout.write(f"wrote {len(trees())} goldens\n")
