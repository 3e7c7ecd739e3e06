"""Regenerate src/abelian_cs/data/rp3.json.

The table is L(2, 1) from the Heegaard-torus construction with its core
cycles, the meridian loop and a pushoff for each.  build_rp3 re-validates
the file on every load, so the data never has to be trusted.
"""

import json
from pathlib import Path

from abelian_cs.manifold.builders import _core_cycles, heegaard_lens, with_pushoffs

OUT = Path(__file__).resolve().parents[1] / "src" / "abelian_cs" / "data" / "rp3.json"


def main() -> None:
    model = heegaard_lens(2, name="rp3")
    tri = model.triangulation.with_cycles(_core_cycles(model))
    tri = with_pushoffs(tri, ("tau1", "tau2", "triv"))
    OUT.write_text(tri.dumps(), encoding="utf-8")
    print(f"wrote {OUT} ({len(tri.tetrahedra)} tetrahedra, cycles {', '.join(tri.designated)})")


if __name__ == "__main__":
    main()
