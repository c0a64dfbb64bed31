"""Write the level-set SVGs: six-spike cusp star, infinite-spike cone case,
compact stars, and the equilateral family whose stars shrink as L grows."""
import argparse
from pathlib import Path

from charvar.emit import levelset_svg
from charvar.lengths import area, equilateral_family, level_set

FIGURES = {
    "three_holed_sphere": (2, 2, -2),
    "cone_and_cusp_042": (0, 4, 2),
    "cone_only_043": (0, 4, 3),
    "compact_star": (-2.1, -2.1, -2.1),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--depth", type=int, default=50)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for name, chi in FIGURES.items():
        samples = level_set(chi, 1.0, args.depth)
        (out / f"{name}.svg").write_text(levelset_svg(samples, title=f"chi = {chi}"))
        print(f"{name:20s} chi={chi} spikes={sum(s.spike for s in samples)}")

    lengths = [2.3, 2.6, 3.0, 6.0]
    for L, chi in zip(lengths, equilateral_family(lengths)):
        samples = level_set(chi, 1.0, args.depth)
        (out / f"equilateral_L{L:g}.svg").write_text(
            levelset_svg(samples, title=f"boundary length {L:g}"))
        print(f"equilateral L={L:<4g} area={area(chi).value:.5f}")


if __name__ == "__main__":
    main()
