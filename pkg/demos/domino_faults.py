"""Fault lines in domino tilings.

On the all-horizontal tiling every row can slide against its neighbours, so
each horizontal grid line is a fault line.  Offsetting alternate rows by one
cell leaves the horizontal lines and kills the vertical ones.
"""
from expanse.tiling import TorusTiling, dominoes, enumerate_tilings, fault_lines
from expanse.tiling import translation_classes


def draw(x):
    letters = "abcdefghijklmnopqrstuvwxyz"
    return "\n".join("    " + "".join(letters[i % 26] for i in row) for row in x.grid())


def report(title, x):
    print(title)
    print(draw(x))
    lines = fault_lines(x)
    print("    fault lines:", ", ".join(f"{f.axis}{f.k}{'' if f.slidable else '*'}"
                                       for f in lines) or "none")


def main():
    ds = dominoes()
    flat = TorusTiling(4, 4, tuple(sorted((0, (x, y)) for y in range(4) for x in (0, 2))), ds)
    report("aligned bricks", flat)
    bricks = tuple(sorted((0, (x + y % 2, y)) for y in range(4) for x in (0, 2)))
    report("offset bricks", TorusTiling(4, 4, bricks, ds))

    xs = enumerate_tilings(ds, 4, 4)
    classes = translation_classes(xs)
    with_fault = sum(1 for c in classes if fault_lines(c.representative))
    print(f"\n4x4 torus: {len(xs)} tilings, {len(classes)} up to translation, "
          f"{with_fault} of them with a fault line")


if __name__ == "__main__":
    main()
