"""Looking for a tile whose number of tilings up to translation keeps growing.

The column tile is built so that bodies stack into columns and fillers lock
every other column.  We count translation classes on a range of tori.  The
tile only tiles when the width is a multiple of 3 and the height a multiple
of 4, so square tori of side 4, 6 and 8 admit nothing at all.  Where it does
tile, the class count stays small (3 on the even widths tried here).  The ring-filler tile is shown for comparison.
"""
from expanse.errors import MalformedInput
from expanse.tiling import column_tile, enumerate_tilings, ring_filler, translation_classes


def census(ts, tori):
    for W, H in tori:
        try:
            xs = enumerate_tilings(ts, W, H)
        except MalformedInput as exc:
            print(f"  {W}x{H}: {exc}")
            continue
        print(f"  {W}x{H}: {len(xs):5d} tilings, {len(translation_classes(xs))} classes")


def main():
    print("column tile")
    print("\n".join("    " + r for r in column_tile().tiles[0].picture().splitlines()))
    census(column_tile(), [(4, 4), (6, 6), (8, 8), (6, 4), (6, 8), (12, 4), (12, 8)])
    print("\nring-filler tile")
    census(ring_filler(), [(3, 3), (6, 3), (6, 6)])


if __name__ == "__main__":
    main()
