"""A short walk through the coding relation on two one-dimensional shifts.

The alternating shift is finite, so a single coordinate already pins down a
whole point.  The golden-mean shift is infinite, so no window pins down the
next one, and the engine hands back a pair of points that prove it.

    python demos/coding_tour.py
"""
from expanse.coding import CodingQuery, codes, expansive_radius, horoball_coding_probe
from expanse.groups import horoball_approx
from expanse.symbolic import golden_mean, period_two


def show_pair(pair, lo, hi):
    for x in pair:
        print("    " + "".join(x[i] for i in range(lo, hi + 1)))


def main():
    p2, gm = period_two(), golden_mean()

    print("alternating shift: does {0} code {-3, 5}?")
    print("   ", codes(CodingQuery(p2, [0], [-3, 5], 6)).result)

    print("\ngolden mean: does the unit ball code the ball of radius 2?")
    v = codes(CodingQuery(gm, [-1, 0, 1], [-2, -1, 0, 1, 2], 4))
    print("   ", v.result, "- two points that agree on [-1, 1]:")
    show_pair(v.witness, -4, 4)

    for name, spec in [("alternating", p2), ("golden mean", gm)]:
        cert = expansive_radius(spec, 4, 6)
        if cert.found:
            print(f"\n{name}: radius {cert.radius} codes the next ball, "
                  f"{cert.exact_count} points against a bound of {cert.bound}")
        else:
            print(f"\n{name}: no radius up to 4 codes the next ball "
                  f"(refuted at {sorted(cert.refutations)})")

    # a half-line window, looking left and then right
    for d in ([-1], [1]):
        h = horoball_approx(gm.group, 3, direction=d)
        print(f"half-line towards {d[0]:+d}:", horoball_coding_probe(gm, h, 6).result)


if __name__ == "__main__":
    main()
