"""Orbits of the shift on monotone 0/1 sequences, cut at length 12.

Every point 1^n 0^inf walks down to 0^inf in n steps, so its orbit has n + 1
points and everything flows into the zero sequence.  Only 0^inf and 1^inf
stay put.

    python demos/monotone_orbits.py
"""
from collections import Counter

from expanse.actions import inverse_orbit, monotone_truncation, orbit

L = 12


def main():
    a = monotone_truncation(L)
    sizes = {x: orbit(a, x).size for x in a.states}
    for x, n in sizes.items():
        print(f"{x}...  orbit size {n:2d}")
    by_size = Counter(sizes.values())
    print("\nfixed points:", [x for x, n in sizes.items() if n == 1])
    print("orbits per size:", dict(sorted(by_size.items())))
    zero = "0" * (L + 1)
    print(f"points whose orbit reaches {zero}: {inverse_orbit(a, zero).size}")


if __name__ == "__main__":
    main()
