"""Four cellular automata on the two-symbol full shift.

For each rule we look for a global bound (n, p) with f^(n+p) = f^n, then ask
how the per-point bounds behave on periodic points of growing period.  The
AND rule is the interesting one: every periodic point settles, but the time
it takes grows with the period.
"""
from expanse.ca import and_rule, constant_rule, identity_rule, preperiodicity, shift_rule
from expanse.ca import uniform_bound_profile
from expanse.symbolic import full_shift


def main():
    fs = full_shift()
    rules = {"identity": identity_rule(fs), "constant 0": constant_rule(fs, "0"),
             "and": and_rule(fs), "shift": shift_rule(fs)}
    for name, f in rules.items():
        v = preperiodicity(f, 8, 8)
        prof, stable = uniform_bound_profile(f, [2, 4, 6], 8, 8)
        bounds = ", ".join(f"P={P}: {b}" for P, b in prof)
        verdict = f"(n, p) = ({v.n}, {v.p})" if v.status == "preperiodic" else v.status
        print(f"{name:11s} {verdict:22s} per-point worst case {bounds}"
              f"{'' if stable else '  <- still growing'}")


if __name__ == "__main__":
    main()
