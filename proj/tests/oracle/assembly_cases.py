#!/usr/bin/env python3
"""Independent evaluation of the H2 assembly case formulas on the shipped
stem data, for freezing into test expectations.  Prints the formula
prediction for each n and compares against the reference expressions."""
import itertools
import math

# shipped cokernel-of-J data, stems 33..38 (prime-power torsion orders)
STEMS = {
    33: [8, 3],
    34: [4, 2, 2],
    35: [2, 2],
    36: [2, 2, 9],
    37: [8, 2, 2, 3],
    38: [8, 4, 2, 3, 5],
}

REFERENCE = {
    16: (0, [2] * 15, ["E1"]),
    17: (0, [4, 3, 5] + [2] * 7, []),
    18: (0, [2, 4], ["E2"]),
}


def h1_autQ(n):
    if n % 2 == 0:
        return [2, 2]
    if n in (1, 3, 7):
        return []
    return [4]


def pi_rp_2n2(n):
    r = (2 * n) % 8
    if r in (0, 4):
        return [2, 2]
    return []


def pi_mo_odd(n):
    assert n + 1 not in (9, 12)
    return STEMS[2 * n + 1]


def pi_mo_even(n):
    """Returns (free, torsion, atoms)."""
    r = (n + 1) % 8
    c = STEMS[2 * n + 2]
    if r == 6:
        return 1, c, []
    if r in (3, 5, 7):
        return 0, c, []
    if r in (0, 4):
        return 2, c, []
    if r == 1:
        return 0, [], ["E1"]
    if r == 2:
        return 0, [], ["E2"]


def lambda_square(free, tors):
    f = free * (free - 1) // 2
    t = []
    for m in tors:
        t.extend([m] * free)
    for a, b in itertools.combinations(tors, 2):
        g = math.gcd(a, b)
        if g > 1:
            t.append(g)
    return f, t


def canon(tors):
    out = []
    for t in tors:
        m = t
        d = 2
        while m > 1:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            if e:
                out.append(d ** e)
            d += 1
    return sorted(out)


def fmt(free, tors, atoms):
    parts = ["Z"] * free
    # group equal torsion orders for readability
    tt = canon(tors)
    i = 0
    while i < len(tt):
        j = i
        while j < len(tt) and tt[j] == tt[i]:
            j += 1
        if j - i == 1:
            parts.append("Z/%d" % tt[i])
        else:
            parts.append("(Z/%d)^%d" % (tt[i], j - i))
        i = j
    parts.extend(sorted(atoms))
    return " + ".join(parts) if parts else "0"


def assemble(n):
    odd = pi_mo_odd(n)                     # finite torsion list
    aut = h1_autQ(n)
    lam_free, lam_tors = lambda_square(0, odd + aut)
    ev_free, ev_tors, ev_atoms = pi_mo_even(n)
    rp = pi_rp_2n2(n)
    free = lam_free + ev_free
    tors = lam_tors + ev_tors + rp
    atoms = ev_atoms
    return free, canon(tors), sorted(atoms)


def main():
    for n in range(16, 19):
        free, tors, atoms = assemble(n)
        line = fmt(free, tors, atoms)
        if n in REFERENCE:
            rf, rt, ra = REFERENCE[n]
            ref = fmt(rf, rt, ra)
            match = (free, tors, atoms) == (rf, canon(rt), sorted(ra))
            print("n=%d: formula = %s | reference = %s | %s"
                  % (n, line, ref, "MATCH" if match else "MISMATCH"))
        else:
            print("n=%d: formula = %s" % (n, line))


if __name__ == "__main__":
    main()
