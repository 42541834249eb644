"""Record golden fixtures with straight-line oracle code.

Everything here is computed independently of the library: Thue-Morse via
popcount parity, the Mobius function via a pure-python linear sieve, partial
sums as exact integers, and the extension stages via direct table doubling.
The outputs under tests/fixtures/golden/ are frozen; regenerating them is a
deliberate act, not part of the test run.

Run from the repository root:  python tools/record_golden.py
"""

import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "golden"


def thue_morse(count):
    """tm[n] = parity of the binary digit sum of n."""
    tm = []
    for n in range(count):
        tm.append(bin(n).count("1") & 1)
    return tm


def mobius(limit):
    """Linear smallest-prime-factor sieve; mu[0] unused."""
    spf = [0] * (limit + 1)
    primes = []
    mu = [0] * (limit + 1)
    mu[1] = 1
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if p > spf[i] or i * p > limit:
                break
            spf[i * p] = p
            mu[i * p] = 0 if p == spf[i] else -mu[i]
    return mu


def fmt(v):
    return format(v + 0.0, ".12g")


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    n_sarnak = 1 << 20
    n_kbsz = 1 << 18
    r, s = 3, 5

    tm = thue_morse(s * n_kbsz + 1)
    f = [1 - 2 * b for b in tm]
    mu = mobius(n_sarnak)

    # Sarnak partial sums at powers of two, orbit positions n = 1..N
    checkpoints = [1 << k for k in range(21)]
    partial = 0
    series = []
    it = iter(checkpoints)
    nxt = next(it)
    for n in range(1, n_sarnak + 1):
        partial += f[n] * mu[n]
        if n == nxt:
            series.append((n, partial))
            nxt = next(it, None)
    s_final = series[-1][1] / n_sarnak

    kb = 0
    for n in range(1, n_kbsz + 1):
        kb += f[r * n] * f[s * n]
    c_final = kb / n_kbsz

    with open(OUT / "sarnak_tm_moebius.json", "w") as fh:
        json.dump(
            {
                "system": "thue_morse",
                "observable": "walsh{0}",
                "weight": "moebius",
                "N": n_sarnak,
                "value": s_final,
                "abs": abs(s_final),
                "threshold": 2 * abs(s_final),
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")

    with open(OUT / "kbsz_tm_3_5.json", "w") as fh:
        json.dump(
            {
                "system": "thue_morse",
                "observable": "walsh{0}",
                "r": r,
                "s": s,
                "N": n_kbsz,
                "value": c_final,
                "abs": abs(c_final),
                "threshold": 2 * abs(c_final),
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")

    # CSV for the Thue-Morse/Mobius run, schema N,real,imag with 12 significant
    # digits and LF endings.  Partial sums are exact integers, so these bytes do
    # not depend on any summation order.
    lines = ["N,real,imag"]
    for n, total in series:
        lines.append("%d,%s,%s" % (n, fmt(total / n), fmt(0.0)))
    (OUT / "sarnak_tm_moebius_pow2.csv").write_bytes(("\n".join(lines) + "\n").encode())

    # Extension stages (lambda = 2, group Z/2), all choice bits 0.
    # Stage 1 defines nothing; passage t-1 -> t copies stage t-1 onto both
    # halves and fills levels 2^(t-2)-1 and 2^(t-1)+2^(t-2)-1 with (0,1) for
    # choice 0, (1,0) for choice 1.
    T = 8
    stage = [-1, -1]
    for t in range(2, T + 1):
        stage = stage + stage
        a, b = 0, 1  # choice bit 0
        stage[(1 << (t - 2)) - 1] = a
        stage[(1 << (t - 1)) + (1 << (t - 2)) - 1] = b
    prefix = stage[:16]
    assert all(v >= 0 for v in prefix)
    with open(OUT / "rs_extension_zero_choices.json", "w") as fh:
        json.dump({"choices": "all zero", "prefix": prefix}, fh, indent=2, sort_keys=True)
        fh.write("\n")

    print("S_N  =", s_final, " threshold", 2 * abs(s_final))
    print("C_N  =", c_final, " threshold", 2 * abs(c_final))
    print("rs prefix:", prefix)
    print("wrote", sorted(p.name for p in OUT.iterdir()))


if __name__ == "__main__":
    main()
