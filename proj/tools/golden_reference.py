#!/usr/bin/env python3
"""Rebuild a fingerprint file from scratch, independently of the C++ library.

Everything is recomputed in plain Python integers: the 64-bit Mersenne Twister, seed derivation,
polynomial coefficients, every h_i(x) = f(x) + i*g(x) by direct evaluation, and the binary layout.
Only the known-length path with t = min(p, ceil(12 p l' / b)) is modelled.

    golden_reference.py INPUT --epsilon E --delta D --seed S [--prime P] (-o OUT | --check FILE)
"""

import argparse
import math
import struct
import sys

MASK64 = (1 << 64) - 1


class MT19937_64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & MASK64
        for i in range(1, 312):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK64
        self.index = 312

    def _twist(self):
        upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF
        for i in range(312):
            x = (self.mt[i] & upper) | (self.mt[(i + 1) % 312] & lower)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + 156) % 312] ^ xa
        self.index = 0

    def next(self):
        if self.index >= 312:
            self._twist()
        y = self.mt[self.index]
        self.index += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & MASK64


def mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master, block, purpose):
    return mix64((master + 0x9E3779B97F4A7C15 * (2 * block + purpose + 1)) & MASK64)


def uniform_below(engine, bound):
    mask = (1 << (bound - 1).bit_length()) - 1
    while True:
        v = engine.next() & mask
        if v < bound:
            return v


def read_items(path):
    items = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                items.append(int(line))
    return items


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("input")
    ap.add_argument("--epsilon", type=float, required=True)
    ap.add_argument("--delta", type=float, required=True)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--prime", type=int, default=(1 << 61) - 1)
    target = ap.add_mutually_exclusive_group(required=True)
    target.add_argument("-o", "--out", help="write the fingerprint here")
    target.add_argument("--check", help="compare against this file instead; exit 1 on any difference")
    args = ap.parse_args()

    p, eps, delta, master = args.prime, args.epsilon, args.delta, args.seed
    k = math.ceil(8.02 / (eps * eps) - 1e-9)
    m = math.ceil(4 * math.log(1 / delta) - 1e-9)
    l_prime = math.ceil(80 + 2 * math.log2(1 / eps) - 1e-9)
    d = l_prime + 1

    items = read_items(args.input)
    b = len(items)
    t = min(p, -(-12 * p * l_prime // b))

    out = bytearray(b"MFP1")
    out += struct.pack("<HQQddIIIQQ", 1, p, p - 1, eps, delta, k, m, d, master, b)
    for r in range(m):
        pair_seed = derive_seed(master, r, 0)
        bit_seed = derive_seed(master, r, 1)
        eng = MT19937_64(pair_seed)
        f = [uniform_below(eng, p) for _ in range(d + 1)]
        g = [uniform_below(eng, p) for _ in range(d + 1)]
        eng = MT19937_64(bit_seed)
        phis = []
        for _ in range(k):
            c0 = uniform_below(eng, p)
            c1 = 1 + uniform_below(eng, p - 1)
            phis.append((c0, c1))

        best = [(p, 0)] * k
        for x in items:
            fx = sum(c * pow(x, e, p) for e, c in enumerate(f)) % p
            gx = sum(c * pow(x, e, p) for e, c in enumerate(g)) % p
            for i in range(k):
                cand = ((fx + i * gx) % p, x)
                if cand < best[i]:
                    best[i] = cand

        valid = all(v < t for v, _ in best)
        bits = bytearray((k + 7) // 8)
        for i, (v, x) in enumerate(best):
            c0, c1 = phis[i]
            if v < t and (c0 + c1 * x) % p & 1:
                bits[i // 8] |= 1 << (i % 8)
        out += struct.pack("<QQB", pair_seed, bit_seed, int(valid)) + bits

    print(f"{len(out)} bytes: k={k} m={m} d={d} t={t}", file=sys.stderr)
    if args.check:
        with open(args.check, "rb") as fh:
            same = fh.read() == bytes(out)
        print("identical" if same else "DIFFERENT", file=sys.stderr)
        return 0 if same else 1
    with open(args.out, "wb") as fh:
        fh.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
