#!/usr/bin/env python3
"""Writes the reference gate netlists shipped in data/netlists/.

rcaN.net      exact N-bit ripple-carry adder
loaN_K.net    lower-OR adder: low K bits OR-ed, carry AND(a[K-1], b[K-1])
half_adder.net  1-bit adder (s0 = XOR, s1 = AND)
"""
import pathlib
import sys


def ripple(lines, n, start, carry):
    for i in range(start, n):
        if carry is None:
            lines.append(f"s{i} = XOR(a{i}, b{i})")
            lines.append(f"c{i + 1} = AND(a{i}, b{i})")
        else:
            lines.append(f"p{i} = XOR(a{i}, b{i})")
            lines.append(f"s{i} = XOR(p{i}, {carry})")
            lines.append(f"g{i} = AND(a{i}, b{i})")
            lines.append(f"t{i} = AND(p{i}, {carry})")
            lines.append(f"c{i + 1} = OR(g{i}, t{i})")
        carry = f"c{i + 1}"
    return carry


def adder(n, k=0, title=""):
    lines = [f"# {title}" if title else f"# {n}-bit adder"]
    lines.append("inputs " + " ".join([f"a{i}" for i in range(n)] + [f"b{i}" for i in range(n)]))
    carry = None
    for i in range(k):
        lines.append(f"s{i} = OR(a{i}, b{i})")
    if k > 0:
        carry = f"lc{k}"
        lines.append(f"{carry} = AND(a{k - 1}, b{k - 1})")
    if k == n:
        lines.append(f"c{n} = BUF({carry})")
        carry = f"c{n}"
    else:
        carry = ripple(lines, n, k, carry)
    lines.append("outputs " + " ".join([f"s{i}" for i in range(n)] + [carry]))
    return "\n".join(lines) + "\n"


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "half_adder.net").write_text(
        "# 1-bit adder: sum and carry\ninputs a0 b0\ns0 = XOR(a0, b0)\ns1 = AND(a0, b0)\noutputs s0 s1\n")
    for n in (4, 8, 12, 16):
        (out / f"rca{n}.net").write_text(adder(n, 0, f"exact {n}-bit ripple-carry adder"))
    for n, k in ((4, 2), (12, 4), (16, 6)):
        (out / f"loa{n}_{k}.net").write_text(
            adder(n, k, f"{n}-bit lower-OR adder, {k} approximate low bits"))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/netlists")
