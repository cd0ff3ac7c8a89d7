#!/usr/bin/env python3
"""Round-trip fuzzer for the JSONC parser.

Mutates corpus documents and free-form token soup, asserting on every
input that parsing never raises, the root spans the whole text, children
stay disjoint and in range, and serialization is byte-identical. Prints a
small kind histogram at the end.

    python3 scripts/fuzz_roundtrip.py --iterations 100000 --seed 7
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from jsonlens.jsonc import parse, serialize  # noqa: E402

ALPHABET = '{}[]":,-0123456789 \t\ntruefalsnl/*\\é🌀"#'


def mutate(rnd: random.Random, text: str) -> str:
    chars = list(text)
    for _ in range(rnd.randint(1, 3)):
        op = rnd.randrange(4)
        if op == 0 and chars:
            del chars[rnd.randrange(len(chars))]
        elif op == 1:
            chars.insert(rnd.randint(0, len(chars)), rnd.choice(ALPHABET))
        elif op == 2 and chars:
            chars[rnd.randrange(len(chars))] = rnd.choice(ALPHABET)
        else:
            a, b = sorted((rnd.randint(0, len(chars)), rnd.randint(0, len(chars))))
            chars[a:b] = rnd.choice(["", '"', "//", "/*", "[", "{", ","])
    return "".join(chars)


def check(text: str, kinds: Counter) -> None:
    tree = parse(text)
    assert serialize(tree) == text, "serialization is not byte-identical"
    assert (tree.root.start, tree.root.end) == (0, len(tree.data)), "root does not span input"
    stack = [tree.root]
    while stack:
        node = stack.pop()
        kinds[node.kind.value] += 1
        prev = node.start
        for child in node.children:
            assert node.start <= child.start <= child.end <= node.end, "child out of parent range"
            assert child.start >= prev, "overlapping children"
            prev = child.end
            stack.append(child)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iterations", type=int, default=50_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    corpus = [p.read_text(encoding="utf-8") for p in sorted((ROOT / "fixtures" / "corpus").glob("*.jsonc"))]
    rnd = random.Random(args.seed)
    kinds: Counter = Counter()
    started = time.monotonic()
    for i in range(args.iterations):
        if rnd.random() < 0.6 and corpus:
            text = mutate(rnd, rnd.choice(corpus))
        else:
            text = "".join(rnd.choice(ALPHABET) for _ in range(rnd.randint(0, 80)))
        check(text, kinds)
        if (i + 1) % 10_000 == 0:
            rate = (i + 1) / (time.monotonic() - started)
            print(f"{i + 1} inputs, {rate:.0f}/s", file=sys.stderr)
    elapsed = time.monotonic() - started
    print(f"{args.iterations} inputs in {elapsed:.1f}s; node kinds seen:")
    for kind, count in kinds.most_common():
        print(f"  {kind:14} {count}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
