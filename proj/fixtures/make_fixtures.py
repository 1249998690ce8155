#!/usr/bin/env python3
"""Regenerates the frozen embedding fixture.

Vectors are deterministic functions of the token text (SHA-256 seeded),
so the fixture is stable across platforms and regeneration. The values
below are frozen into the regression tests; regenerate only when the
fixture schema changes, and update the tests with the printed values.
"""
import hashlib
import json
import math
import itertools

DIM = 8
TOKENS = ["no", "No", "no.", "nobody", "mono", "dog", "cat", "yes", "happy", "sad"]
ALPHABET = "acs"
MAX_LEN = 2


def vec(token: str):
    out = []
    for i in range(DIM):
        h = hashlib.sha256(f"{token}\x1f{i}".encode()).digest()
        u = int.from_bytes(h[:8], "little") / 2**64
        out.append(round(2.0 * u - 1.0, 12))
    return out


def cosine(a, b):
    dot = sum(x * y for x, y in zip(a, b))
    return dot / (math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b)))


def main():
    tokens = list(TOKENS)
    for ln in range(1, MAX_LEN + 1):
        for tup in itertools.product(ALPHABET, repeat=ln):
            t = "".join(tup)
            if t not in tokens:
                tokens.append(t)

    table = {t: vec(t) for t in tokens}
    with open("embeddings.jsonl", "w") as f:
        for t in tokens:
            f.write(json.dumps({"token": t, "embedding": table[t]}) + "\n")

    print("frozen similarities:")
    for a, b in [("no", "No"), ("no", "no."), ("no", "nobody"), ("no", "mono"), ("dog", "cat")]:
        print(f"  S_C({a!r},{b!r}) = {cosine(table[a], table[b]):.17g}")

    print("scan dog/cat over 'acs' up to len 2:")
    ranked = []
    for ln in range(1, MAX_LEN + 1):
        for tup in itertools.product(ALPHABET, repeat=ln):
            t = "".join(tup)
            d = abs(cosine(table[t], table["dog"]) - cosine(table[t], table["cat"]))
            ranked.append((t, d))
    ranked.sort(key=lambda e: e[1])
    for t, d in ranked[:3]:
        print(f"  {t} {d:.17g}")


if __name__ == "__main__":
    main()
