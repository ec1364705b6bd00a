"""Independent reference for the seeded split (splitmix64 + Fisher-Yates)."""
import hashlib
import sys
from fractions import Fraction

MASK = (1 << 64) - 1


def splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return state, z ^ (z >> 31)


def split(ids, seed, fraction):
    n = len(ids)
    n_train = int((1 - Fraction(fraction)) * n)
    order = list(range(n))
    state = seed
    for i in range(n - 1, 0, -1):
        state, value = splitmix64(state)
        j = value % (i + 1)
        order[i], order[j] = order[j], order[i]
    test = sorted(order[: n - n_train])
    train = sorted(order[n - n_train:])
    return [ids[k] for k in train], [ids[k] for k in test]


def digest(train, test):
    text = "train\n" + "\n".join(train) + "\ntest\n" + "\n".join(test)
    return hashlib.sha256(text.encode()).hexdigest()


if __name__ == "__main__":
    n, seed, fraction = int(sys.argv[1]), int(sys.argv[2]), sys.argv[3]
    prefix = sys.argv[4] if len(sys.argv) > 4 else "s"
    train, test = split([f"{prefix}{i}" for i in range(1, n + 1)], seed, fraction)
    print(len(train), len(test), test[:10], digest(train, test))
