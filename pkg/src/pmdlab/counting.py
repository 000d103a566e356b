"""Exact counting over symmetric perfect matroid designs.

A profile lists, for a rank-r design, the Whitney numbers ``whitney[a][k]``
(rank-k flats inside a rank-a flat) and the flat sizes ``flat_size[k]``.
The counts below only ever look at those tables, so any profile that
passes :meth:`SpmdProfile.validate` can be plugged in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb
from pathlib import Path

from .gf import prime_power

__all__ = [
    "ProfileError",
    "SpmdProfile",
    "bracket",
    "gaussian",
    "profile_pg",
    "profile_ag",
    "profile_free",
    "flats_containing",
    "count_avoiding_hyperplanes",
    "count_circuit_points",
    "closed_forms",
    "load_profile",
    "check_profile_file",
    "CLOSED_FORM_KINDS",
]


class ProfileError(ValueError):
    pass


def bracket(x: int, q: int) -> int:
    """[x] = (q^x - 1)/(q - 1), the number of points of PG of rank x."""
    if x < 0 or q < 2:
        raise ValueError(f"bracket needs x >= 0 and q >= 2, got x={x}, q={q}")
    return (q**x - 1) // (q - 1)


def gaussian(x: int, k: int, q: int) -> int:
    """Gaussian binomial coefficient; 0 when k > x or k < 0."""
    if k < 0 or k > x:
        return 0
    g = 1
    for j in range(1, k + 1):
        # the partial product is itself gaussian(x, j), hence an integer
        g, rem = divmod(g * (q ** (x - j + 1) - 1), q**j - 1)
        assert rem == 0
    return g


def _check_q(q):
    if prime_power(q) is None:
        raise ValueError(f"q must be a prime power, got {q}")


@dataclass(frozen=True)
class SpmdProfile:
    name: str
    r: int
    whitney: tuple[tuple[int, ...], ...]
    flat_size: tuple[int, ...]

    def dl(self, a: int, k: int) -> int:
        return self.whitney[a][k]

    def problems(self) -> list[tuple[str, str]]:
        """Invariant violations as ``(location, message)`` pairs."""
        out = []
        r = self.r
        if not isinstance(r, int) or r < 0:
            return [("r", f"rank must be a non-negative integer, got {r!r}")]
        if len(self.whitney) != r + 1:
            out.append(("whitney", f"expected {r + 1} rows (ranks 0..{r}), got {len(self.whitney)}"))
        if len(self.flat_size) != r + 1:
            out.append(("flat_size", f"expected {r + 1} entries (ranks 0..{r}), got {len(self.flat_size)}"))
        if out:
            return out
        for a, row in enumerate(self.whitney):
            if len(row) != a + 1:
                out.append((f"whitney[{a}]", f"row must have {a + 1} entries, got {len(row)}"))
                continue
            for k, v in enumerate(row):
                if not isinstance(v, int) or v < 1:
                    out.append((f"whitney[{a}][{k}]", f"must be a positive integer, got {v!r}"))
            if row[0] != 1:
                out.append((f"whitney[{a}][0]", f"Dl({a},0) must be 1, got {row[0]}"))
            if row[a] != 1:
                out.append((f"whitney[{a}][{a}]", f"Dl({a},{a}) must be 1, got {row[a]}"))
        for k, v in enumerate(self.flat_size):
            if not isinstance(v, int):
                out.append((f"flat_size[{k}]", f"must be an integer, got {v!r}"))
        if out:
            return out
        fs = self.flat_size
        if fs[0] != 0:
            out.append(("flat_size[0]", f"<0> must be 0, got {fs[0]}"))
        if r >= 1 and fs[1] != 1:
            out.append(("flat_size[1]", f"<1> must be 1, got {fs[1]}"))
        for k in range(2, r + 1):
            if fs[k] <= fs[k - 1]:
                out.append((f"flat_size[{k}]", f"<k> must increase strictly: <{k - 1}>={fs[k - 1]}, <{k}>={fs[k]}"))
        for k in range(1, r + 1):
            if self.whitney[k][1] != fs[k]:
                out.append(
                    (f"whitney[{k}][1]", f"Dl({k},1)={self.whitney[k][1]} must equal <{k}>={fs[k]}")
                )
        for a in range(r + 1):
            for s in range(a + 1):
                for u in range(s + 1):
                    num = self.whitney[a][s] * self.whitney[s][u]
                    if num % self.whitney[a][u]:
                        out.append(
                            (
                                f"whitney[{a}][{s}]",
                                f"Dl({a},{s})*Dl({s},{u}) = {num} is not a multiple of Dl({a},{u}) = {self.whitney[a][u]}",
                            )
                        )
        return out

    def validate(self) -> SpmdProfile:
        probs = self.problems()
        if probs:
            raise ProfileError("profile inconsistent: " + "; ".join(f"{loc}: {msg}" for loc, msg in probs))
        return self

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "r": self.r,
            "whitney": [list(row) for row in self.whitney],
            "flat_size": list(self.flat_size),
        }


def profile_pg(r: int, q: int) -> SpmdProfile:
    _check_q(q)
    whitney = tuple(tuple(gaussian(a, k, q) for k in range(a + 1)) for a in range(r + 1))
    sizes = tuple(bracket(k, q) for k in range(r + 1))
    return SpmdProfile(f"PG(r={r},q={q})", r, whitney, sizes)


def profile_ag(r: int, q: int) -> SpmdProfile:
    _check_q(q)

    def dl(a, k):
        if k == 0:
            return 1
        return q ** (a - k) * gaussian(a - 1, k - 1, q)

    whitney = tuple(tuple(dl(a, k) for k in range(a + 1)) for a in range(r + 1))
    sizes = (0,) + tuple(q ** (k - 1) for k in range(1, r + 1))
    return SpmdProfile(f"AG(r={r},q={q})", r, whitney, sizes)


def profile_free(r: int) -> SpmdProfile:
    whitney = tuple(tuple(comb(a, k) for k in range(a + 1)) for a in range(r + 1))
    return SpmdProfile(f"free(r={r})", r, whitney, tuple(range(r + 1)))


def flats_containing(profile: SpmdProfile, s: int, u: int) -> int:
    """Number of rank-s flats through a fixed rank-u flat."""
    r = profile.r
    if not 0 <= u <= s <= r:
        raise ValueError(f"need 0 <= u <= s <= r, got u={u}, s={s}, r={r}")
    f, rem = divmod(profile.dl(r, s) * profile.dl(s, u), profile.dl(r, u))
    if rem:
        raise ProfileError(f"profile inconsistent: f({r},{s},{u}) is not an integer")
    return f


def count_avoiding_hyperplanes(profile: SpmdProfile) -> int:
    """Hyperplanes missing every element of a fixed basis (inclusion-exclusion)."""
    r = profile.r
    if r < 2:
        raise ValueError("hyperplane avoidance needs r >= 2")
    n = 0
    for k in range(r):
        term, rem = divmod(comb(r, k) * profile.dl(r, r - 1) * profile.dl(r - 1, k), profile.dl(r, k))
        if rem:
            raise ProfileError(f"profile inconsistent: term k={k} is not an integer")
        n += (-1) ** k * term
    return n


def count_circuit_points(profile: SpmdProfile) -> int:
    """Elements e for which B + e is a circuit, for a fixed basis B."""
    r = profile.r
    if r < 1:
        raise ValueError("circuit count needs r >= 1")
    return sum((-1) ** (r - k) * comb(r, k) * (profile.flat_size[k] - k) for k in range(r + 1))


CLOSED_FORM_KINDS = ("pg-hyperplanes", "ag-hyperplanes", "pg-circuits", "ag-circuits")


def closed_forms(kind: str, r: int, q: int) -> int:
    if r < 2 or q < 2:
        raise ValueError(f"closed forms need r >= 2 and q >= 2, got r={r}, q={q}")
    if kind in ("pg-hyperplanes", "pg-circuits"):
        return (q - 1) ** (r - 1)
    if kind == "ag-hyperplanes":
        return (q - 1) ** (r - 1) - 1
    if kind == "ag-circuits":
        n, rem = divmod((q - 1) ** r - (-1) ** r, q)
        assert rem == 0
        return n
    raise ValueError(f"unknown closed form {kind!r}; expected one of {', '.join(CLOSED_FORM_KINDS)}")


# --------------------------------------------------------------------------
# profile files


def _array_offsets(text: str, start: int) -> list[int]:
    """Offsets of the elements of the JSON array beginning at ``text[start]``."""
    dec = json.JSONDecoder()
    ws = " \t\r\n"
    i = start + 1
    out = []
    while i < len(text) and text[i] in ws:
        i += 1
    if i < len(text) and text[i] == "]":
        return out
    while i < len(text):
        out.append(i)
        _, i = dec.raw_decode(text, i)
        while i < len(text) and text[i] in ws:
            i += 1
        if i >= len(text) or text[i] == "]":
            break
        i += 1  # comma
        while i < len(text) and text[i] in ws:
            i += 1
    return out


def _locate(text: str, location: str) -> int | None:
    """Line number of a location like ``whitney[3][2]`` in a JSON object text."""
    key, _, rest = location.partition("[")
    idx = [int(x) for x in rest.rstrip("]").split("][")] if rest else []
    pos = text.find(f'"{key}"')
    if pos < 0:
        return None
    pos = text.index(":", pos) + 1
    while text[pos] in " \t\r\n":
        pos += 1
    try:
        for i in idx:
            if text[pos] != "[":
                break
            pos = _array_offsets(text, pos)[i]
    except (IndexError, ValueError):
        pass
    return text.count("\n", 0, pos) + 1


def check_profile_file(path: str | Path) -> tuple[SpmdProfile, list[str]]:
    """Parse a profile file; return it with its ``file:line:`` violation messages.

    Malformed JSON or missing fields raise ProfileError.
    """
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProfileError(f"{path}:{e.lineno}:{e.colno}: malformed JSON: {e.msg}") from None
    if not isinstance(data, dict):
        raise ProfileError(f"{path}:1: top level must be an object")
    for key in ("r", "whitney", "flat_size"):
        if key not in data:
            raise ProfileError(f"{path}:1: missing field {key!r}")
    try:
        whitney = tuple(tuple(row) for row in data["whitney"])
        sizes = tuple(data["flat_size"])
    except TypeError:
        raise ProfileError(f"{path}:{_locate(text, 'whitney')}: whitney must be a list of lists") from None
    profile = SpmdProfile(str(data.get("name", path.stem)), data["r"], whitney, sizes)
    lines = [f"{path}:{_locate(text, loc)}: {loc}: {msg}" for loc, msg in profile.problems()]
    return profile, lines


def load_profile(path: str | Path) -> SpmdProfile:
    """Read and validate a profile JSON file."""
    profile, lines = check_profile_file(path)
    if lines:
        raise ProfileError("profile inconsistent:\n" + "\n".join(lines))
    return profile
