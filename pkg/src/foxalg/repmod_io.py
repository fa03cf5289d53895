"""Corpus files, module persistence and the brute-force factor oracle.

The oracle is exponential and only meant for tiny instances in tests; the
main library never imports this module.
"""
from __future__ import annotations

import functools
import itertools
import json
import random
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Tuple

from .errors import (
    BoundedVerdict,
    CorpusFormatError,
    FieldMismatch,
    FoxError,
    IsUnit,
    NotDivisibleWithinBound,
    SearchSpaceTooLarge,
)
from .expr import format_poly
from .factor import (
    Factorization,
    composition_length,
    divide_left,
    divide_right,
    endo_dim,
    factorize,
    gcd,
    is_irreducible,
    lattice_of,
    similar,
)
from .fox import DerivativeIndex, StarContext, partial_derivative, star_action
from .freepoly import FreePolynomial, order_of, strictly_maximal
from .linalg import det, identity, mat_mul
from .repmod import OperatorModule
from .scalars import PrimeField, format_scalar
from .words import reduced_words, word_from_json, word_to_json

__all__ = [
    "CorpusEntry",
    "CorpusReport",
    "PROVENANCE_TAGS",
    "ORACLES",
    "load_corpus",
    "save_corpus",
    "corpus_verify",
    "shipped_corpus_path",
    "run_oracle_factor_search",
    "save_module",
    "load_module",
    "save_factorization",
    "load_factorization",
]

SEARCH_LIMIT = 10**7
PROVENANCE_TAGS = ("reference", "trivial", "derived")


# brute-force oracle ----------------------------------------------------------------


def _comonic_short(rank: int, F: PrimeField) -> List[FreePolynomial]:
    """Comonic non-units supported on words of length <= 1."""
    words = list(reduced_words(rank, 1))
    out = []
    for tail in itertools.product(range(F.p), repeat=len(words) - 1):
        coeffs = [F(1 - sum(tail))] + [F(c) for c in tail]
        g = FreePolynomial({w: c for w, c in zip(words, coeffs) if c != 0}, rank, F)
        if not g.is_unit():
            out.append(g)
    return out


def _representations(rank: int, F: PrimeField, count: int = 30) -> List[Dict[tuple, list]]:
    """Ring maps Λ -> matrices: all characters plus random 2x2 ones."""
    reps = []
    units = [F(a) for a in range(1, F.p)]
    chars = itertools.product(units, repeat=rank)
    for vals in itertools.islice(chars, 64):
        reps.append({(i + 1, s): [[v if s == 1 else 1 / v]] for i, v in enumerate(vals) for s in (1, -1)})
    rng = random.Random(2024)
    while len(reps) < 64 + count:
        gens = {}
        for i in range(1, rank + 1):
            while True:
                A = [[F(rng.randrange(F.p)) for _ in range(2)] for _ in range(2)]
                d = det(A, F)
                if d != 0:
                    break
            inv = [[A[1][1] / d, -A[0][1] / d], [-A[1][0] / d, A[0][0] / d]]
            gens[(i, 1)], gens[(i, -1)] = A, inv
        reps.append(gens)
    return reps


def _evaluate(rep, g: FreePolynomial):
    F = g.field
    size = len(next(iter(rep.values())))
    acc = [[F.zero] * size for _ in range(size)]
    for w, c in g.terms.items():
        m = identity(F, size)
        for a in w:
            m = mat_mul(m, rep[a], F)
        acc = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(acc, m)]
    return acc


def _singular_mask(reps, g: FreePolynomial) -> int:
    mask = 0
    for k, rep in enumerate(reps):
        if det(_evaluate(rep, g), g.field) == 0:
            mask |= 1 << k
    return mask


@functools.lru_cache(maxsize=8)
def _short_table(rank: int, p: int):
    F = PrimeField(p)
    reps = _representations(rank, F)
    return reps, [(g, _singular_mask(reps, g)) for g in _comonic_short(rank, F)]


def run_oracle_factor_search(gamma: FreePolynomial, max_len: int = 2) -> List[Tuple[FreePolynomial, FreePolynomial]]:
    """All (α, β) of comonic non-units with α·β = γ and |α|, |β| <= max_len,
    one of which is supported on words of length <= 1.

    For each short candidate the partner is unique and found by exact
    division.  Candidates are first screened with ring maps into small
    matrix algebras: if ρ(γ) is invertible then so are ρ(α) and ρ(β).
    """
    F = gamma.field
    if not isinstance(gamma.field, PrimeField):
        raise FieldMismatch("the factor oracle enumerates over GF(p) only")
    if gamma.is_unit():
        raise IsUnit(f"{gamma} is a unit")
    n = gamma.rank
    estimate = 2 * F.p ** (2 * n)
    if estimate > SEARCH_LIMIT:
        raise SearchSpaceTooLarge(f"about {estimate} candidates")
    if gamma.is_zero() or gamma.augmentation() != 1 or max_len < 1:
        return []
    reps, table = _short_table(n, F.p)
    regular = ~_singular_mask(reps, gamma)
    found = {}
    for short, mask in table:
        if mask & regular or short.length() > max_len:
            continue
        for side in ("right", "left"):
            try:
                if side == "right":
                    alpha, beta = divide_right(gamma, short, max_len), short
                else:
                    alpha, beta = short, divide_left(gamma, short, max_len)
            except NotDivisibleWithinBound:
                continue
            if alpha.is_unit() or beta.is_unit():
                continue
            found[(alpha, beta)] = None
    pairs = list(found)
    pairs.sort(key=lambda ab: (ab[0].sort_key(), ab[1].sort_key()))
    return pairs


# persistence ---------------------------------------------------------------------


def save_module(M: OperatorModule, path) -> None:
    Path(path).write_text(json.dumps(M.to_json(), sort_keys=True) + "\n")


def load_module(path) -> OperatorModule:
    return OperatorModule.from_json(json.loads(Path(path).read_text()))


def save_factorization(f: Factorization, path) -> None:
    data = f.to_json()
    data["input"] = f.input.to_json()
    Path(path).write_text(json.dumps(data, sort_keys=True) + "\n")


def load_factorization(path) -> Factorization:
    data = json.loads(Path(path).read_text())
    try:
        inp = FreePolynomial.from_json(data["input"])
        factors = [FreePolynomial.from_json(f) for f in data["factors"]]
        unit = inp.field.parse(str(data["unit"]))
        uw = word_from_json(data.get("unit_word", []), inp.rank)
    except KeyError as exc:
        raise CorpusFormatError(f"missing field {exc}") from exc
    out = Factorization(unit, factors, inp, uw)
    if not out.verified:
        raise CorpusFormatError("stored factors do not multiply back to the input")
    return out


# corpus ------------------------------------------------------------------------------


def _poly_arg(entry, key):
    data = entry.args.get(key)
    if data is None:
        raise CorpusFormatError(f"entry {entry.id}: missing argument {key!r}")
    if isinstance(data, str):
        from .expr import parse_expr

        return parse_expr(data, entry.input.rank, entry.input.field)
    return FreePolynomial.from_json(data)


def _run_derive(e):
    d = DerivativeIndex(int(e.args["index"]), bool(e.args.get("barred", False)))
    return format_poly(partial_derivative(d, e.input))


def _run_divide(e):
    try:
        return format_poly(divide_right(e.input, _poly_arg(e, "divisor"), e.args.get("max_len")))
    except NotDivisibleWithinBound:
        return {"status": "not_divisible"}


def _run_star(e):
    ctx = StarContext(_poly_arg(e, "gamma"))
    return format_poly(star_action(ctx, int(e.args["operator"]), e.input))


def _run_maximal(e):
    words, _, special = strictly_maximal(e.input)
    return {"words": sorted(word_to_json(w) for w in words), "special": special}


def _run_factor(e):
    f = factorize(e.input)
    return {"length": f.length, "verified": f.verified, "unit": format_scalar(f.unit)}


def _run_oracle(e):
    pairs = run_oracle_factor_search(e.input, int(e.args.get("max_len", 2)))
    return {"count": len(pairs), "pairs": [[format_poly(a), format_poly(b)] for a, b in pairs]}


OPERATIONS: Dict[str, Callable] = {
    "normalize": lambda e: format_poly(e.input),
    "multiply": lambda e: format_poly(e.input * _poly_arg(e, "right")),
    "augmentation": lambda e: format_scalar(e.input.augmentation()),
    "length": lambda e: e.input.length(),
    "order": lambda e: order_of(e.input),
    "maximal": _run_maximal,
    "derive": _run_derive,
    "star_action": _run_star,
    "divide": _run_divide,
    "lattice_dim": lambda e: lattice_of(e.input.normalized()).dim,
    "irreducible": lambda e: is_irreducible(e.input),
    "composition_length": lambda e: composition_length(e.input),
    "factor": _run_factor,
    "gcd": lambda e: format_poly(gcd(e.input, _poly_arg(e, "other"))),
    "similar": lambda e: similar(e.input, _poly_arg(e, "other")),
    "endo_dim": lambda e: endo_dim(e.input),
    "oracle_factor_search": _run_oracle,
}

# Independent checks a derived entry may cite.
ORACLES = {
    "multiply-back": "quotients and factors are checked by exact multiplication",
    "exhaustive-enumeration": "brute-force search over all short comonic candidates",
    "schur": "a one-dimensional simple module has one-dimensional endomorphisms",
    "dimension-count": "derivative span dimension minus the line of the input",
    "series-valuation": "lowest degree of the truncated Magnus image",
    "hand-computation": "expanded by hand from the product rule",
}


@dataclass
class CorpusEntry:
    id: str
    op: str
    input: FreePolynomial
    expected: object
    provenance: dict
    args: dict = dc_field(default_factory=dict)

    @classmethod
    def from_json(cls, data, line: int = 0) -> "CorpusEntry":
        where = f"line {line}"
        if not isinstance(data, dict):
            raise CorpusFormatError(f"{where}: entry is not an object")
        for key in ("id", "op", "input", "expected", "provenance"):
            if key not in data:
                raise CorpusFormatError(f"{where}: missing {key!r}")
        prov = data["provenance"]
        if not isinstance(prov, dict) or prov.get("tag") not in PROVENANCE_TAGS:
            raise CorpusFormatError(f"{where} ({data['id']}): provenance tag must be one of {PROVENANCE_TAGS}")
        if prov["tag"] == "reference" and not prov.get("citation"):
            raise CorpusFormatError(f"{where} ({data['id']}): reference entries need a citation")
        if prov["tag"] == "derived" and prov.get("oracle") not in ORACLES:
            raise CorpusFormatError(f"{where} ({data['id']}): derived entries must name a registered oracle")
        if data["op"] not in OPERATIONS:
            raise CorpusFormatError(f"{where} ({data['id']}): unknown op {data['op']!r}")
        try:
            inp = FreePolynomial.from_json(data["input"])
        except FoxError as exc:
            raise CorpusFormatError(f"{where} ({data['id']}): bad input: {exc}") from exc
        return cls(data["id"], data["op"], inp, data["expected"], prov, data.get("args", {}))

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "op": self.op,
            "input": self.input.to_json(),
            "expected": self.expected,
            "provenance": self.provenance,
        }
        if self.args:
            out["args"] = self.args
        return out

    def run(self):
        return OPERATIONS[self.op](self)


def load_corpus(path) -> List[CorpusEntry]:
    entries, seen = [], set()
    for k, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"line {k}: invalid JSON: {exc}") from exc
        e = CorpusEntry.from_json(data, k)
        if e.id in seen:
            raise CorpusFormatError(f"line {k}: duplicate id {e.id!r}")
        seen.add(e.id)
        entries.append(e)
    return entries


def save_corpus(entries, path) -> None:
    with open(path, "w") as fh:
        for e in entries:
            fh.write(json.dumps(e.to_json(), sort_keys=True) + "\n")


@dataclass
class CorpusReport:
    passed: List[str] = dc_field(default_factory=list)
    mismatches: List[Tuple[str, object, object]] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def lines(self) -> List[str]:
        out = [f"PASS {i}" for i in self.passed]
        out += [f"FAIL {i}: expected {exp!r}, got {got!r}" for i, exp, got in self.mismatches]
        return out


def corpus_verify(path) -> CorpusReport:
    """Re-run every entry and compare with its stored expectation."""
    report = CorpusReport()
    for e in load_corpus(path):
        try:
            got = e.run()
        except (FoxError, BoundedVerdict) as exc:
            got = {"error": type(exc).__name__}
        if got == e.expected:
            report.passed.append(e.id)
        else:
            report.mismatches.append((e.id, e.expected, got))
    return report


def shipped_corpus_path() -> Path:
    return Path(str(resources.files("foxalg") / "data" / "worked_examples.jsonl"))
