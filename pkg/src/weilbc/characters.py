"""Class functions, inner products, lifting along norm maps, induced characters.

Class functions are stored on an explicit class partition; values live in
Q(ζ_p).  Virtual characters are ordinary ring elements here: torus-side
identities are verified entirely at the level of values, no representation
spaces are ever materialized for them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic import CycNum
from .errors import SupportMismatch
from .grouplib import GroupSpec, Partition, TorusSL2
from .normmap import NormConfig, gyoja_norm


@dataclass(frozen=True)
class ClassFunction:
    partition: Partition
    values: tuple

    @property
    def p(self) -> int:
        return self.values[0].p

    def at(self, g) -> CycNum:
        return self.values[self.partition.index_of(g)]

    def _match(self, other: "ClassFunction"):
        if self.partition is not other.partition:
            raise SupportMismatch("class functions live on different partitions")

    def __add__(self, other):
        self._match(other)
        return ClassFunction(self.partition, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        self._match(other)
        return ClassFunction(self.partition, tuple(a - b for a, b in zip(self.values, other.values)))

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            self._match(other)
            return ClassFunction(self.partition, tuple(a * b for a, b in zip(self.values, other.values)))
        return ClassFunction(self.partition, tuple(v * other for v in self.values))

    def conj(self):
        return ClassFunction(self.partition, tuple(v.conj() for v in self.values))

    def to_tsv(self) -> str:
        lines = ["class_id\trepresentative\tvalue\tcomplex"]
        for k, v in enumerate(self.values):
            z = v.to_complex()
            lines.append(f"{k}\t{self.partition.reps[k]}\t{v.to_text()}\t{z.real:+.6f}{z.imag:+.6f}j")
        return "\n".join(lines)


def indicator_basis(partition: Partition, p: int) -> list[ClassFunction]:
    out = []
    for k in range(len(partition)):
        vals = tuple(CycNum.one(p) if j == k else CycNum.zero(p) for j in range(len(partition)))
        out.append(ClassFunction(partition, vals))
    return out


def inner_product(f1: ClassFunction, f2: ClassFunction) -> CycNum:
    """(1/|G|) Σ_g f1(g) conj(f2(g)); the same formula serves twisted cosets."""
    f1._match(f2)
    p = f1.p
    total = CycNum.zero(p)
    size_total = 0
    for size, a, b in zip(f1.partition.sizes, f1.values, f2.values):
        total = total + a * b.conj() * CycNum.rational(p, size)
        size_total += size
    return total * CycNum.rational(p, 1, size_total)


twisted_inner_product = inner_product  # |σ^i ⋉ G(F')| = |G(F')|; same averaging


def lift_class_function(cfg: NormConfig, spec: GroupSpec, chi: ClassFunction,
                        twisted: Partition, ambient_cap: int = 64,
                        cache: dict | None = None) -> ClassFunction:
    """Pull a class function on G(F_d) back to the coset σ^i ⋉ G(F')."""
    target = chi.partition
    vals = []
    for rep in twisted.reps:
        el, _ = gyoja_norm(cfg, spec, rep, ambient_cap, cache=cache)
        vals.append(chi.values[target.index_of(el)])
    return ClassFunction(twisted, tuple(vals))


def trace_class_function(ctx, partition: Partition) -> ClassFunction:
    """tr ρ_d as a class function on the partition's group."""
    return ClassFunction(partition, tuple(ctx.build_rho(rep).trace() for rep in partition.reps))


def induced_value(y, reps, conj_fn, member_fn, chi_fn, p: int) -> CycNum:
    """Σ over coset representatives r with r^{-1}·y·r in H of χ(r^{-1}·y·r).

    This is the fixed-coset form of the standard induced-character formula.
    """
    total = CycNum.zero(p)
    for r in reps:
        z = conj_fn(r, y)
        if member_fn(z):
            total = total + chi_fn(z)
    return total


def induce_character(big_spec: GroupSpec, coset_reps, member_fn, chi_fn,
                     partition: Partition, p: int) -> ClassFunction:
    """Induced character as a class function on the big group's partition."""

    def conj(r, y):
        return big_spec.mul(big_spec.mul(big_spec.inv(r), y), r)

    vals = tuple(induced_value(rep, coset_reps, conj, member_fn, chi_fn, p) for rep in partition.reps)
    return ClassFunction(partition, vals)


# -- elliptic torus characters ---------------------------------------------------


def omega(torus: TorusSL2) -> dict:
    """The unique order-2 character of the cyclic torus."""
    out = {}
    for g in torus.elements():
        out[g] = 1 if torus.log(g) % 2 == 0 else -1
    return out


def omega_prime(torus_top: TorusSL2, torus_base: TorusSL2, d: int = 1) -> dict:
    """ω ∘ (norm down to the level-d torus); equals the order-2 character."""
    base_omega = omega(torus_base)
    out = {}
    for g in torus_top.elements():
        out[g] = base_omega[torus_top.norm_to_level(g, d)]
    return out


def eta(j: int) -> int:
    """Order-2 character of the Galois group, η(σ^j) = (-1)^j."""
    return -1 if j % 2 else 1


def weil_torus_restriction(ctx, torus: TorusSL2) -> dict:
    """Multiplicities of torus characters in ρ restricted to the elliptic torus.

    Verified through the pointwise identity tr ρ(t) = |T|·[t = 1] - ω(t),
    which is equivalent to: every character appears once except ω.
    Multiplicities are keyed by the exponent of the torus character with
    respect to the canonical generator; ω corresponds to exponent |T|/2.
    """
    om = omega(torus)
    order = torus.order()
    p = ctx.p
    ident = torus.identity()
    ok = True
    details = []
    for g in torus.elements():
        tr = ctx.build_rho(g).trace()
        expected = CycNum.rational(p, (order if g == ident else 0) - om[g])
        details.append((g, tr, expected, tr == expected))
        if tr != expected:
            ok = False
    mult = {k: 1 for k in range(order)}
    mult[order // 2] = 0
    return {"verified": ok, "multiplicities": mult if ok else None, "details": details}
