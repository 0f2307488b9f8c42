"""Pipeline parameters: the constant hierarchy, derived probabilities and split tables.

The absorber size k generalizes the gadget constants: with ρ the
monochromatic-matching parameter (``eta_mc``, default η),

    p_rb = 2η          q_rb = 4η/(3k)       p_mc = 12kρ        q_mc = 6ρ
    p̃ = η/k + 6ρ       p̃′ = p_rb + p_mc     q̃ = β̃ = 2p̃′
    p∘ = 1 − p̃′(1+γ) − (p̃′+p̃)(1+ξ) − 2μ
    q∘1 = 1 − q_rb − q_mc(1+γ) − q̃(1+ξ) − μ        q∘2 = p∘ − q∘1
    β∘1 = 1 − 8ρ − β̃(1+ξ) − μ                      β∘2 = p∘ − β∘1
    q△ = (q_rb/2 − q∘2)/3                          β△ = (4ρ − η(1+γ) − β∘2)/3

and the sizes m = ⌈(ρ − ε/5)n⌉, s = ⌈(q_rb/4 − 2γ/5)n⌉,
r = ⌈(η/k + 6ρ + 3γ)n⌉, b = ⌈(μ − ξ^{1/3})n⌉, t = n/2. k = 256 recovers
q_rb = η/192 and p_mc = 3072ρ.
"""

from math import ceil
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.utils.errors import InvalidArgumentError, from_pydantic_error
from rainbow_decomp.utils.serialization import expect_mapping, read_json

SPLIT_TOLERANCE = 1e-12


class SplitRow(BaseModel):
    """One random split: the parent's weight and the weights of its cells."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    parent_weight: float
    cells: List[Tuple[str, float]]

    @property
    def total(self) -> float:
        return sum(w for _, w in self.cells)

    @property
    def balanced(self) -> bool:
        return abs(self.total - self.parent_weight) <= SPLIT_TOLERANCE

    def normalized(self) -> List[float]:
        """Cell weights relative to the parent, for :func:`rainbow_decomp.core.splits.random_split`."""
        return [w / self.parent_weight for _, w in self.cells]


class IdentityCheck(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    value: float
    target: float
    tolerance: float
    ok: bool


class PipelineParams(BaseModel):
    """Parameters ε < γ < ξ < μ < η for an instance on n vertices."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=2, description="Number of vertices (even)")
    eps: float = Field(..., gt=0, lt=1)
    gamma: float = Field(..., gt=0, lt=1)
    xi: float = Field(..., gt=0, lt=1)
    mu: float = Field(..., gt=0, lt=1)
    eta: float = Field(..., gt=0, lt=1)
    eta_mc: Optional[float] = Field(default=None, gt=0, lt=1, description="ρ; defaults to η")
    absorber_size: int = Field(default=256, ge=2, description="k, the size of each absorber matching")
    cycle_length: int = Field(default=3, ge=3)
    audit_gamma: float = Field(default=0.25, ge=0, description="γ used to judge desk-scale nibble stand-ins")

    @field_validator("n")
    @classmethod
    def validate_even(cls, v: int) -> int:
        if v % 2:
            raise ValueError(f"n must be even, got {v}")
        return v

    @model_validator(mode="after")
    def validate_probabilities(self) -> "PipelineParams":
        bad = {name: value for name, value in self.probabilities().items() if not 0 <= value <= 1}
        if bad:
            listed = ", ".join(f"{k}={v:.6g}" for k, v in sorted(bad.items()))
            raise ValueError(f"probabilities outside [0, 1]: {listed}")
        return self

    # --- derived constants ---

    @property
    def rho(self) -> float:
        return self.eta_mc if self.eta_mc is not None else self.eta

    @property
    def t(self) -> int:
        return self.n // 2

    @property
    def p_rb(self) -> float:
        return 2 * self.eta

    @property
    def q_rb(self) -> float:
        return 4 * self.eta / (3 * self.absorber_size)

    @property
    def p_mc(self) -> float:
        return 12 * self.absorber_size * self.rho

    @property
    def q_mc(self) -> float:
        return 6 * self.rho

    @property
    def p_tilde(self) -> float:
        return self.eta / self.absorber_size + 6 * self.rho

    @property
    def p_tilde_prime(self) -> float:
        return self.p_rb + self.p_mc

    @property
    def q_tilde(self) -> float:
        return 2 * self.p_tilde_prime

    @property
    def beta_tilde(self) -> float:
        return 2 * self.p_tilde_prime

    @property
    def p_circ(self) -> float:
        return (
            1
            - self.p_tilde_prime * (1 + self.gamma)
            - (self.p_tilde_prime + self.p_tilde) * (1 + self.xi)
            - 2 * self.mu
        )

    @property
    def q_circ1(self) -> float:
        return 1 - self.q_rb - self.q_mc * (1 + self.gamma) - self.q_tilde * (1 + self.xi) - self.mu

    @property
    def q_circ2(self) -> float:
        return self.p_circ - self.q_circ1

    @property
    def beta_circ1(self) -> float:
        return 1 - 8 * self.rho - self.beta_tilde * (1 + self.xi) - self.mu

    @property
    def beta_circ2(self) -> float:
        return self.p_circ - self.beta_circ1

    @property
    def q_tri(self) -> float:
        return (self.q_rb / 2 - self.q_circ2) / 3

    @property
    def beta_tri(self) -> float:
        return (4 * self.rho - self.eta * (1 + self.gamma) - self.beta_circ2) / 3

    @property
    def m(self) -> int:
        return ceil((self.rho - self.eps / 5) * self.n)

    @property
    def s(self) -> int:
        return ceil((self.q_rb / 4 - 2 * self.gamma / 5) * self.n)

    @property
    def r(self) -> int:
        return ceil((self.eta / self.absorber_size + 6 * self.rho + 3 * self.gamma) * self.n)

    @property
    def b(self) -> int:
        return ceil((self.mu - self.xi ** (1 / 3)) * self.n)

    def probabilities(self) -> Dict[str, float]:
        return {
            "p_rb": self.p_rb,
            "q_rb": self.q_rb,
            "p_mc": self.p_mc,
            "q_mc": self.q_mc,
            "p_tilde": self.p_tilde,
            "p_tilde_prime": self.p_tilde_prime,
            "q_tilde": self.q_tilde,
            "p_circ": self.p_circ,
            "q_circ1": self.q_circ1,
            "q_circ2": self.q_circ2,
            "beta_circ1": self.beta_circ1,
            "beta_circ2": self.beta_circ2,
            "q_tri": self.q_tri,
            "beta_tri": self.beta_tri,
        }

    def sizes(self) -> Dict[str, int]:
        return {"t": self.t, "m": self.m, "s": self.s, "r": self.r, "b": self.b}

    # --- audits ---

    def split_table(self) -> List[SplitRow]:
        """Every random split with its parent weight; each row's cells sum to the parent."""
        g, x = self.gamma, self.xi
        return [
            SplitRow(
                name="vertices",
                parent_weight=1.0,
                cells=[
                    ("U", self.p_tilde_prime * (1 + g)),
                    ("V_tilde", (self.p_tilde_prime + self.p_tilde) * (1 + x)),
                    ("V_circ", self.p_circ),
                    ("A", self.mu),
                    ("B", self.mu),
                ],
            ),
            SplitRow(
                name="U",
                parent_weight=self.p_tilde_prime * (1 + g),
                cells=[("V_rb", self.p_rb * (1 + g)), ("V_mc", self.p_mc * (1 + g))],
            ),
            SplitRow(name="B", parent_weight=self.mu, cells=[("B_1", self.mu / 2), ("B_2", self.mu / 2)]),
            SplitRow(
                name="colours",
                parent_weight=1.0,
                cells=[
                    ("C_1", self.q_rb / 2),
                    ("C_2", self.q_rb / 2),
                    ("D", self.q_mc * (1 + g)),
                    ("C_tilde", self.q_tilde * (1 + x)),
                    ("C_bullet", self.mu),
                    ("C_circ1", self.q_circ1),
                ],
            ),
            SplitRow(
                name="C_1",
                parent_weight=self.q_rb / 2,
                cells=[
                    ("C_tri1", self.q_tri),
                    ("C_tri2", self.q_tri),
                    ("C_tri3", self.q_tri),
                    ("C_circ2", self.q_circ2),
                ],
            ),
            SplitRow(
                name="edges",
                parent_weight=1.0,
                cells=[
                    ("G_1", 4 * self.rho),
                    ("G_2", 4 * self.rho),
                    ("G_tilde", self.beta_tilde * (1 + x)),
                    ("G_bullet", self.mu),
                    ("G_circ1", self.beta_circ1),
                ],
            ),
            SplitRow(
                name="G_1",
                parent_weight=4 * self.rho,
                cells=[
                    ("G_rb", self.eta * (1 + g)),
                    ("G_tri1", self.beta_tri),
                    ("G_tri2", self.beta_tri),
                    ("G_tri3", self.beta_tri),
                    ("G_circ2", self.beta_circ2),
                ],
            ),
        ]

    def identity_checks(self) -> List[IdentityCheck]:
        k = self.absorber_size
        checks = [
            ("q_circ2", self.q_circ2, self.eta / (3 * k) - self.mu, self.xi),
            ("beta_circ2", self.beta_circ2, 2 * self.rho - self.eta / k - self.mu, self.xi),
        ]
        out = [
            IdentityCheck(name=name, value=value, target=target, tolerance=tol, ok=abs(value - target) <= tol)
            for name, value, target, tol in checks
        ]
        out.append(
            IdentityCheck(
                name="q_tri_lower", value=self.q_tri, target=self.eta / (9 * k), tolerance=0.0,
                ok=self.q_tri >= self.eta / (9 * k),
            )
        )
        out.append(
            IdentityCheck(
                name="beta_tri_lower", value=self.beta_tri, target=self.rho / 3, tolerance=0.0,
                ok=self.beta_tri >= self.rho / 3,
            )
        )
        return out

    def regime_flags(self) -> Dict[str, bool]:
        """The hierarchy ε < γ < ξ < μ < η plus the derived inequalities the sizes rely on."""
        flags = {
            "eps<gamma": self.eps < self.gamma,
            "gamma<xi": self.gamma < self.xi,
            "xi<mu": self.xi < self.mu,
            "mu<eta": self.mu < self.eta,
            "b>0": self.b > 0,
            "s>0": self.s > 0,
            "splits_balanced": all(row.balanced for row in self.split_table()),
        }
        flags.update({f"identity:{c.name}": c.ok for c in self.identity_checks()})
        return flags

    def summary(self) -> Dict[str, Any]:
        return {
            "inputs": self.model_dump(),
            "sizes": self.sizes(),
            "probabilities": self.probabilities(),
            "regime": self.regime_flags(),
        }

    # --- construction ---

    @classmethod
    def desk_preset(cls, n: int) -> "PipelineParams":
        """Absorber size 4 with constants that keep every probability in [0, 1] for n ≤ 200."""
        return build_params(
            n=n, eps=1e-14, gamma=1e-13, xi=1e-12, mu=3e-4, eta=5e-3, absorber_size=4, audit_gamma=0.25
        )


def build_params(**values: Any) -> PipelineParams:
    try:
        return PipelineParams(**values)
    except PydanticValidationError as e:
        raise from_pydantic_error(e, "Invalid pipeline parameters", parameters=values)


def load_params(path: Union[str, Path], n: int) -> PipelineParams:
    """Read parameters from JSON; ``n`` is supplied by the caller unless the file sets it."""
    data = dict(expect_mapping(read_json(path), str(path)))
    data.setdefault("n", n)
    if data["n"] != n:
        raise InvalidArgumentError(
            message=f"{path} fixes n={data['n']} but n={n} was requested", details={"path": str(path)}
        )
    return build_params(**data)


__all__ = [
    "SPLIT_TOLERANCE",
    "SplitRow",
    "IdentityCheck",
    "PipelineParams",
    "build_params",
    "load_params",
]
