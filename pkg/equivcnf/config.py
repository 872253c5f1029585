import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, Field, PositiveInt, ValidationError, field_validator, model_validator

from equivcnf import constants
from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.algebra.rational import RationalFunction
from equivcnf.errors import ConfigError

logger = logging.getLogger(__name__)


class RationalSpec(BaseModel):
    """A rational function num/den with integer coefficient lists, low degree first."""

    num: List[int] = Field(description="Numerator coefficients, reduced mod l.")
    den: List[int] = Field(default=[1], description="Denominator coefficients, reduced mod l.")


# A coefficient of K or of a matrix over F_q(t): a polynomial coefficient list or a quotient.
Entry = Union[List[int], RationalSpec]


def entry_to_rational(field: FqField, entry: Entry) -> RationalFunction:
    if isinstance(entry, RationalSpec):
        return RationalFunction.from_ints(field, entry.num, entry.den)
    return RationalFunction.from_ints(field, entry)


class FieldConfig(BaseModel):
    char: PositiveInt = Field(description="Characteristic l of F_q (a prime).")
    degree: PositiveInt = Field(default=1, description="Extension degree e with q = l^e.")
    modulus: Optional[List[int]] = Field(
        default=None, description="Monic degree-e irreducible over F_l defining F_q, low degree first."
    )

    def build(self) -> FqField:
        return FqField(self.char, self.degree, tuple(self.modulus) if self.modulus else None)


class GroupConfig(BaseModel):
    kind: Literal["trivial", "cyclic", "catalog", "table"] = Field(
        default="trivial", description="How the Galois group is given."
    )
    order: Optional[PositiveInt] = Field(default=None, description="Order of a cyclic group.")
    name: Optional[str] = Field(default=None, description="Catalog group name (e.g. S3).")
    table: Optional[List[List[int]]] = Field(default=None, description="Explicit Cayley table, identity first.")
    labels: Optional[List[str]] = Field(default=None, description="Element labels for an explicit table.")

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind == "cyclic" and self.order is None:
            raise ValueError("cyclic group needs 'order'")
        if self.kind == "catalog" and not self.name:
            raise ValueError("catalog group needs 'name'")
        if self.kind == "table" and not self.table:
            raise ValueError("table group needs 'table'")
        return self


class CoverConfig(BaseModel):
    """The cover K = F_q(t)[x]/(g) with an A-basis of O_K and the Galois action."""

    g: List[List[int]] = Field(description="Coefficients of g in x (low first), each an A-polynomial.")
    group: GroupConfig = Field(default_factory=GroupConfig, description="The Galois group G.")
    basis: Optional[List[List[Entry]]] = Field(
        default=None, description="A-basis of O_K, one row per element in power-basis coordinates."
    )
    action: Dict[str, List[List[Entry]]] = Field(
        default_factory=dict,
        description="Matrix of each generator on the O_K basis; column j holds the image of the j-th basis element.",
    )
    maximal: bool = Field(default=True, description="Whether the supplied order is asserted to be maximal.")
    taming_basis: Optional[List[List[Entry]]] = Field(
        default=None, description="A-basis of a taming module in power-basis coordinates (wild covers)."
    )

    @field_validator("g")
    @classmethod
    def _check_g(cls, g):
        if len(g) < 2:
            raise ValueError("g must have degree at least 1 in x")
        if list(g[-1]) != [1]:
            raise ValueError("g must be monic in x")
        return g


class DrinfeldConfig(BaseModel):
    coefficients: List[List[int]] = Field(
        description="Coefficients a_1..a_r of phi_E(t) = t + a_1 tau + ... + a_r tau^r, each an A-polynomial."
    )

    @field_validator("coefficients")
    @classmethod
    def _check_rank(cls, coefficients):
        if not coefficients or not any(coefficients[-1]):
            raise ValueError("the leading coefficient a_r must be nonzero")
        return coefficients

    def build(self, field: FqField) -> List[FqPoly]:
        return [FqPoly.from_ints(field, c) for c in self.coefficients]


class Expectations(BaseModel):
    """Values a fixture is known to produce; used by tests and the fixtures listing."""

    class_module_trivial: Optional[bool] = Field(default=None, description="Whether H(E/M) = 0.")
    tame: Optional[bool] = Field(default=None, description="Whether every ramified prime is tame.")
    wild_primes: Optional[List[List[int]]] = Field(default=None, description="Wild primes, as coefficient lists.")
    notes: Optional[str] = Field(default=None, description="Free-form description.")


class SessionConfig(BaseModel):
    """Everything a computation session needs."""

    name: str = Field(default="session", description="Instance name used in report file names.")
    description: str = Field(default="", description="One-line description of the instance.")
    field: FieldConfig = Field(description="The constant field F_q.")
    cover: Optional[CoverConfig] = Field(default=None, description="The Galois cover K/k.")
    drinfeld: Optional[DrinfeldConfig] = Field(default=None, description="The Drinfeld module E.")
    group: Optional[GroupConfig] = Field(default=None, description="A group without a cover (algebra-only instances).")
    decomposition: Optional[str] = Field(default=None, description="Catalog decomposition name for non-abelian G.")
    precision: PositiveInt = Field(default=constants.SessionDefaults.precision, description="Truncation precision N.")
    ball_budget: PositiveInt = Field(
        default=constants.SessionDefaults.ball_budget, description="Largest ball index tried while stabilizing."
    )
    extra_ball: int = Field(
        default=constants.SessionDefaults.extra_ball, ge=0, description="Ball indices added beyond the isometry ball."
    )
    confirmation_steps: int = Field(
        default=constants.SessionDefaults.confirmation_steps, ge=0,
        description="Extra stabilization steps required after two agreeing images.",
    )
    nucleus_index: Optional[PositiveInt] = Field(default=None, description="Ball index i for the compact quotient.")
    prime_bound_override: Optional[PositiveInt] = Field(
        default=None, description="Override of the prime cutoff; voids certification."
    )
    seed: int = Field(default=constants.DEFAULT_SEED, description="Seed for randomized searches.")
    threads: PositiveInt = Field(default=1, description="Worker cap for per-prime parallel work.")
    expected: Expectations = Field(default_factory=Expectations, description="Known results for this instance.")

    def require_cover(self) -> CoverConfig:
        if self.cover is None:
            raise ConfigError(f"{self.name}: this computation needs a 'cover' section")
        return self.cover

    def require_drinfeld(self) -> DrinfeldConfig:
        if self.drinfeld is None:
            raise ConfigError(f"{self.name}: this computation needs a 'drinfeld' section")
        return self.drinfeld

    def with_overrides(self, **overrides: Any) -> "SessionConfig":
        """A revalidated copy with the non-None overrides applied."""
        values = {k: v for k, v in overrides.items() if v is not None}
        return type(self).model_validate({**self.model_dump(), **values})


def load_config(path: Union[str, Path]) -> SessionConfig:
    """Read and validate a session document; errors name the offending field."""
    path = Path(path)
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as e:
        logger.error(f"Failed to read config {path}: {e}")
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    return parse_config(raw, source=str(path))


def parse_config(raw: Any, source: str = "<config>") -> SessionConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: expected a mapping at the top level")
    try:
        return SessionConfig.model_validate(raw)
    except ValidationError as e:
        fields = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        logger.error(f"Invalid config {source}: {fields}")
        raise ConfigError(f"{source}: {fields}") from e


def list_fixtures() -> list[str]:
    return sorted(p.stem for p in constants.FIXTURE_DIR.glob("*.yaml"))


def load_fixture(name: str) -> SessionConfig:
    path = constants.FIXTURE_DIR / f"{name}.yaml"
    if not path.exists():
        raise ConfigError(f"Unknown fixture {name!r}; available: {', '.join(list_fixtures())}")
    return load_config(path)
