# The MIT License (MIT)

# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated
# documentation files (the "Software"), to deal in the Software without restriction, including without limitation
# the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software,
# and to permit persons to whom the Software is furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all copies or substantial portions of
# the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO
# THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL
# THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION
# OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
# DEALINGS IN THE SOFTWARE.

import os
import argparse
import logging
from dataclasses import dataclass

import yaml
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel

from equivcnf import constants
from equivcnf.config import (
    DrinfeldConfig,
    SessionConfig,
    entry_to_rational,
    list_fixtures,
    load_config,
    load_fixture,
)
from equivcnf.covers.cover import build_cover
from equivcnf.covers.taming import TamingModule, taming_module
from equivcnf.drinfeld.exponential import isometry_ball
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.errors import (
    BudgetExceeded,
    ConfigError,
    EquivCNFError,
    MismatchWithDiff,
    NotPolynomialWithinPrecision,
    PrecisionExhausted,
)
from equivcnf.groups.decomposition import DecompositionData, load_catalog
from equivcnf.invariants import (
    InvariantOptions,
    class_module,
    exponential_image,
    mtII_check,
    mtIII_check,
    unit_lattice,
    verify_cnf,
)
from equivcnf.invariants.pipeline import unit_precision
from equivcnf.invariants.units import unit_checks
from equivcnf.lseries.euler import theta_truncated
from equivcnf.lseries.stickelberger import stickelberger
from equivcnf.lseries.zeta import zeta_partial
from equivcnf.reports import low_confidence, print_summary, write_report
from equivcnf.trace.formula import trace_formula_verify
from equivcnf.trace.nuclear import NuclearSeq, phi_E_sequence, sequence_from_terms

load_dotenv()

logger = logging.getLogger(__name__)

COMMANDS = ("lvalue", "units", "class-module", "verify-cnf", "trace-formula", "stickelberger", "mt2", "mt3")
PRECISION_ERRORS = (BudgetExceeded, PrecisionExhausted, NotPolynomialWithinPrecision)


@dataclass
class Instance:
    """Everything a subcommand computes on, built once from a session config."""
    config: SessionConfig
    E: DrinfeldModule
    taming: TamingModule
    decomposition: DecompositionData

    @property
    def lattice(self):
        return self.taming.lattice


def build_decomposition(config: SessionConfig, ring) -> DecompositionData:
    if config.decomposition is None:
        return DecompositionData.for_ring(ring)
    entries = load_catalog().get("decompositions", {})
    if config.decomposition not in entries:
        raise ConfigError(f"Decomposition {config.decomposition!r} is not in the catalog (known: {sorted(entries)})")
    return DecompositionData.from_dict(ring, entries[config.decomposition], name=config.decomposition).verify()


def build_instance(config: SessionConfig, module: DrinfeldConfig | None = None) -> Instance:
    cover = build_cover(config)
    field = cover.field
    E = DrinfeldModule.from_config(field, module or config.require_drinfeld())
    user_basis = None
    if config.cover.taming_basis is not None:
        user_basis = [[entry_to_rational(field, e) for e in row] for row in config.cover.taming_basis]
    taming = taming_module(cover, user_basis, seed=config.seed)
    return Instance(config, E, taming, build_decomposition(config, cover.ring))


def parse_module(text: str | None) -> DrinfeldConfig | None:
    """A Drinfeld module given inline as a YAML list of coefficient lists, e.g. '[[1], [0, 1]]'."""
    if text is None:
        return None
    try:
        return DrinfeldConfig(coefficients=yaml.safe_load(text))
    except yaml.YAMLError as e:
        raise ConfigError(f"--module is not a YAML list: {e}") from e


def parse_phi(text: str | None, field) -> NuclearSeq | None:
    """An explicit nuclear sequence Phi given inline in report form."""
    if text is None:
        return None
    try:
        terms = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"--phi is not a YAML list: {e}") from e
    if not isinstance(terms, list):
        raise ConfigError(f"--phi must be a list of terms, got {type(terms).__name__}")
    return sequence_from_terms(field, terms, name="Phi")


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(show_path=False)],
        force=True,
    )


class Session:
    @staticmethod
    def config(argv: list[str] | None = None) -> argparse.Namespace:
        parser = argparse.ArgumentParser(
            prog="equivcnf",
            description="Equivariant class number formula computations for Drinfeld modules.",
        )
        parser.add_argument(
            "--verbose",
            action="store_true",
            help="Log at DEBUG level.",
        )
        commands = parser.add_subparsers(dest="command", required=True)

        for name in COMMANDS:
            sub = commands.add_parser(name, help=f"Run {name} on a fixture or config file.")
            source = sub.add_mutually_exclusive_group(required=True)
            source.add_argument("--fixture", type=str, help="Name of a bundled fixture.")
            source.add_argument("--config", type=str, help="Path to a session YAML document.")
            sub.add_argument(
                "--precision",
                type=int,
                default=None,
                help="Truncation precision N (coefficients down to t^-N).",
            )
            sub.add_argument(
                "--ball",
                type=int,
                default=None,
                help="Ball index used for exp images and compact quotients.",
            )
            sub.add_argument(
                "--prime-bound-override",
                type=int,
                default=None,
                help="Override the prime cutoff. Voids certification.",
            )
            sub.add_argument(
                "--seed",
                type=int,
                default=None,
                help="Seed for randomized searches (default: EQUIVCNF_SEED, then the config).",
            )
            sub.add_argument(
                "--threads",
                type=int,
                default=None,
                help="Worker cap for per-prime parallel work.",
            )
            sub.add_argument(
                "--report-dir",
                type=str,
                default=os.environ.get("EQUIVCNF_REPORT_DIR", constants.SessionDefaults.report_dir),
                help="Directory for JSON reports.",
            )
            if name == "trace-formula":
                nuclear = sub.add_mutually_exclusive_group()
                nuclear.add_argument(
                    "--module",
                    type=str,
                    default=None,
                    help="Drinfeld coefficients as a YAML list, replacing the instance's module.",
                )
                nuclear.add_argument(
                    "--phi",
                    type=str,
                    default=None,
                    help="Explicit nuclear sequence as YAML: one list per phi_j of tau-coefficient lists, "
                         "e.g. '[[[], [0, 1]]]' for phi_1 = t*tau.",
                )

        fixtures = commands.add_parser("fixtures", help="List or show bundled fixtures.")
        fixtures.add_argument("action", choices=["list", "show"])
        fixtures.add_argument("name", nargs="?", default=None, help="Fixture name for 'show'.")

        return parser.parse_args(argv)

    def __init__(self, argv: list[str] | None = None, console: Console | None = None):
        self.args = Session.config(argv)
        self.console = console or Console()
        self.stage = "arguments"
        self.phi: NuclearSeq | None = None
        configure_logging(self.args.verbose)

    def load(self) -> SessionConfig:
        args = self.args
        config = load_fixture(args.fixture) if args.fixture else load_config(args.config)
        seed = args.seed
        if seed is None and os.environ.get("EQUIVCNF_SEED"):
            seed = int(os.environ["EQUIVCNF_SEED"])
        config = config.with_overrides(precision=args.precision, seed=seed, threads=args.threads,
                                       prime_bound_override=args.prime_bound_override)
        if config.prime_bound_override is not None:
            self.console.print(Panel(f"Prime cutoff overridden to {config.prime_bound_override}: "
                                     f"L-values are NOT certified", style="bold red", expand=False))
        return config

    def options(self, config: SessionConfig) -> InvariantOptions:
        options = InvariantOptions.from_config(config)
        options.ball = self.args.ball
        return options

    # subcommands

    def lvalue(self, instance: Instance) -> dict:
        config = instance.config
        theta = theta_truncated(instance.E, instance.taming, config.precision, instance.decomposition,
                                config.prime_bound_override, config.threads, config.seed)
        payload = theta.to_report()
        payload["low_confidence"] = low_confidence(theta.floor)
        if instance.lattice.ring.order == 1 and instance.E.is_carlitz:
            zeta = zeta_partial(instance.lattice.field, config.precision)
            payload["holds"] = theta.agrees_with(zeta)
            payload["zeta"] = zeta.terms()
        return payload

    def units(self, instance: Instance) -> dict:
        config = instance.config
        options = self.options(config)
        lattice = instance.lattice
        ball = options.ball or isometry_ball(instance.E, lattice, options.budget) + 1 + options.extra_ball
        image = exponential_image(instance.E, lattice, ball, unit_precision(lattice.rank, config.precision, ball),
                                  options.budget)
        units = unit_lattice(instance.E, lattice, image=image)
        checks = unit_checks(units)
        return {**units.to_report(), "checks": checks, "holds": all(checks.values()),
                "low_confidence": low_confidence(units.floor)}

    def class_module(self, instance: Instance) -> dict:
        config = instance.config
        options = self.options(config)
        H = class_module(instance.E, instance.lattice, options.ball, options.budget, options.extra_ball,
                         options.confirmation_steps)
        payload = H.to_report()
        expected = config.expected.class_module_trivial
        if expected is not None:
            payload["holds"] = H.is_zero == expected
        return payload

    def verify_cnf(self, instance: Instance) -> dict:
        report = verify_cnf(instance.E, instance.taming, instance.config.precision, instance.decomposition,
                            self.options(instance.config), strict=False)
        return report.to_report()

    def trace_formula(self, instance: Instance) -> dict:
        config = instance.config
        phi = self.phi if self.phi is not None else phi_E_sequence(instance.E, config.precision)
        report = trace_formula_verify(phi, instance.lattice, self.args.ball or config.nucleus_index,
                                      instance.decomposition, config.threads, config.seed)
        payload = report.to_report()
        payload["phi"] = phi.to_report()
        return payload

    def stickelberger(self, instance: Instance) -> dict:
        config = instance.config
        theta = theta_truncated(instance.E, instance.taming, config.precision, instance.decomposition,
                                config.prime_bound_override, config.threads, config.seed)
        elem = stickelberger(theta, instance.decomposition)
        return {**elem.to_report(), "decomposition": instance.decomposition.to_report(),
                "certified": theta.certified, "prime_bound": theta.prime_bound,
                "low_confidence": low_confidence(elem.floor)}

    def mt2(self, instance: Instance) -> dict:
        report = mtII_check(instance.E, instance.taming, instance.config.precision, instance.decomposition,
                            self.options(instance.config))
        return report.to_report()

    def mt3(self, instance: Instance) -> dict:
        report = mtIII_check(instance.E, instance.taming, instance.config.precision, instance.decomposition,
                             self.options(instance.config))
        return report.to_report()

    def fixtures(self) -> int:
        if self.args.action == "list":
            for name in list_fixtures():
                config = load_fixture(name)
                self.console.print(f"[bold]{name}[/bold]  {config.description}")
            return constants.EXIT_OK
        if not self.args.name:
            raise ConfigError("'fixtures show' needs a fixture name")
        config = load_fixture(self.args.name)
        self.console.print(yaml.safe_dump(config.model_dump(mode="json", exclude_none=True), sort_keys=True))
        return constants.EXIT_OK

    def compute(self) -> int:
        command = self.args.command
        self.stage = "config"
        config = self.load()
        self.stage = "instance"
        module = parse_module(getattr(self.args, "module", None))
        instance = build_instance(config, module)
        self.phi = parse_phi(getattr(self.args, "phi", None), instance.lattice.field)
        logger.info(f"Running {command} on {config.name} (N = {config.precision}, seed = {config.seed})")
        self.stage = command
        payload = getattr(self, command.replace("-", "_"))(instance)
        self.stage = "report"
        write_report(config.name, command, payload, self.args.report_dir, config.model_dump(mode="json"))
        print_summary(config.name, command, payload, self.console)
        if payload.get("holds") is False:
            return constants.EXIT_ASSERTION_FAILED
        return constants.EXIT_OK

    def run(self) -> int:
        try:
            if self.args.command == "fixtures":
                self.stage = "fixtures"
                return self.fixtures()
            return self.compute()
        except MismatchWithDiff as e:
            logger.error(f"Identity failed in {self.stage}: {e} {e.diff}")
            return constants.EXIT_ASSERTION_FAILED
        except PRECISION_ERRORS as e:
            logger.error(f"Budget exceeded in {self.stage}: {e}")
            return constants.EXIT_BUDGET_EXCEEDED
        except (ConfigError, ValidationError) as e:
            logger.error(f"Configuration error in {self.stage}: {e}")
            return constants.EXIT_CONFIG_ERROR
        except EquivCNFError as e:
            logger.error(f"{type(e).__name__} in {self.stage}: {e}")
            return constants.EXIT_CONFIG_ERROR


def main(argv: list[str] | None = None) -> int:
    return Session(argv).run()


if __name__ == "__main__":
    raise SystemExit(main())
