"""Command-line front end.

Every subcommand parses its inputs, dispatches to the library, and prints a
machine-readable JSON report. Exit codes: 0 all checks pass, 1 a geometric
check failed (the report says which clause), 2 input or parse error.

Any structured flag value may be given as "@path" to read the value from a
file. The environment variable NILGEO_SEED provides the default sampling
seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .algdsl import parse_algebra, parse_endo, parse_form, parse_vectors
from .cealg import betti_numbers
from .classify import Catalog, classify_catalog
from .curvature import (
    NotAlphaEinsteinError,
    check_alpha_einstein,
    ricci_scalar,
    transverse_ricci,
)
from .deform import CircleGrid, assemble_operator, kernel_dimension, kernel_is_reeb_line
from .errors import CheckError, InputError, NilgeoError
from .exterior import ComplexKForm, Metric, rat
from .legendrian import (
    FamilySpec,
    Subalgebra,
    check_special_legendrian,
    comass_probe,
    comass_sample,
    extension_obstruction,
)
from .models import PYTHAGOREAN_ROTATIONS
from .structures import (
    check_ccy,
    check_contact,
    check_hypo,
    check_r_contact_ccy,
    check_sasakian,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


@dataclass
class Report:
    """Verdict tree emitted on standard output; all numbers are exact strings."""

    command: str
    inputs: dict
    version: str = __version__
    checks: list = field(default_factory=list)
    status: str = "pass"

    def add(self, name: str, verdict: bool, **values) -> None:
        self.checks.append({"name": name, "verdict": "pass" if verdict else "fail", **values})
        if not verdict:
            self.status = "fail"

    def info(self, name: str, **values) -> None:
        self.checks.append({"name": name, **values})

    def to_json(self) -> str:
        payload = {
            "tool": "nilgeo",
            "version": self.version,
            "command": self.command,
            "inputs": self.inputs,
            "checks": self.checks,
            "status": self.status,
        }
        return json.dumps(payload, indent=2)


def _file_value(value: str) -> str:
    if value.startswith("@"):
        try:
            with open(value[1:], encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {value[1:]}: {exc}") from exc
    return value


def _default_seed() -> int:
    raw = os.environ.get("NILGEO_SEED", "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"NILGEO_SEED must be an integer, got {raw!r}") from exc


def _complex_form(text: str, dim: int) -> ComplexKForm:
    form = parse_form(text, dim)
    return form if isinstance(form, ComplexKForm) else ComplexKForm.from_real(form)


def _emit(report: Report) -> int:
    print(report.to_json())
    return EXIT_PASS if report.status == "pass" else EXIT_FAIL


def _check_error(report: Report, exc: CheckError) -> int:
    report.add(exc.check, False, message=str(exc), witness=exc.witness)
    print(report.to_json())
    return EXIT_FAIL


def cmd_check_contact(args) -> int:
    alg = parse_algebra(_file_value(args.algebra))
    alpha = parse_form(_file_value(args.alpha), alg.dim)
    report = Report("check-contact", {"algebra": args.algebra, "alpha": args.alpha})
    try:
        contact = check_contact(alg, alpha)
    except CheckError as exc:
        return _check_error(report, exc)
    report.add(
        "contact",
        True,
        reeb=str(contact.reeb),
        kappa=str(contact.kappa),
    )
    return _emit(report)


def cmd_check_sasakian(args) -> int:
    alg = parse_algebra(_file_value(args.algebra))
    alpha = parse_form(_file_value(args.alpha), alg.dim)
    J = parse_endo(_file_value(args.J), alg.dim)
    report = Report(
        "check-sasakian", {"algebra": args.algebra, "alpha": args.alpha, "J": args.J}
    )
    try:
        contact = check_contact(alg, alpha)
        result = check_sasakian(contact, J)
    except CheckError as exc:
        return _check_error(report, exc)
    report.add("sasakian", result.ok, failures=list(result.failures))
    return _emit(report)


def cmd_check_ccy(args) -> int:
    alg = parse_algebra(_file_value(args.algebra))
    alpha = parse_form(_file_value(args.alpha), alg.dim)
    J = parse_endo(_file_value(args.J), alg.dim)
    epsilon = _complex_form(_file_value(args.epsilon), alg.dim)
    report = Report(
        "check-ccy",
        {
            "algebra": args.algebra,
            "alpha": args.alpha,
            "J": args.J,
            "epsilon": args.epsilon,
            "strict_def31": args.strict_def31,
        },
    )
    try:
        contact = check_contact(alg, alpha)
        structure = check_ccy(contact, J, epsilon, strict_def31=args.strict_def31)
    except CheckError as exc:
        return _check_error(report, exc)
    report.add(
        "ccy",
        True,
        reeb=str(structure.contact.reeb),
        metric=[[str(x) for x in row] for row in structure.metric.matrix],
    )
    return _emit(report)


def cmd_check_hypo(args) -> int:
    alg = parse_algebra(_file_value(args.algebra))
    alpha = parse_form(_file_value(args.alpha), alg.dim)
    omegas = [parse_form(_file_value(getattr(args, f"omega{i}")), alg.dim) for i in (1, 2, 3)]
    report = Report(
        "check-hypo",
        {
            "algebra": args.algebra,
            "alpha": args.alpha,
            "omega1": args.omega1,
            "omega2": args.omega2,
            "omega3": args.omega3,
        },
    )
    result = check_hypo(alpha, *omegas, alg)
    for clause in result.clauses:
        report.add(clause.name, clause.ok, **clause.detail)
    return _emit(report)


def cmd_check_rccy(args) -> int:
    alg = parse_algebra(_file_value(args.algebra))
    alphas = [parse_form(part, alg.dim) for part in _file_value(args.alphas).split(";") if part.strip()]
    J = parse_endo(_file_value(args.J), alg.dim)
    epsilon = _complex_form(_file_value(args.epsilon), alg.dim)
    report = Report(
        "check-rccy",
        {
            "algebra": args.algebra,
            "alphas": args.alphas,
            "J": args.J,
            "epsilon": args.epsilon,
            "strict_def31": args.strict_def31,
        },
    )
    result = check_r_contact_ccy(alg, alphas, J, epsilon, strict_def31=args.strict_def31)
    for clause in result.clauses:
        report.add(clause.name, clause.ok, **clause.detail)
    return _emit(report)


def cmd_betti(args) -> int:
    alg = parse_algebra(_file_value(args.algebra))
    table = betti_numbers(alg)
    report = Report("betti", {"algebra": args.algebra})
    report.info(
        "betti_numbers",
        numbers=list(table.numbers),
        euler_characteristic=table.euler_characteristic(),
        poincare_dual=table.is_poincare_dual(),
    )
    return _emit(report)


def cmd_curvature(args) -> int:
    alg = parse_algebra(_file_value(args.algebra))
    report_inputs = {"algebra": args.algebra}
    report = Report("curvature", report_inputs)
    structure = None
    if args.metric:
        report_inputs["metric"] = args.metric
        rows = json.loads(_file_value(args.metric))
        g = Metric([[rat(x) for x in row] for row in rows])
    elif args.alpha and args.J:
        report_inputs.update({"alpha": args.alpha, "J": args.J})
        alpha = parse_form(_file_value(args.alpha), alg.dim)
        J = parse_endo(_file_value(args.J), alg.dim)
        try:
            contact = check_contact(alg, alpha)
            if args.epsilon:
                report_inputs["epsilon"] = args.epsilon
                epsilon = _complex_form(_file_value(args.epsilon), alg.dim)
                structure = check_ccy(contact, J, epsilon)
                g = structure.metric
            else:
                sasakian = check_sasakian(contact, J)
                if not sasakian.ok:
                    report.add("sasakian", False, failures=list(sasakian.failures))
                    print(report.to_json())
                    return EXIT_FAIL
                cov = [alpha.coefficient((j,)) for j in range(1, alg.dim + 1)]
                g = Metric(
                    [
                        [
                            sasakian.g_j.matrix[i][j] + cov[i] * cov[j]
                            for j in range(alg.dim)
                        ]
                        for i in range(alg.dim)
                    ]
                )
        except CheckError as exc:
            return _check_error(report, exc)
    else:
        raise InputError("curvature needs --metric or (--alpha and --J)")
    curvature = ricci_scalar(alg, g)
    report.info(
        "curvature",
        ricci=[[str(x) for x in row] for row in curvature.ricci],
        scalar=str(curvature.scalar),
    )
    if args.alpha:
        alpha = parse_form(_file_value(args.alpha), alg.dim)
        try:
            lam, nu = check_alpha_einstein(curvature, g, alpha)
            report.add("alpha_einstein", True, **{"lambda": str(lam), "nu": str(nu)})
        except NotAlphaEinsteinError as exc:
            report.add(exc.check, False, message=str(exc), witness=exc.witness)
    if structure is not None:
        transverse = transverse_ricci(structure, g)
        report.add(
            "transverse_ricci_zero",
            transverse.is_zero,
            ric_t=[[str(x) for x in row] for row in transverse.ric_t],
            rho_t=[[str(x) for x in row] for row in transverse.rho_t],
            parallel_J=transverse.parallel_j,
            parallel_g_J=transverse.parallel_g_j,
            parallel_d_alpha=transverse.parallel_d_alpha,
        )
    return _emit(report)


def _build_ccy(args, alg):
    alpha = parse_form(_file_value(args.alpha), alg.dim)
    J = parse_endo(_file_value(args.J), alg.dim)
    epsilon = _complex_form(_file_value(args.epsilon), alg.dim)
    return check_ccy(check_contact(alg, alpha), J, epsilon)


def cmd_legendrian(args) -> int:
    alg = parse_algebra(_file_value(args.algebra))
    report = Report(
        "legendrian",
        {
            "algebra": args.algebra,
            "alpha": args.alpha,
            "J": args.J,
            "epsilon": args.epsilon,
            "span": args.span,
        },
    )
    try:
        ccy = _build_ccy(args, alg)
    except CheckError as exc:
        return _check_error(report, exc)
    sub = Subalgebra(alg, parse_vectors(_file_value(args.span), alg.dim))
    result = check_special_legendrian(sub, ccy)
    report.add(
        "special_legendrian",
        result.is_special,
        classification=str(result.verdict),
        integrable=result.integrable,
        detail={k: str(v) for k, v in result.detail.items()},
    )
    return _emit(report)


def cmd_obstruction(args) -> int:
    alg = parse_algebra(_file_value(args.algebra))
    report = Report(
        "obstruction",
        {
            "algebra": args.algebra,
            "alpha": args.alpha,
            "J": args.J,
            "epsilon": args.epsilon,
            "span": args.span,
            "family": args.family,
            "rotations": args.rotations,
        },
    )
    try:
        ccy = _build_ccy(args, alg)
        if args.family:
            family = FamilySpec.from_json(alg, _file_value(args.family))
        else:
            rotations = []
            spec = args.rotations or "default"
            if spec == "default":
                rotations = [
                    (k, c, s) for k, (c, s) in enumerate(PYTHAGOREAN_ROTATIONS)
                ]
            else:
                for chunk in spec.split(";"):
                    t, c, s = (Fraction(x) for x in chunk.split(","))
                    rotations.append((t, c, s))
            family = FamilySpec.rotation(ccy, rotations)
        sub = Subalgebra(alg, parse_vectors(_file_value(args.span), alg.dim))
        samples = extension_obstruction(sub, family)
    except CheckError as exc:
        return _check_error(report, exc)
    report.info("extension_obstruction", samples=[s.to_dict() for s in samples])
    return _emit(report)


def cmd_moduli_kernel(args) -> int:
    report = Report("moduli-kernel", {"N": args.N})
    op = assemble_operator(CircleGrid(args.N))
    dim = kernel_dimension(op)
    report.add(
        "kernel_dimension",
        dim == 1,
        kernelDim=dim,
        kernel_is_reeb_line=kernel_is_reeb_line(op),
        coupling=str(op.coupling),
    )
    return _emit(report)


def cmd_comass(args) -> int:
    alg = parse_algebra(_file_value(args.algebra))
    seed = args.seed if args.seed is not None else _default_seed()
    report = Report(
        "comass",
        {
            "algebra": args.algebra,
            "alpha": args.alpha,
            "J": args.J,
            "epsilon": args.epsilon,
            "samples": args.samples,
            "seed": seed,
        },
    )
    try:
        ccy = _build_ccy(args, alg)
    except CheckError as exc:
        return _check_error(report, exc)
    if args.probe:
        frame = parse_vectors(_file_value(args.probe), alg.dim)
        value = comass_probe(ccy, frame)
        report.add("comass_probe", abs(value) <= 1, value=str(value))
    if args.samples > 0:
        best = comass_sample(ccy, args.samples, seed=seed, jobs=args.jobs)
        report.add(
            "comass_bound",
            best <= 1 + 1e-9,
            maximum={"approx": repr(best), "seed": seed, "samples": args.samples},
        )
    return _emit(report)


def cmd_classify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.catalog:
        catalog = Catalog.from_json(_file_value(args.catalog))
    else:
        catalog = Catalog.default()
    report = Report(
        "classify",
        {"catalog": args.catalog or "default", "seed": seed, "samples": args.samples},
    )
    result = classify_catalog(catalog, seed=seed, random_samples=args.samples, jobs=args.jobs)
    report.info("classification", **result.to_dict())
    return _emit(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilgeo",
        description="Exact verification of invariant contact Calabi-Yau geometry on Lie algebras",
    )
    parser.add_argument("--version", action="version", version=f"nilgeo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_structure_flags(p, epsilon=True):
        p.add_argument("--algebra", required=True, help="algebra spec, e.g. (0,0,12), or @file")
        p.add_argument("--alpha", required=True, help="contact form expression")
        p.add_argument("--J", required=True, help="pairs:(1,2),... or matrix:[[...]]")
        if epsilon:
            p.add_argument("--epsilon", required=True, help="complex volume form expression")

    p = sub.add_parser("check-contact", help="verify the contact volume condition")
    p.add_argument("--algebra", required=True)
    p.add_argument("--alpha", required=True)
    p.set_defaults(func=cmd_check_contact)

    p = sub.add_parser("check-sasakian", help="verify the Nijenhuis condition")
    add_structure_flags(p, epsilon=False)
    p.set_defaults(func=cmd_check_sasakian)

    p = sub.add_parser("check-ccy", help="verify a contact Calabi-Yau structure")
    add_structure_flags(p)
    p.add_argument("--strict-def31", action="store_true", help="drop the 1/n! factor")
    p.set_defaults(func=cmd_check_ccy)

    p = sub.add_parser("check-hypo", help="verify a 5-dimensional Hypo structure")
    p.add_argument("--algebra", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--omega1", required=True)
    p.add_argument("--omega2", required=True)
    p.add_argument("--omega3", required=True)
    p.set_defaults(func=cmd_check_hypo)

    p = sub.add_parser("check-rccy", help="verify an r-contact Calabi-Yau structure")
    p.add_argument("--algebra", required=True)
    p.add_argument("--alphas", required=True, help="semicolon-separated 1-forms")
    p.add_argument("--J", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--strict-def31", action="store_true")
    p.set_defaults(func=cmd_check_rccy)

    p = sub.add_parser("betti", help="Betti numbers of the invariant complex")
    p.add_argument("--algebra", required=True)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("curvature", help="Ricci, scalar and alpha-Einstein data")
    p.add_argument("--algebra", required=True)
    p.add_argument("--metric", help="explicit matrix JSON")
    p.add_argument("--alpha")
    p.add_argument("--J")
    p.add_argument("--epsilon")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("legendrian", help="classify a candidate special Legendrian subalgebra")
    add_structure_flags(p)
    p.add_argument("--span", required=True, help="semicolon-separated basis vectors")
    p.set_defaults(func=cmd_legendrian)

    p = sub.add_parser("obstruction", help="extension obstruction classes on a family")
    add_structure_flags(p)
    p.add_argument("--span", required=True)
    p.add_argument("--family", help="family JSON (list of {t, alpha, J, epsilon}) or @file")
    p.add_argument("--rotations", help='"t,cos,sin;..." exact unit rotations, or "default"')
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("moduli-kernel", help="kernel dimension of the discretized operator")
    p.add_argument("--N", type=int, default=64)
    p.set_defaults(func=cmd_moduli_kernel)

    p = sub.add_parser("comass", help="Monte Carlo calibration bound check")
    add_structure_flags(p)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--probe", help="exact g-orthonormal frame, e.g. X1;X3")
    p.set_defaults(func=cmd_comass)

    p = sub.add_parser("classify", help="run the 5-dimensional classification catalog")
    p.add_argument("--catalog", help="catalog JSON or @file; default is the shipped catalog")
    p.add_argument("--samples", type=int, default=3, help="random contact forms per algebra")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_classify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (InputError, json.JSONDecodeError) as exc:
        print(json.dumps({"tool": "nilgeo", "error": str(exc), "status": "error"}, indent=2))
        return EXIT_INPUT
    except CheckError as exc:
        print(
            json.dumps(
                {
                    "tool": "nilgeo",
                    "error": str(exc),
                    "check": exc.check,
                    "witness": exc.witness,
                    "status": "fail",
                },
                indent=2,
            )
        )
        return EXIT_FAIL
    except NilgeoError as exc:
        print(json.dumps({"tool": "nilgeo", "error": str(exc), "status": "error"}, indent=2))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
