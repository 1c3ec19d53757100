"""Command-line driver.

Subcommands: bar, verify, hopf, model, transport, pair.  Output is a
deterministic sequence of key/value rows, printed either as aligned text
or as machine rows (`key<TAB>value`) for diff-based regression testing.

Exit codes: 0 success, 1 some verification FAILed, 2 parse error,
3 invalid cdga, 4 basis or degree cap exceeded, 5 path too close to a
puncture.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import bar, chen, hopf, io, sullivan
from .cdga import formal_model, unit_augmentation
from .errors import (
    BasisCapExceeded,
    InvalidAugmentation,
    InvalidCDGA,
    NotConnective,
    NotCurveLike,
    ParseError,
    PathTooClose,
    PathringError,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_CAP = 4
EXIT_PATH = 5


@dataclass
class RunConfig:
    command: str
    inputs: list
    truncation: int = 3
    degree_cap: int = 4
    stages: int = 3
    tol: float = 1e-10
    precision_bits: int | None = None
    output_format: str = "text"
    basis_cap: int = 1_000_000
    out: str | None = None
    left_aug: str | None = None
    right_aug: str | None = None
    letters: int = 2

    def validate(self) -> None:
        if self.truncation < 0:
            raise ParseError("truncation must be >= 0")
        if self.tol <= 0:
            raise ParseError("tolerance must be positive")
        if self.basis_cap <= 0 or self.degree_cap <= 0 or self.stages <= 0:
            raise ParseError("caps must be positive")


def _fmt_complex(z: complex) -> str:
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}j"


def _emit(rows, config: RunConfig) -> None:
    lines = []
    for key, value in rows:
        if config.output_format == "rows":
            lines.append(f"{key}\t{value}")
        else:
            lines.append(f"{key}: {value}")
    text = "\n".join(lines) + "\n"
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _select_augmentations(algebra, augmentations, config: RunConfig):
    def pick(name, role):
        if name is not None:
            if name not in augmentations:
                raise ParseError(f"document defines no augmentation named {name!r} for {role}")
            return augmentations[name]
        if algebra.space.basis(0) == [algebra.unit]:
            return unit_augmentation(algebra)
        raise ParseError(
            f"degree 0 is not spanned by the unit; the document must name a {role} augmentation"
        )

    return pick(config.right_aug, "right"), pick(config.left_aug, "left")


def cmd_bar(config: RunConfig):
    algebra, augmentations = io.load_cdga_document(io.load_json_file(config.inputs[0]))
    right, left = _select_augmentations(algebra, augmentations, config)
    complex_ = bar.build_bar(algebra, right, left, config.truncation, basis_cap=config.basis_cap)
    rows = [("truncation", str(config.truncation))]
    for degree in complex_.degrees():
        dim, _ = bar.bar_cohomology(complex_, degree)
        rows.append((f"H^{degree}", str(dim)))
    return EXIT_OK, rows


def cmd_verify(config: RunConfig):
    algebra, augmentations = io.load_cdga_document(io.load_json_file(config.inputs[0]))
    right, left = _select_augmentations(algebra, augmentations, config)
    complex_ = bar.build_bar(algebra, right, left, config.truncation, basis_cap=config.basis_cap)
    rows = [("truncation", str(config.truncation))]
    failed = False

    connect = bar.verify_connectedness(complex_)
    rows.extend(connect.rows())
    concent = bar.verify_concentration(complex_)
    rows.extend(concent.rows())
    failed = failed or not connect.passed or not concent.passed

    # Hopf and cotorsor suites need the formal model of a curve-like input
    try:
        model = formal_model(algebra)
    except (NotConnective, NotCurveLike) as exc:
        rows.append(("hopf_suite", f"SKIPPED ({type(exc).__name__})"))
        model = None
    if model is not None:
        algebra_h = hopf.TensorWordAlgebra(model.h1_letters, config.truncation)
        violations = hopf.check_hopf_axioms(algebra_h)
        rows.append(("hopf_axioms", "PASS" if not violations else f"FAIL ({len(violations)})"))
        failed = failed or bool(violations)
        trivial = hopf.trivial_cotorsor(algebra_h)
        report = hopf.verify_cotorsor(trivial, algebra_h)
        rows.extend((f"trivial_{k}", v) for k, v in report.rows())
        failed = failed or not report.passed
        twist_constants = [Fraction(i + 1) for i in range(algebra_h.m)]
        twisted = hopf.twisted_cotorsor(algebra_h, twist_constants)
        report_t = hopf.verify_cotorsor(twisted, algebra_h)
        rows.extend((f"twisted_{k}", v) for k, v in report_t.rows())
        failed = failed or not report_t.passed
        kunneth = hopf.concentration_from_kunneth(dict(concent.dims), dict(concent.dims))
        rows.extend(kunneth.rows())
        failed = failed or not kunneth.passed
    return (EXIT_FAIL if failed else EXIT_OK), rows


def cmd_hopf(config: RunConfig):
    algebra = hopf.TensorWordAlgebra([f"a{i}" for i in range(config.letters)], config.truncation)
    rows = [("letters", str(algebra.m)), ("truncation", str(algebra.truncation))]
    words = list(algebra.words())
    for u in words:
        for v in words:
            if len(u) + len(v) > algebra.truncation:
                continue
            product = hopf.shuffle_product(algebra, u, v)
            value = " + ".join(
                f"{c}*{algebra.word_name(w)}" for w, c in sorted(product.items())
            )
            rows.append((f"shuffle {algebra.word_name(u)} {algebra.word_name(v)}", value))
    for w in words:
        delta = hopf.deconcatenate(algebra, w)
        value = " + ".join(
            f"{c}*{algebra.word_name(a)}(x){algebra.word_name(b)}"
            for (a, b), c in sorted(delta.items())
        )
        rows.append((f"coproduct {algebra.word_name(w)}", value))
        anti = hopf.antipode(algebra, w)
        value = " + ".join(f"{c}*{algebra.word_name(a)}" for a, c in sorted(anti.items()))
        rows.append((f"antipode {algebra.word_name(w)}", value))
    return EXIT_OK, rows


def cmd_model(config: RunConfig):
    algebra, _ = io.load_cdga_document(io.load_json_file(config.inputs[0]))
    model = formal_model(algebra)
    rows = [("letters", ",".join(model.h1_letters) or "-"), ("degree_cap", str(config.degree_cap))]
    stage, psi = sullivan.bg_initial(model, degree_cap=config.degree_cap)
    for step in range(config.stages):
        if step:
            stage, psi = sullivan.bg_step(stage, psi)
        rows.append((f"stage_{stage.stage}_generators", str(len(stage.generators))))
        for name, degree in stage.generators:
            idx = [n for n, _ in stage.generators].index(name)
            d_poly = stage.d_gen.get(idx, {})
            d_text = " + ".join(
                f"{c}*{stage.mono_name(m)}" for m, c in sorted(d_poly.items())
            ) or "0"
            rows.append((f"stage_{stage.stage}_gen_{name}", f"degree {degree}, d -> {d_text}"))
        dims = stage.dims_by_degree()
        rows.append(
            (f"stage_{stage.stage}_dims", ",".join(str(dims[d]) for d in sorted(dims)))
        )
        rows.append((f"stage_{stage.stage}_H0", str(stage.cohomology_dim(0))))
        count, _ = sullivan.augmentation_count(stage)
        rows.append((f"stage_{stage.stage}_augmentations", str(count)))
    return EXIT_OK, rows


def cmd_transport(config: RunConfig):
    line, path, words, connection, splitting = io.load_geometry_document(
        io.load_json_file(config.inputs[0])
    )
    if connection is None:
        raise ParseError("transport needs a `connection` in the geometry document")
    rows = [("rank", str(connection.rank)), ("tol", repr(config.tol))]
    dyson = chen.transport(
        line, connection, path, tol=config.tol, precision_bits=config.precision_bits, method="dyson"
    )
    ode = chen.transport(
        line, connection, path, tol=config.tol, precision_bits=config.precision_bits, method="ode"
    )
    deviation = 0.0
    for i in range(connection.rank):
        for j in range(i + 1, connection.rank):
            rows.append((f"T[{i}][{j}]", _fmt_complex(dyson[i][j])))
            deviation = max(deviation, abs(dyson[i][j] - ode[i][j]))
    rows.append(("dyson_vs_ode", repr(deviation)))
    if splitting is not None:
        verdict = chen.canonical_k_form(connection, splitting)
        rows.extend(verdict.rows())
    return EXIT_OK, rows


def cmd_pair(config: RunConfig):
    line, path, words, connection, _ = io.load_geometry_document(
        io.load_json_file(config.inputs[0])
    )
    if not words:
        raise ParseError("pair needs a `words` list in the geometry document")
    rows = [("tol", repr(config.tol))]
    for word in words:
        name = "(" + ",".join(str(k) for k in word) + ")"
        if not word:
            rows.append((f"I{name}", _fmt_complex(1 + 0j)))
            rows.append((f"I{name}_err", repr(0.0)))
            continue
        value, err = chen.iterated_integral_with_estimate(
            line, path, word, tol=config.tol, precision_bits=config.precision_bits
        )
        rows.append((f"I{name}", _fmt_complex(value)))
        rows.append((f"I{name}_err", repr(err)))
    return EXIT_OK, rows


COMMANDS = {
    "bar": (cmd_bar, 1),
    "verify": (cmd_verify, 1),
    "hopf": (cmd_hopf, 0),
    "model": (cmd_model, 1),
    "transport": (cmd_transport, 1),
    "pair": (cmd_pair, 1),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathring",
        description="bar complexes, word Hopf algebras, staged replacements, Chen integrals",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, n_inputs) in COMMANDS.items():
        p = sub.add_parser(name)
        if n_inputs:
            p.add_argument("inputs", nargs=n_inputs, help="input document(s)")
        p.add_argument("--truncation", type=int, default=3)
        p.add_argument("--degree-cap", type=int, default=4)
        p.add_argument("--stages", type=int, default=3)
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--precision-bits", type=int, default=None)
        p.add_argument("--format", choices=("text", "rows"), default="text", dest="output_format")
        p.add_argument("--basis-cap", type=int, default=1_000_000)
        p.add_argument("--out", default=None)
        if name in ("bar", "verify"):
            p.add_argument("--left-aug", default=None)
            p.add_argument("--right-aug", default=None)
        if name == "hopf":
            p.add_argument("--letters", type=int, default=2)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        command=args.command,
        inputs=list(getattr(args, "inputs", [])),
        truncation=args.truncation,
        degree_cap=args.degree_cap,
        stages=args.stages,
        tol=args.tol,
        precision_bits=args.precision_bits,
        output_format=args.output_format,
        basis_cap=args.basis_cap,
        out=args.out,
        left_aug=getattr(args, "left_aug", None),
        right_aug=getattr(args, "right_aug", None),
        letters=getattr(args, "letters", 2),
    )
    handler, _ = COMMANDS[config.command]
    try:
        config.validate()
        code, rows = handler(config)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (InvalidCDGA, InvalidAugmentation, NotConnective, NotCurveLike) as exc:
        sys.stderr.write(f"invalid cdga: {exc}\n")
        return EXIT_INVALID
    except BasisCapExceeded as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except PathTooClose as exc:
        sys.stderr.write(f"path too close: {exc}\n")
        return EXIT_PATH
    except PathringError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    _emit(rows, config)
    return code


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
