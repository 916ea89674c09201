"""Command-line interface: canonicalize, compare, enumerate, evaluate."""

from __future__ import annotations

import csv
import io
import sys

import click

from .perms import PermutationParseError, compose, inverse, parse_permutation
from .arrows import canonical_key, canonicalize
from .normgroup import (
    MAX_CLASS_R,
    census_records,
    class_count,
    enumerate_classes,
    is_norm_preserving,
    representative_permutation,
    type_label,
)
from .states import (
    StateFileError,
    StateValidationError,
    evaluate_criteria,
    read_state_file,
    VERDICT_TOLERANCE,
)
from .selftest import CHECK_NAMES, DEFAULT_SEED, run_checks

EXIT_DATA_ERROR = 3


def _fail_data(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_DATA_ERROR)


def _parse_or_fail(text: str, r: int):
    try:
        return parse_permutation(text, 2 * r)
    except PermutationParseError as exc:
        _fail_data(f"bad permutation {text!r}: {exc}")


def _check_r(r: int) -> int:
    if not 1 <= r <= MAX_CLASS_R:
        raise click.BadParameter(f"-r must be in 1..{MAX_CLASS_R}, got {r}")
    return r


@click.group()
def main() -> None:
    """Permutation separability criteria for multipartite states.

    Exit codes: 0 on success (EQUIVALENT/INDEPENDENT and
    ENTANGLED/UNDETECTED are printed answers, not exit codes), 2 on usage
    errors, 3 on malformed input data.
    """


@main.command()
@click.option("-r", "subsystems", type=int, required=True, help="Subsystem count r.")
@click.option("--trace", "show_trace", is_flag=True, help="Print every rewrite step.")
@click.option("--sketch", "show_sketch", is_flag=True, help="Draw a tails-by-heads grid.")
@click.argument("perm")
def canon(subsystems: int, show_trace: bool, show_sketch: bool, perm: str) -> None:
    """Reduce PERM to its disjoint arrow configuration and canonical key."""
    r = _check_r(subsystems)
    sigma = _parse_or_fail(perm, r)
    trace = canonicalize(sigma)
    if show_trace:
        cycles = trace.input_cycles
        rendered = (
            "".join("(" + ",".join(map(str, c)) + ")" for c in cycles)
            if cycles
            else "()"
        )
        click.echo(f"cycles: {rendered}")
        for step in trace.steps:
            mult = (
                "".join("(" + ",".join(map(str, c)) + ")" for c in step.multiplier)
                or "-"
            )
            click.echo(
                f"{step.rule}: {step.detail}; multiplier {mult} -> {step.state}"
            )
    key = trace.key
    click.echo(f"normal form: {trace.configuration.render()}")
    if show_sketch:
        cells = {(a.tail, a.head) for a in trace.configuration.arrows}
        click.echo("sketch (rows: tails, columns: heads):")
        click.echo("    " + " ".join(str(h) for h in range(1, r + 1)))
        for t in range(1, r + 1):
            row = " ".join(
                ("@" if t == h else ">") if (t, h) in cells else "."
                for h in range(1, r + 1)
            )
            click.echo(f"  {t} {row}")
    click.echo(f"canonical key: {key.render()}")
    click.echo(f"label: {type_label(key.arrow_count, key.loop_count)}")


@main.command()
@click.option("-r", "subsystems", type=int, required=True, help="Subsystem count r.")
@click.argument("perm1")
@click.argument("perm2")
def equiv(subsystems: int, perm1: str, perm2: str) -> None:
    """Decide whether PERM1 and PERM2 give the same criterion."""
    r = _check_r(subsystems)
    sigma = _parse_or_fail(perm1, r)
    tau = _parse_or_fail(perm2, r)
    key1 = canonical_key(sigma)
    key2 = canonical_key(tau)
    by_key = key1 == key2
    witness = compose(inverse(tau), sigma)
    by_parity = is_norm_preserving(witness)
    if by_key != by_parity:
        click.echo(
            "internal error: canonical keys and the parity test disagree", err=True
        )
        sys.exit(1)
    click.echo("EQUIVALENT" if by_key else "INDEPENDENT")
    click.echo(f"canonical key 1: {key1.render()}")
    click.echo(f"canonical key 2: {key2.render()}")
    parity = "norm-preserving" if by_parity else "not norm-preserving"
    click.echo(f"parity test on perm2^-1 * perm1 = {witness}: {parity}")


@main.command(name="list")
@click.option("-r", "subsystems", type=int, required=True, help="Subsystem count r.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "csv"]),
    default="text",
    help="text: class table plus census; csv: census lines r,a,l,label,count.",
)
def list_classes(subsystems: int, fmt: str) -> None:
    """List the nontrivial criterion classes and the census by type."""
    r = _check_r(subsystems)
    rows = census_records(r)
    if fmt == "csv":
        for row in rows:
            click.echo(
                f"{row.r},{row.arrow_count},{row.loop_count},"
                f"{row.type_label},{row.count}"
            )
        return
    total = class_count(r)
    click.echo(f"r={r}: {total} classes, {total - 1} nontrivial criteria")
    click.echo("")
    click.echo(f"{'a':>3} {'l':>3}  {'label':<8} {'key':<28} representative")
    for desc in enumerate_classes(r):
        if desc.trivial:
            continue
        rep = representative_permutation(desc.key)
        click.echo(
            f"{desc.arrow_count:>3} {desc.loop_count:>3}  {desc.type_label:<8} "
            f"{desc.key.render():<28} {rep}"
        )
    click.echo("")
    click.echo("census by type:")
    click.echo(f"{'label':<8} {'flip-partner':<13} classes")
    for row in rows:
        click.echo(f"{row.type_label:<8} {row.partner_label:<13} {row.count}")


@main.command(name="enumerate-cosets")
@click.option("-r", "subsystems", type=int, required=True, help="Subsystem count r.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "csv"]),
    default="text",
    help="One row per class, the trivial class included.",
)
def enumerate_cosets(subsystems: int, fmt: str) -> None:
    """Dump every equivalence class, one reduced key per line."""
    r = _check_r(subsystems)
    descriptors = enumerate_classes(r)
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["r", "heads", "tails", "a", "l", "label", "representative"])
        for desc in descriptors:
            writer.writerow(
                [
                    r,
                    " ".join(map(str, desc.key.heads)),
                    " ".join(map(str, desc.key.tails)),
                    desc.arrow_count,
                    desc.loop_count,
                    desc.type_label,
                    str(representative_permutation(desc.key)),
                ]
            )
        click.echo(out.getvalue(), nl=False)
        return
    click.echo(f"r={r}: {len(descriptors)} classes (1 trivial)")
    for desc in descriptors:
        rep = representative_permutation(desc.key)
        click.echo(f"{desc.key.render():<28} {desc.type_label:<8} {rep}")


@main.command(name="eval")
@click.option(
    "--tolerance",
    type=float,
    default=VERDICT_TOLERANCE,
    show_default=True,
    help="Entanglement verdict threshold above norm 1.",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "csv"]),
    default="text",
)
@click.argument("state_file", type=click.Path(exists=True, dir_okay=False))
def eval_state(tolerance: float, fmt: str, state_file: str) -> None:
    """Evaluate every criterion class on the state stored in STATE_FILE."""
    try:
        rho = read_state_file(state_file)
        report = evaluate_criteria(rho, tolerance=tolerance)
    except (StateFileError, StateValidationError, ValueError) as exc:
        _fail_data(str(exc))
    ranked = sorted(report.records, key=lambda rec: (-rec.norm, rec.descriptor.key.rank))
    if fmt == "csv":
        for rec in ranked:
            heads = " ".join(map(str, rec.descriptor.key.heads))
            tails = " ".join(map(str, rec.descriptor.key.tails))
            click.echo(
                f"{report.r},{rec.descriptor.type_label},{heads},{tails},"
                f"{rec.norm:.12f}"
            )
        click.echo(f"verdict,{report.verdict.upper()},max,{report.max_norm:.12f}")
        return
    click.echo(f"state: r={report.r} d={report.d} ({rho.dim}x{rho.dim})")
    click.echo(f"{'label':<8} {'key':<28} norm")
    for rec in ranked:
        click.echo(
            f"{rec.descriptor.type_label:<8} {rec.descriptor.key.render():<28} "
            f"{rec.norm:.12f}"
        )
    click.echo(f"max norm: {report.max_norm:.12f} (tolerance {report.tolerance:g})")
    click.echo(f"verdict: {report.verdict.upper()}")


@main.command()
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option(
    "--only",
    "only",
    multiple=True,
    type=click.Choice(CHECK_NAMES),
    help="Run a subset of checks (repeatable).",
)
def selftest(seed: int, only: tuple[str, ...]) -> None:
    """Run the built-in verification suite and report pass/fail per item."""
    results = run_checks(list(only) or None, seed=seed)
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        click.echo(f"[{status}] {res.name} ({res.seconds:.2f}s): {res.detail}")
        failed += 0 if res.passed else 1
    click.echo(
        f"{len(results) - failed}/{len(results)} checks passed"
        + (f", {failed} FAILED" if failed else "")
    )
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
