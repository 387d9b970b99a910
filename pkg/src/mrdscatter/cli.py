"""Command line entry point: ``mrdscatter <verb> [options]``; results are printed as JSON."""

from __future__ import annotations

import functools
import json

import click

from .field import FieldSpec, make_field
from .io import append_csv_row, read_json, write_json


def _parse_shard(value: str) -> tuple[int, int]:
    try:
        i, k = (int(x) for x in value.split("/"))
    except ValueError:
        raise click.BadParameter("expected i/N, e.g. 0/4") from None
    if not (k >= 1 and 0 <= i < k):
        raise click.BadParameter(f"invalid shard {value}")
    return i, k


def _parse_ints(value: str | None) -> list[int] | None:
    if value is None:
        return None
    return [int(x) for x in value.replace(" ", "").split(",") if x]


def field_options(fn):
    """--p/--h/--n/--modulus, or --field-spec pointing at a JSON file."""
    @click.option("--p", "p", type=int, default=3, show_default=True, help="Characteristic.")
    @click.option("--h", "h", type=int, default=1, show_default=True, help="q = p^h.")
    @click.option("--n", "n", type=int, default=3, show_default=True, help="Big field is F_{q^2n}.")
    @click.option("--modulus", default=None,
                  help="Comma-separated coefficients c_0,...,c_d of a monic irreducible.")
    @click.option("--field-spec", "field_spec", type=click.Path(exists=True), default=None,
                  help="JSON file with p, h, n and optionally modulus, element_cap.")
    @functools.wraps(fn)
    def wrapper(p, h, n, modulus, field_spec, **kw):
        if field_spec:
            spec = FieldSpec.from_dict(read_json(field_spec))
        else:
            spec = FieldSpec(p, h, n, modulus=_parse_ints(modulus))
        return fn(spec=spec, **kw)
    return wrapper


def _emit(data, out: str | None) -> None:
    if out:
        write_json(out, data)
    click.echo(json.dumps(data, indent=2, sort_keys=True))


def _q_to_spec(q: int, n: int) -> FieldSpec:
    from .experiments import prime_power

    p, h = prime_power(q)
    return FieldSpec(p, h, n)


@click.group()
def main():
    """Scattered subspaces U_{b,s}, their linear sets and MRD codes."""


@main.command()
@field_options
@click.option("--s", type=int, default=1, show_default=True)
@click.option("--b-filter", type=click.Choice(["all", "fq2", "sqrt-1", "norm-1", "list"]),
              default="all", show_default=True)
@click.option("--b-list", default=None, help="Comma-separated encodings for --b-filter list.")
@click.option("--shard", default="0/1", show_default=True, help="Shard i/N of the b-domain.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--certify", type=click.Choice(["all", "per-norm", "none"]), default="all",
              show_default=True)
@click.option("--out", default=None, help="Write the JSON result here.")
@click.option("--csv", "csv_path", default=None, help="Append a summary row to this CSV.")
@click.option("--summary", is_flag=True, help="Omit per-b verdicts from stdout.")
def search(spec, s, b_filter, b_list, shard, threads, certify, out, csv_path, summary):
    """Decide scatteredness of U_{b,s} for every b in the domain."""
    from .experiments import SearchJob, search_scattered

    job = SearchJob(spec, s, b_filter, tuple(_parse_ints(b_list) or ()) if b_list else None,
                    _parse_shard(shard), certify, threads, out)
    result = search_scattered(job)
    ctx = make_field(spec)
    data = result.to_dict(ctx)
    if csv_path:
        append_csv_row(csv_path, {"q": spec.q, "n": spec.n, "s": s,
                                  "scattered": result.n_scattered,
                                  "norm_classes": len(data["scattered_norms"])})
    if summary:
        data.pop("verdicts")
    click.echo(json.dumps(data, indent=2, sort_keys=True))


@main.command()
@click.option("--q", type=int, required=True)
@click.option("--certify", type=click.Choice(["all", "per-norm", "none"]), default="per-norm",
              show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--out", default=None)
@click.option("--csv", "csv_path", default=None)
def conjecture75(q, certify, threads, out, csv_path):
    """Count norms N(b) of scattered U_{b,1} over F_{q^6} and compare with the formula."""
    from .experiments import conjecture75_count

    rep = conjecture75_count(q, certify, threads)
    if csv_path:
        append_csv_row(csv_path, {"q": q, "n": 3, "s": 1, "scattered": rep.n_scattered,
                                  "norm_classes": rep.count, "expected": rep.expected})
    _emit(rep.to_dict(), out)


@main.command()
@click.option("--q", type=int, required=True)
@click.option("--out", default=None)
def thm71(q, out):
    """Find b in F_{q^2} with U_{b,1} scattered over F_{q^6}."""
    from .errors import NoWitnessError
    from .experiments import theorem71_witness

    try:
        rep = theorem71_witness(q)
    except NoWitnessError as exc:
        raise click.ClickException(str(exc)) from exc
    _emit(rep.to_dict(), out)


@main.command()
@click.option("--q", type=int, required=True)
@click.option("--out", default=None)
def thm72(q, out):
    """Check U_{b,1} over F_{q^8} with b^2 = -1."""
    from .errors import InvalidSubspaceError
    from .experiments import theorem72_verify

    try:
        rep = theorem72_verify(q)
    except InvalidSubspaceError as exc:
        raise click.ClickException(str(exc)) from exc
    _emit(rep.to_dict(), out)


@main.command()
@click.option("--q", type=int, required=True)
@click.option("--n", type=click.Choice(["3", "4"]), default="3", show_default=True)
@click.option("--samples", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default=None)
def minors(q, n, samples, seed, out):
    """Compare Dickson minors with their closed forms on random samples."""
    from .experiments import minor_identity_suite

    res = minor_identity_suite(q, int(n), samples, seed)
    _emit([{"identity": r.name, "matches": r.matches, "total": r.total,
            "counterexamples": r.counterexamples} for r in res], out)


@main.command()
@field_options
@click.option("--s", type=int, default=1, show_default=True)
@click.option("--b", type=int, default=None, help="First b (encoding).")
@click.option("--b2", type=int, default=None, help="Second b (encoding).")
@click.option("--s2", type=int, default=None)
@click.option("--bruteforce", is_flag=True, help="Also run the exhaustive ΓL search.")
@click.option("--out", default=None)
def equiv(spec, s, b, b2, s2, bruteforce, out):
    """Equivalence of U_{b,s} and U_{b2,s2}; without --b, list the classes of valid b."""
    from .equivalence import brute_force_gamma_equiv, equivalence_classes, equivalent
    from .linset import SubspaceU

    ctx = make_field(spec)
    if b is None:
        classes = equivalence_classes(ctx, s)
        _emit({"s": s, "classes": [{"norms": c.norms, "representative": c.representative,
                                    "size": c.size} for c in classes]}, out)
        return
    if b2 is None:
        raise click.UsageError("--b2 is required with --b")
    s2 = s if s2 is None else s2
    data = {"b": b, "s": s, "b2": b2, "s2": s2, "norm_criterion": equivalent(ctx, b, s, b2, s2)}
    if bruteforce:
        data["bruteforce"] = brute_force_gamma_equiv(SubspaceU.parametric(ctx, b, s),
                                                     SubspaceU.parametric(ctx, b2, s2))
    _emit(data, out)


def _code_for(ctx, s, b, f):
    from .linset import SubspaceU
    from .qpoly import QPoly
    from .rankcode import code_from_subspace

    if f is not None:
        return code_from_subspace(SubspaceU.graph(QPoly(ctx, _parse_ints(f))))
    if b is None:
        return code_from_subspace(SubspaceU.graph(QPoly.monomial(ctx, s)))
    return code_from_subspace(SubspaceU.parametric(ctx, b, s))


@main.command("code-report")
@field_options
@click.option("--s", type=int, default=1, show_default=True)
@click.option("--b", type=int, default=None, help="Use f = b x^{q^s} + x^{q^{s+n}}.")
@click.option("--f", "f", default=None, help="Comma-separated coefficients of f.")
@click.option("--out", default=None)
def code_report_cmd(spec, s, b, f, out):
    """Parameters, MRD flag and nucleus of C_f (default f = x^{q^s})."""
    from .rankcode import code_report

    ctx = make_field(spec)
    _emit(code_report(_code_for(ctx, s, b, f)), out)


@main.command()
@field_options
@click.option("--s", type=int, default=1, show_default=True)
@click.option("--b", type=int, default=None)
@click.option("--f", "f", default=None)
@click.option("--strategy", type=click.Choice(["closed", "bruteforce"]), default="closed",
              show_default=True)
@click.option("--out", default=None)
def nucleus(spec, s, b, f, strategy, out):
    """Middle nucleus of C_f."""
    from .rankcode import middle_nucleus

    ctx = make_field(spec)
    rep = middle_nucleus(_code_for(ctx, s, b, f), strategy)
    _emit(rep.to_dict(), out)


if __name__ == "__main__":
    main()
